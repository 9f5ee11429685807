#include "tgk/polytope.hpp"

#include <string>

#include "tgk/errors.hpp"
#include "tgk/lp.hpp"

namespace tgk {

namespace {

Mat facet_matrix(const std::vector<Facet>& facets, int dim) {
  Mat a(facets.size(), dim);
  for (size_t k = 0; k < facets.size(); ++k) a.row(k) = facets[k].normal.transpose();
  return a;
}

Vec facet_offsets(const std::vector<Facet>& facets) {
  Vec c(facets.size());
  for (size_t k = 0; k < facets.size(); ++k) c(k) = facets[k].offset;
  return c;
}

}  // namespace

MomentPolytope::MomentPolytope(int dim, std::vector<Facet> facets)
    : dim_(dim), facets_(std::move(facets)) {
  if (dim_ < 1) throw polytope_error("polytope dimension must be >= 1");
  if (facets_.empty()) throw polytope_error("polytope needs at least one facet");
  for (size_t k = 0; k < facets_.size(); ++k) {
    if (facets_[k].normal.size() != dim_) {
      throw polytope_error("facet " + std::to_string(k) + " normal has wrong dimension");
    }
    if (facets_[k].normal.norm() < 1e-12) {
      throw polytope_error("facet " + std::to_string(k) + " has a zero normal");
    }
  }

  // Interior points satisfy A mu >= c, i.e. -A mu <= -c for the LP solver.
  const Mat neg_a = -facet_matrix(facets_, dim_);
  const Vec neg_c = -facet_offsets(facets_);

  // Boundedness probes along +-coordinate directions.
  Vec lo(dim_), hi(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (double sign : {+1.0, -1.0}) {
      Vec obj = Vec::Zero(dim_);
      obj(i) = sign;
      const lp_result r = solve_lp_max(neg_a, neg_c, obj);
      if (r.status == lp_result::status_t::unbounded) {
        throw polytope_error("polytope is unbounded along direction " +
                             std::string(sign > 0 ? "+" : "-") + "mu_" +
                             std::to_string(i + 1));
      }
      if (r.status == lp_result::status_t::infeasible) {
        throw polytope_error("polytope is empty");
      }
      (sign > 0 ? hi(i) : lo(i)) = sign * r.value;
    }
  }
  box_ = {lo, hi};

  // Chebyshev center: maximize r subject to l_k(mu) >= r * |normal_k|.
  Mat a_cheb(facets_.size(), dim_ + 1);
  Vec b_cheb(facets_.size());
  for (size_t k = 0; k < facets_.size(); ++k) {
    a_cheb.block(k, 0, 1, dim_) = -facets_[k].normal.transpose();
    a_cheb(k, dim_) = facets_[k].normal.norm();
    b_cheb(k) = -facets_[k].offset;
  }
  Vec obj = Vec::Zero(dim_ + 1);
  obj(dim_) = 1.0;
  const lp_result r = solve_lp_max(a_cheb, b_cheb, obj);
  if (r.status != lp_result::status_t::optimal || r.value <= 1e-9) {
    throw polytope_error("polytope has empty interior");
  }
  center_ = r.x.head(dim_);
  inradius_ = r.value;
}

double MomentPolytope::min_ell(const Vec& mu) const {
  double m = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < facets_.size(); ++k) m = std::min(m, ell(static_cast<int>(k), mu));
  return m;
}

std::vector<Vec> interior_grid(const MomentPolytope& polytope, const GridSpec& spec) {
  if (spec.resolution < 1) throw grid_error("grid resolution must be >= 1");
  if (!(spec.margin > 0.0 && spec.margin < 0.5)) {
    throw grid_error("grid margin must lie in (0, 0.5)");
  }

  const int n = polytope.dim();
  const auto& [lo, hi] = polytope.bounding_box();
  Vec start(n), step(n);
  for (int i = 0; i < n; ++i) {
    const double pad = spec.margin * (hi(i) - lo(i));
    const double a = lo(i) + pad;
    const double b = hi(i) - pad;
    if (spec.resolution == 1) {
      start(i) = 0.5 * (a + b);
      step(i) = 0.0;
    } else {
      start(i) = a;
      step(i) = (b - a) / (spec.resolution - 1);
    }
  }

  const double min_ell = spec.margin * polytope.inradius();
  std::vector<Vec> points;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec mu(n);
    for (int i = 0; i < n; ++i) mu(i) = start(i) + idx[i] * step(i);
    if (polytope.min_ell(mu) >= min_ell - 1e-12) points.push_back(mu);
    // Lexicographic order: last axis fastest.
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == spec.resolution) idx[axis--] = 0;
    if (axis < 0) break;
  }
  if (points.empty()) {
    throw grid_error("grid too coarse: no point clears the margin condition");
  }
  return points;
}

MomentPolytope box_polytope(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  std::vector<Facet> facets;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    facets.push_back({e, lo(i)});
    facets.push_back({-e, -hi(i)});
  }
  return MomentPolytope(n, std::move(facets));
}

MomentPolytope segment_polytope(double lo, double hi) {
  Vec l(1), h(1);
  l << lo;
  h << hi;
  return box_polytope(l, h);
}

}  // namespace tgk
