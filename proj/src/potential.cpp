#include "tgk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tgk/errors.hpp"

namespace tgk {

namespace {

std::string point_str(const Vec& mu) {
  std::ostringstream os;
  os << "(" << mu.transpose() << ")";
  return os.str();
}

// d^|d| (coeff * mu^powers) with one falling factorial per axis; zero as soon
// as any axis is differentiated past its exponent. Depends on d only through
// per-axis counts, so permuted index tuples get bitwise-identical values.
double monomial_partial(const Monomial& m, const std::vector<int>& d, const Vec& mu) {
  double out = m.coeff;
  for (int i = 0; i < static_cast<int>(m.powers.size()); ++i) {
    const int p = m.powers[i];
    const int di = d[i];
    if (di > p) return 0.0;
    double fall = 1.0;
    for (int k = 0; k < di; ++k) fall *= static_cast<double>(p - k);
    out *= fall * std::pow(mu(i), p - di);
  }
  return out;
}

}  // namespace

PotentialModel::PotentialModel(PotentialKind kind, MomentPolytope polytope, Mat quad,
                               std::vector<Monomial> perturbation)
    : kind_(kind),
      polytope_(std::move(polytope)),
      quad_(std::move(quad)),
      perturbation_(std::move(perturbation)) {
  for (const auto& m : perturbation_) {
    if (static_cast<int>(m.powers.size()) != polytope_.dim()) {
      throw domain_error("perturbation multi-index has wrong dimension");
    }
    for (int p : m.powers) {
      if (p < 0) throw domain_error("perturbation powers must be nonnegative");
    }
  }
}

PotentialModel PotentialModel::guillemin(MomentPolytope polytope) {
  return PotentialModel(PotentialKind::guillemin, std::move(polytope), Mat(), {});
}

PotentialModel PotentialModel::quadratic(MomentPolytope polytope, Mat q) {
  const int n = polytope.dim();
  if (q.size() == 0) q = Mat::Identity(n, n);
  if (q.rows() != n || q.cols() != n || !q.isApprox(q.transpose())) {
    throw domain_error("quadratic potential matrix must be symmetric n x n");
  }
  q = sym(q);  // keep the stored Hessian exactly symmetric
  if (min_eigenvalue_sym(q) <= 0.0) {
    throw domain_error("quadratic potential matrix must be positive definite");
  }
  return PotentialModel(PotentialKind::quadratic, std::move(polytope), std::move(q), {});
}

PotentialModel PotentialModel::perturbed(std::vector<Monomial> extra) const {
  std::vector<Monomial> all = perturbation_;
  all.insert(all.end(), extra.begin(), extra.end());
  const PotentialKind kind =
      kind_ == PotentialKind::quadratic ? PotentialKind::quadratic
      : all.empty()                     ? PotentialKind::guillemin
                                        : PotentialKind::guillemin_plus_polynomial;
  return PotentialModel(kind, polytope_, quad_, std::move(all));
}

TauDerivatives PotentialModel::derivatives(const Vec& mu, int order) const {
  const int n = polytope_.dim();
  if (mu.size() != n) throw domain_error("evaluation point has wrong dimension");
  if (order < 0 || order > 4) throw domain_error("derivative order must be in 0..4");
  if (!polytope_.is_interior(mu)) {
    throw domain_error("evaluation point " + point_str(mu) +
                       " is not strictly inside the polytope");
  }

  TauDerivatives d;
  d.order = order;
  d.grad = Vec::Zero(n);
  d.hess = Mat::Zero(n, n);
  if (order >= 3) d.third.assign(n, Mat::Zero(n, n));
  if (order >= 4) d.fourth.assign(n, std::vector<Mat>(n, Mat::Zero(n, n)));

  if (kind_ == PotentialKind::quadratic) {
    d.value = 0.5 * mu.dot(quad_ * mu);
    d.grad = quad_ * mu;
    d.hess = quad_;
  } else {
    // tau = 1/2 sum_k l_k log l_k, differentiated in closed form:
    //   grad        = 1/2 sum_k (log l_k + 1) a_k
    //   hess        = 1/2 sum_k a_k a_k^T / l_k
    //   third[p]    = -1/2 sum_k a_kp a_k a_k^T / l_k^2
    //   fourth[p][q] =     sum_k a_kp a_kq a_k a_k^T / l_k^3
    // Index products are taken in sorted order so that the stored tensors are
    // bitwise symmetric under index permutations.
    for (const Facet& f : polytope_.facets()) {
      const Vec& a = f.normal;
      const double l = a.dot(mu) - f.offset;
      d.value += 0.5 * l * std::log(l);
      d.grad += 0.5 * (std::log(l) + 1.0) * a;
      d.hess += 0.5 / l * (a * a.transpose());
      if (order >= 3) {
        const double w3 = -0.5 / (l * l);
        for (int p = 0; p < n; ++p) {
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              int s[3] = {p, i, j};
              std::sort(s, s + 3);
              d.third[p](i, j) += w3 * a(s[0]) * a(s[1]) * a(s[2]);
            }
          }
        }
      }
      if (order >= 4) {
        const double w4 = 1.0 / (l * l * l);
        for (int p = 0; p < n; ++p) {
          for (int q = 0; q < n; ++q) {
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) {
                int s[4] = {p, q, i, j};
                std::sort(s, s + 4);
                d.fourth[p][q](i, j) += w4 * a(s[0]) * a(s[1]) * a(s[2]) * a(s[3]);
              }
            }
          }
        }
      }
    }
  }

  for (const Monomial& m : perturbation_) {
    std::vector<int> dd(n, 0);
    d.value += monomial_partial(m, dd, mu);
    for (int i = 0; i < n; ++i) {
      dd.assign(n, 0);
      ++dd[i];
      d.grad(i) += monomial_partial(m, dd, mu);
      for (int j = 0; j < n; ++j) {
        dd.assign(n, 0);
        ++dd[i], ++dd[j];
        d.hess(i, j) += monomial_partial(m, dd, mu);
        if (order >= 3) {
          for (int p = 0; p < n; ++p) {
            dd.assign(n, 0);
            ++dd[i], ++dd[j], ++dd[p];
            d.third[p](i, j) += monomial_partial(m, dd, mu);
          }
        }
        if (order >= 4) {
          for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
              dd.assign(n, 0);
              ++dd[i], ++dd[j], ++dd[p], ++dd[q];
              d.fourth[p][q](i, j) += monomial_partial(m, dd, mu);
            }
          }
        }
      }
    }
  }

  if (order >= 2) {
    const double eig = min_eigenvalue_sym(d.hess);
    if (eig <= 0.0) {
      throw convexity_error("potential is not strictly convex at " + point_str(mu) +
                                " (min Hessian eigenvalue " + std::to_string(eig) + ")",
                            mu, eig);
    }
  }
  return d;
}

}  // namespace tgk
