#include "tgk/csc_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "tgk/curvature.hpp"
#include "tgk/errors.hpp"

namespace tgk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kObjectiveTol = 1e-10;
constexpr double kStepTol = 1e-12;
constexpr double kFdStep = 1e-5;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

void validate(const PerturbationBasis& basis, int dim) {
  const int m = basis.size();
  if (basis.lower.size() != m || basis.upper.size() != m) {
    throw domain_error("perturbation basis boxes do not match its term count");
  }
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(basis.powers[i].size()) != dim) {
      throw domain_error("perturbation multi-index has wrong dimension");
    }
    for (int p : basis.powers[i]) {
      if (p < 0) throw domain_error("perturbation multi-index has a negative power");
    }
    if (basis.lower(i) > 0.0 || basis.upper(i) < 0.0) {
      throw domain_error("perturbation coefficient box must contain zero");
    }
  }
}

// Scalar curvature at every grid point; false when any point hits the
// convexity barrier.
bool evaluate_kappas(const PotentialModel& model, const GKParams& params,
                     const std::vector<Vec>& grid, const PerturbationBasis& basis,
                     const Vec& coeffs, std::vector<double>& kappa) {
  const PotentialModel m = apply_basis(model, basis, coeffs);
  const std::int64_t count = static_cast<std::int64_t>(grid.size());
  kappa.assign(grid.size(), 0.0);
  int bad = 0;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      kappa[i] = kappa_boulanger(m.derivatives(grid[i], 4), params.F);
    } catch (const std::exception&) {
#pragma omp atomic write
      bad = 1;
    }
  }
  return bad == 0;
}

Vec clamp_to_box(const PerturbationBasis& basis, Vec x) {
  for (int i = 0; i < x.size(); ++i) {
    x(i) = std::min(std::max(x(i), basis.lower(i)), basis.upper(i));
  }
  return x;
}

}  // namespace

PerturbationBasis monomial_basis(std::vector<std::vector<int>> powers, double box) {
  if (box < 0.0) throw domain_error("coefficient box half-width must be >= 0");
  const int m = static_cast<int>(powers.size());
  PerturbationBasis basis{std::move(powers), Vec::Constant(m, -box),
                          Vec::Constant(m, box)};
  return basis;
}

PotentialModel apply_basis(const PotentialModel& model,
                           const PerturbationBasis& basis, const Vec& coeffs) {
  if (coeffs.size() != basis.size()) {
    throw domain_error("coefficient vector does not match the basis size");
  }
  std::vector<Monomial> extra;
  for (int i = 0; i < basis.size(); ++i) {
    if (coeffs(i) != 0.0) extra.push_back(Monomial{basis.powers[i], coeffs(i)});
  }
  return model.perturbed(std::move(extra));
}

double csc_objective(const PotentialModel& model, const GKParams& params,
                     const std::vector<Vec>& grid, const PerturbationBasis& basis,
                     const Vec& coeffs) {
  validate(basis, model.polytope().dim());
  if (grid.empty()) throw domain_error("curvature variance needs a nonempty grid");

  std::vector<double> kappa;
  if (!evaluate_kappas(model, params, grid, basis, coeffs, kappa)) return kInf;

  double mean = 0.0;
  for (double k : kappa) mean += k;
  mean /= static_cast<double>(kappa.size());
  double var = 0.0;
  for (double k : kappa) var += (k - mean) * (k - mean);
  return var / static_cast<double>(kappa.size());
}

OptReport optimize(const PotentialModel& model, const GKParams& params,
                   const std::vector<Vec>& grid, const PerturbationBasis& basis,
                   int budget) {
  if (budget < 1) throw std::invalid_argument("optimizer budget must be at least 1");
  if (basis.size() == 0) throw std::invalid_argument("perturbation basis is empty");
  validate(basis, model.polytope().dim());
  if (grid.empty()) throw domain_error("optimizer needs a nonempty grid");

  const int m = basis.size();
  const auto f = [&](const Vec& c) {
    return csc_objective(model, params, grid, basis, c);
  };

  OptReport rep;
  Vec x = Vec::Zero(m);
  double obj = f(x);
  if (!std::isfinite(obj)) {
    throw domain_error("base potential is not admissible on the grid");
  }
  rep.history.push_back(obj);

  double t0 = 1.0;
  rep.converged = obj < kObjectiveTol;
  while (!rep.converged && rep.iterations < budget) {
    // Central-difference gradient with box-clamped probes; one-sided when the
    // opposite probe is frozen by the box or hits the barrier.
    Vec g = Vec::Zero(m);
    bool informative = false;
    for (int i = 0; i < m; ++i) {
      const double xu = std::min(x(i) + kFdStep, basis.upper(i));
      const double xd = std::max(x(i) - kFdStep, basis.lower(i));
      double fu = kInf, fd = kInf;
      if (xu > x(i)) {
        Vec p = x;
        p(i) = xu;
        fu = f(p);
      }
      if (xd < x(i)) {
        Vec p = x;
        p(i) = xd;
        fd = f(p);
      }
      if (std::isfinite(fu) && std::isfinite(fd)) {
        g(i) = (fu - fd) / (xu - xd);
      } else if (std::isfinite(fu)) {
        g(i) = (fu - obj) / (xu - x(i));
      } else if (std::isfinite(fd)) {
        g(i) = (obj - fd) / (x(i) - xd);
      } else {
        continue;
      }
      informative = true;
    }
    if (!informative || g.lpNorm<Eigen::Infinity>() == 0.0) {
      rep.stalled = true;
      break;
    }

    // Backtracking line search along -g. Prefer Armijo-sufficient decrease;
    // fall back to the best plain decrease seen so the search never rejects
    // genuine progress.
    const double g2 = g.squaredNorm();
    double t = t0;
    double best_obj = obj;
    Vec best_x;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      const Vec xn = clamp_to_box(basis, x - t * g);
      if ((xn - x).lpNorm<Eigen::Infinity>() == 0.0) continue;
      const double fn = f(xn);
      if (!std::isfinite(fn)) continue;
      if (fn < best_obj) {
        best_obj = fn;
        best_x = xn;
      }
      if (fn <= obj - kArmijo * t * g2) {
        accepted = true;
        t0 = std::min(1.0, 4.0 * t);
        break;
      }
    }
    if (!accepted && best_obj >= obj) {
      rep.stalled = true;
      break;
    }

    const double step = (best_x - x).lpNorm<Eigen::Infinity>();
    x = best_x;
    obj = best_obj;
    rep.history.push_back(obj);
    ++rep.iterations;
    if (obj < kObjectiveTol || step < kStepTol) rep.converged = true;
  }

  rep.coeffs = x;
  rep.objective = obj;
  std::vector<double> kappa;
  if (evaluate_kappas(model, params, grid, basis, x, kappa)) {
    rep.kappa_min = *std::min_element(kappa.begin(), kappa.end());
    rep.kappa_max = *std::max_element(kappa.begin(), kappa.end());
  } else {
    rep.kappa_min = rep.kappa_max = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace tgk
