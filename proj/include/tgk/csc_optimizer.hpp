#pragma once

#include <vector>

#include "tgk/gk_frame.hpp"
#include "tgk/linalg.hpp"
#include "tgk/potential.hpp"

namespace tgk {

// Finite-dimensional family of polynomial perturbations of a base potential.
// Coefficient i multiplies mu^powers[i] and is confined to [lower(i), upper(i)].
// Every box contains zero, so the unperturbed potential is always reachable.
struct PerturbationBasis {
  std::vector<std::vector<int>> powers;
  Vec lower;
  Vec upper;

  int size() const { return static_cast<int>(powers.size()); }
};

// Symmetric boxes |coeff_i| <= box around zero.
PerturbationBasis monomial_basis(std::vector<std::vector<int>> powers,
                                 double box = 0.1);

// The base model plus sum_i coeffs(i) * mu^powers[i] (zero terms are dropped).
PotentialModel apply_basis(const PotentialModel& model,
                           const PerturbationBasis& basis, const Vec& coeffs);

// Variance of the scalar curvature over the grid for the perturbed potential:
// sum_mu (kappa(mu) - mean kappa)^2 / |grid|. Returns +infinity when the
// perturbation destroys convexity (or the curvature is otherwise unevaluable)
// at any grid point; barrier points never throw.
double csc_objective(const PotentialModel& model, const GKParams& params,
                     const std::vector<Vec>& grid, const PerturbationBasis& basis,
                     const Vec& coeffs);

struct OptReport {
  Vec coeffs;                   // final coefficients
  std::vector<double> history;  // objective at start and after every accepted step
  double objective = 0.0;       // final curvature variance
  double kappa_min = 0.0;       // curvature range at the final coefficients
  double kappa_max = 0.0;
  int iterations = 0;           // accepted steps
  bool converged = false;       // objective < 1e-10 or accepted step < 1e-12
  bool stalled = false;         // no admissible descent direction remained
};

// Minimizes the curvature variance over the coefficient box by coordinate-wise
// central-difference gradient descent with a backtracking line search. Fully
// deterministic. Stops on convergence, stall, or after `budget` accepted steps.
OptReport optimize(const PotentialModel& model, const GKParams& params,
                   const std::vector<Vec>& grid, const PerturbationBasis& basis,
                   int budget);

}  // namespace tgk
