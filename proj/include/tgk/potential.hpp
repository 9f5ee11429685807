#pragma once

#include <vector>

#include "tgk/linalg.hpp"
#include "tgk/polytope.hpp"

namespace tgk {

enum class PotentialKind { guillemin, guillemin_plus_polynomial, quadratic };

// One polynomial term coeff * prod_i mu_i^powers[i].
struct Monomial {
  std::vector<int> powers;
  double coeff = 0.0;
};

// Derivative tensors of the potential at one point, all fully symmetric:
//   hess(i,j)         = d2 tau / dmu_i dmu_j          (phi_s)
//   third[p](i,j)     = d3 tau / dmu_p dmu_i dmu_j
//   fourth[p][q](i,j) = d4 tau / dmu_p dmu_q dmu_i dmu_j
struct TauDerivatives {
  int order = 0;
  double value = 0.0;
  Vec grad;
  Mat hess;
  std::vector<Mat> third;
  std::vector<std::vector<Mat>> fourth;
};

// Symplectic potential tau on the polytope interior with closed-form
// derivatives to fourth order. Immutable after construction; evaluation is a
// pure function of (mu, order) and safe to call concurrently.
class PotentialModel {
 public:
  static PotentialModel guillemin(MomentPolytope polytope);
  // tau = 1/2 mu^T Q mu; Q defaults to the identity.
  static PotentialModel quadratic(MomentPolytope polytope, Mat q = Mat());

  // Same model plus polynomial terms; convexity is re-checked lazily at each
  // evaluation point, not globally.
  PotentialModel perturbed(std::vector<Monomial> extra) const;

  // Throws domain_error off the interior and convexity_error (carrying the
  // point) where the Hessian fails to be positive definite.
  TauDerivatives derivatives(const Vec& mu, int order = 4) const;

  PotentialKind kind() const { return kind_; }
  int dim() const { return polytope_.dim(); }
  const MomentPolytope& polytope() const { return polytope_; }
  const std::vector<Monomial>& perturbation() const { return perturbation_; }

 private:
  PotentialModel(PotentialKind kind, MomentPolytope polytope, Mat quad,
                 std::vector<Monomial> perturbation);

  PotentialKind kind_;
  MomentPolytope polytope_;
  Mat quad_;  // only used by the quadratic kind
  std::vector<Monomial> perturbation_;
};

inline PotentialModel guillemin_potential(MomentPolytope polytope) {
  return PotentialModel::guillemin(std::move(polytope));
}

inline PotentialModel quadratic_potential(MomentPolytope polytope, Mat q = Mat()) {
  return PotentialModel::quadratic(std::move(polytope), std::move(q));
}

inline PotentialModel perturbed_potential(const PotentialModel& base,
                                          std::vector<Monomial> perturbation) {
  return base.perturbed(std::move(perturbation));
}

inline TauDerivatives tau_derivatives(const PotentialModel& model, const Vec& mu,
                                      int order = 4) {
  return model.derivatives(mu, order);
}

}  // namespace tgk
