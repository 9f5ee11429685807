#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tgk {

// Geometric-domain problems: evaluation outside the polytope interior,
// malformed polytopes, bad multi-indices.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polytope fails its invariants (zero normal, unbounded, empty interior).
struct polytope_error : domain_error {
  using domain_error::domain_error;
};

// Hessian of the potential is not positive definite at an evaluation point.
struct convexity_error : std::runtime_error {
  Eigen::VectorXd point;
  double min_eigenvalue;
  convexity_error(const std::string& msg, Eigen::VectorXd mu, double eig)
      : std::runtime_error(msg), point(std::move(mu)), min_eigenvalue(eig) {}
};

// (C, F) fail the positivity condition I + (1/4)(phi_s^{-1/2} F phi_s^{-1/2})^2 > 0.
struct admissibility_error : std::runtime_error {
  double min_eigenvalue;
  admissibility_error(const std::string& msg, double eig)
      : std::runtime_error(msg), min_eigenvalue(eig) {}
};

// A matrix that must be inverted is too ill-conditioned to trust.
struct conditioning_error : std::runtime_error {
  double condition;
  conditioning_error(const std::string& msg, double cond)
      : std::runtime_error(msg), condition(cond) {}
};

// Grid construction produced no points, or the resolution/margin is invalid.
struct grid_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input (config files, CLI arguments).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tgk
