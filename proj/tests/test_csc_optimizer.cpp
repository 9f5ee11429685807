#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tgk/csc_optimizer.hpp"
#include "tgk/errors.hpp"
#include "tgk/polytope.hpp"
#include "tgk/potential.hpp"

using namespace tgk;

namespace {

std::vector<Vec> segment_grid() {
  return interior_grid(segment_polytope(0.0, 1.0), GridSpec{101, 0.05});
}

}  // namespace

TEST_CASE("curvature variance vanishes exactly on round and flat potentials") {
  const MomentPolytope seg = segment_polytope(0.0, 1.0);
  const std::vector<Vec> grid = segment_grid();
  const PerturbationBasis basis = monomial_basis({{4}});
  const GKParams p = GKParams::zero(1);
  const Vec zero = Vec::Zero(1);

  CHECK(csc_objective(guillemin_potential(seg), p, grid, basis, zero) <= 1e-16);
  CHECK(csc_objective(quadratic_potential(seg), p, grid, basis, zero) == 0.0);

  const PotentialModel pert =
      guillemin_potential(seg).perturbed({Monomial{{4}, 0.01}});
  CHECK(csc_objective(pert, p, grid, basis, zero) > 1e-3);
}

TEST_CASE("objective ignores the antisymmetric part of phi bitwise") {
  const MomentPolytope sq = box_polytope(Vec::Zero(2), Vec::Ones(2));
  const std::vector<Vec> grid = interior_grid(sq, GridSpec{15, 0.05});
  const PotentialModel model =
      guillemin_potential(sq).perturbed({Monomial{{2, 2}, 0.005}});
  const PerturbationBasis basis = monomial_basis({{2, 2}, {4, 0}}, 0.05);
  Vec c(2);
  c << 0.01, -0.02;

  Mat F = Mat::Zero(2, 2);
  F(0, 1) = 0.2;
  F(1, 0) = -0.2;
  Mat C = Mat::Zero(2, 2);
  C(0, 1) = 0.4;
  C(1, 0) = -0.4;

  const double without_c = csc_objective(model, GKParams(Mat::Zero(2, 2), F), grid, basis, c);
  const double with_c = csc_objective(model, GKParams(C, F), grid, basis, c);
  CHECK(without_c == with_c);
  CHECK(without_c > 0.0);
}

TEST_CASE("convexity violations hit the barrier instead of throwing") {
  const MomentPolytope seg = segment_polytope(0.0, 1.0);
  const std::vector<Vec> grid = segment_grid();
  const PerturbationBasis wide = monomial_basis({{4}}, 8.0);
  const GKParams p = GKParams::zero(1);

  Vec breaking(1);
  breaking << -8.0;
  CHECK(std::isinf(csc_objective(guillemin_potential(seg), p, grid, wide, breaking)));

  Vec ok = Vec::Zero(1);
  CHECK_THROWS_AS(csc_objective(guillemin_potential(seg), p, {}, wide, ok), domain_error);
  Vec mismatched = Vec::Zero(2);
  CHECK_THROWS_AS(csc_objective(guillemin_potential(seg), p, grid, wide, mismatched),
                  domain_error);

  PerturbationBasis offset = wide;
  offset.lower(0) = 0.5;
  CHECK_THROWS_AS(csc_objective(guillemin_potential(seg), p, grid, offset, ok),
                  domain_error);
}

TEST_CASE("descent restores the round potential after a quartic perturbation") {
  const MomentPolytope seg = segment_polytope(0.0, 1.0);
  const std::vector<Vec> grid = segment_grid();
  const PotentialModel pert =
      guillemin_potential(seg).perturbed({Monomial{{4}, 0.01}});
  const PerturbationBasis basis = monomial_basis({{4}});

  const OptReport rep = optimize(pert, GKParams::zero(1), grid, basis, 200);
  CHECK(rep.converged);
  CHECK_FALSE(rep.stalled);
  CHECK(rep.iterations <= 200);
  CHECK(rep.objective <= 1e-8);
  CHECK(std::abs(rep.coeffs(0) + 0.01) <= 1e-4);
  CHECK(rep.kappa_max - rep.kappa_min <= 1e-4);

  REQUIRE(rep.history.size() == static_cast<size_t>(rep.iterations) + 1);
  for (size_t i = 1; i < rep.history.size(); ++i) {
    CHECK(rep.history[i] <= rep.history[i - 1]);
  }
}

TEST_CASE("a two-coefficient basis recovers the planted term and zeroes the decoy") {
  const MomentPolytope sq = box_polytope(Vec::Zero(2), Vec::Ones(2));
  const std::vector<Vec> grid = interior_grid(sq, GridSpec{21, 0.05});
  const PotentialModel pert =
      guillemin_potential(sq).perturbed({Monomial{{2, 2}, 0.005}});
  const PerturbationBasis basis = monomial_basis({{2, 2}, {4, 0}}, 0.05);

  const OptReport rep = optimize(pert, GKParams::zero(2), grid, basis, 120);
  CHECK(rep.converged);
  CHECK(rep.objective <= 1e-8);
  CHECK(std::abs(rep.coeffs(0) + 0.005) <= 1e-3);
  CHECK(std::abs(rep.coeffs(1)) <= 1e-3);
  CHECK(rep.kappa_max - rep.kappa_min <= 1e-3);
}

TEST_CASE("starting at a minimum takes no steps") {
  const OptReport rep = optimize(guillemin_potential(segment_polytope(0.0, 1.0)),
                                 GKParams::zero(1), segment_grid(),
                                 monomial_basis({{4}}), 50);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.history.size() == 1);
  CHECK(rep.coeffs(0) == 0.0);
}

TEST_CASE("frozen coefficient boxes stall the descent instead of throwing") {
  const MomentPolytope seg = segment_polytope(0.0, 1.0);
  const PotentialModel pert =
      guillemin_potential(seg).perturbed({Monomial{{4}, 0.01}});
  const std::vector<Vec> grid = segment_grid();

  const OptReport rep = optimize(pert, GKParams::zero(1), grid,
                                 monomial_basis({{4}}, 0.0), 50);
  CHECK(rep.stalled);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.objective > 1e-3);

  CHECK_THROWS_AS(optimize(pert, GKParams::zero(1), grid, monomial_basis({{4}}), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize(pert, GKParams::zero(1), grid, monomial_basis({}), 10),
                  std::invalid_argument);
}

TEST_CASE("optimizer runs are bitwise deterministic") {
  const MomentPolytope seg = segment_polytope(0.0, 1.0);
  const PotentialModel pert =
      guillemin_potential(seg).perturbed({Monomial{{4}, 0.01}});
  const std::vector<Vec> grid = segment_grid();
  const PerturbationBasis basis = monomial_basis({{4}});

  const OptReport a = optimize(pert, GKParams::zero(1), grid, basis, 200);
  const OptReport b = optimize(pert, GKParams::zero(1), grid, basis, 200);
  CHECK(a.objective == b.objective);
  CHECK(a.coeffs(0) == b.coeffs(0));
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i] == b.history[i]);
}
