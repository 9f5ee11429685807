#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tgk/errors.hpp"
#include "tgk/polytope.hpp"
#include "tgk/potential.hpp"

using namespace tgk;

namespace {

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

MomentPolytope unit_square() { return box_polytope(vec2(0, 0), vec2(1, 1)); }

MomentPolytope unit_simplex2() {
  std::vector<Facet> f;
  f.push_back({vec2(1, 0), 0.0});
  f.push_back({vec2(0, 1), 0.0});
  f.push_back({vec2(-1, -1), -1.0});
  return MomentPolytope(2, std::move(f));
}

// Central finite difference in mu_p of an entry extractor, used as the oracle
// for one derivative order against the next.
template <typename F>
double fd_partial(const F& f, const Vec& mu, int p, double h) {
  Vec up = mu, dn = mu;
  up(p) += h;
  dn(p) -= h;
  return (f(up) - f(dn)) / (2 * h);
}

}  // namespace

TEST_CASE("polytope validation and geometry") {
  MomentPolytope seg = segment_polytope(0, 1);
  CHECK(seg.dim() == 1);
  CHECK(seg.chebyshev_center()(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(seg.inradius() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(seg.bounding_box().first(0) == doctest::Approx(0.0));
  CHECK(seg.bounding_box().second(0) == doctest::Approx(1.0));

  MomentPolytope sq = unit_square();
  CHECK(sq.inradius() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.chebyshev_center().isApprox(vec2(0.5, 0.5), 1e-10));

  MomentPolytope tri = unit_simplex2();
  CHECK(tri.inradius() == doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-10));
  CHECK(tri.chebyshev_center().isApprox(vec2(tri.inradius(), tri.inradius()), 1e-8));

  CHECK(sq.is_interior(vec2(0.2, 0.8)));
  CHECK_FALSE(sq.is_interior(vec2(0.0, 0.5)));
  CHECK_FALSE(sq.is_interior(vec2(-0.1, 0.5)));
}

TEST_CASE("polytope rejects unbounded and empty configurations") {
  // Half-line mu >= 0.
  CHECK_THROWS_AS(MomentPolytope(1, {{vec1(1), 0.0}}), polytope_error);
  // Strip: bounded in mu_1 only.
  CHECK_THROWS_AS(MomentPolytope(2, {{vec2(1, 0), 0.0}, {vec2(-1, 0), -1.0}}),
                  polytope_error);
  // Empty: mu >= 0 and mu <= -1.
  CHECK_THROWS_AS(MomentPolytope(1, {{vec1(1), 0.0}, {vec1(-1), 1.0}}), polytope_error);
  // Single point: mu >= 0 and mu <= 0 has empty interior.
  CHECK_THROWS_AS(MomentPolytope(1, {{vec1(1), 0.0}, {vec1(-1), 0.0}}), polytope_error);
  // Zero normal.
  CHECK_THROWS_AS(MomentPolytope(1, {{vec1(0), 0.0}, {vec1(-1), -1.0}}), polytope_error);
  // Redundant facets are fine.
  CHECK_NOTHROW(MomentPolytope(
      1, {{vec1(1), 0.0}, {vec1(1), -0.5}, {vec1(-1), -1.0}}));
}

TEST_CASE("interior grid layout") {
  MomentPolytope seg = segment_polytope(0, 1);
  auto pts = interior_grid(seg, {5, 0.1});
  REQUIRE(pts.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(pts[i](0) == doctest::Approx(0.1 + 0.2 * i));

  auto sq_pts = interior_grid(unit_square(), {3, 0.1});
  REQUIRE(sq_pts.size() == 9);
  // Lexicographic: last axis fastest.
  CHECK(sq_pts[0].isApprox(vec2(0.1, 0.1), 1e-12));
  CHECK(sq_pts[1].isApprox(vec2(0.1, 0.5), 1e-12));
  CHECK(sq_pts[3].isApprox(vec2(0.5, 0.1), 1e-12));

  // 101-point scan line used by the curvature anchors.
  auto fine = interior_grid(seg, {101, 0.05});
  CHECK(fine.size() == 101);

  // Flat simplex corner: a coarse grid loses every point to the margin.
  CHECK_THROWS_AS(interior_grid(unit_simplex2(), {2, 0.45}), grid_error);

  CHECK_THROWS_AS(interior_grid(seg, {0, 0.1}), grid_error);
  CHECK_THROWS_AS(interior_grid(seg, {5, 0.0}), grid_error);
  CHECK_THROWS_AS(interior_grid(seg, {5, 0.5}), grid_error);

  // Margin invariant on a generic polytope.
  MomentPolytope tri = unit_simplex2();
  for (const Vec& mu : interior_grid(tri, {7, 0.2})) {
    CHECK(tri.min_ell(mu) >= 0.2 * tri.inradius() - 1e-12);
  }
}

TEST_CASE("guillemin potential closed forms on the segment") {
  PotentialModel m = guillemin_potential(segment_polytope(0, 1));
  auto d = m.derivatives(vec1(0.5));
  CHECK(d.value == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-14));
  CHECK(d.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.third[0](0, 0) == doctest::Approx(0.0));  // symmetric about 0.5

  auto d2 = m.derivatives(vec1(0.25));
  CHECK(d2.hess(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));

  // grad = 1/2 (log mu - log(1 - mu)) here.
  CHECK(d2.grad(0) == doctest::Approx(0.5 * (std::log(0.25) - std::log(0.75))));
}

TEST_CASE("guillemin potential on products is block diagonal") {
  PotentialModel sq = guillemin_potential(unit_square());
  auto d = sq.derivatives(vec2(0.5, 0.5));
  CHECK(d.hess(0, 0) == doctest::Approx(2.0));
  CHECK(d.hess(1, 1) == doctest::Approx(2.0));
  CHECK(d.hess(0, 1) == 0.0);
  CHECK(d.hess(1, 0) == 0.0);

  PotentialModel rect = guillemin_potential(box_polytope(vec2(0, 0), vec2(1, 2)));
  PotentialModel seg1 = guillemin_potential(segment_polytope(0, 1));
  PotentialModel seg2 = guillemin_potential(segment_polytope(0, 2));
  const Vec mu = vec2(0.3, 1.2);
  auto dr = rect.derivatives(mu);
  CHECK(dr.hess(0, 1) == 0.0);
  CHECK(dr.hess(0, 0) == doctest::Approx(seg1.derivatives(vec1(0.3)).hess(0, 0)));
  CHECK(dr.hess(1, 1) == doctest::Approx(seg2.derivatives(vec1(1.2)).hess(0, 0)));
  CHECK(dr.third[0](0, 0) == doctest::Approx(seg1.derivatives(vec1(0.3)).third[0](0, 0)));
  CHECK(dr.third[1](0, 0) == 0.0);
}

TEST_CASE("quadratic potential") {
  PotentialModel m = PotentialModel::quadratic(unit_square());
  auto d = m.derivatives(vec2(0.3, 0.7));
  CHECK(d.value == doctest::Approx(0.5 * (0.09 + 0.49)));
  CHECK(d.hess.isIdentity(1e-15));
  for (int p = 0; p < 2; ++p) {
    CHECK(d.third[p].isZero(0.0));
    for (int q = 0; q < 2; ++q) CHECK(d.fourth[p][q].isZero(0.0));
  }
  Mat bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(PotentialModel::quadratic(unit_square(), bad), domain_error);
}

TEST_CASE("polynomial perturbations") {
  PotentialModel base = guillemin_potential(segment_polytope(0, 1));

  // Zero perturbation changes nothing, bit for bit.
  PotentialModel same = perturbed_potential(base, {});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 10; ++t) {
    const Vec mu = vec1(u(rng));
    auto a = base.derivatives(mu);
    auto b = same.derivatives(mu);
    CHECK(a.value == b.value);
    CHECK(a.grad == b.grad);
    CHECK(a.hess == b.hess);
    CHECK(a.third[0] == b.third[0]);
    CHECK(a.fourth[0][0] == b.fourth[0][0]);
  }

  // c * mu^4 adds 24c to the fourth derivative everywhere.
  const double c = 0.37;
  PotentialModel quart = perturbed_potential(base, {{{4}, c}});
  for (double x : {0.1, 0.45, 0.8}) {
    auto a = base.derivatives(vec1(x));
    auto b = quart.derivatives(vec1(x));
    CHECK(b.fourth[0][0](0, 0) - a.fourth[0][0](0, 0) == doctest::Approx(24 * c).epsilon(1e-12));
  }

  // 0.1 * mu^2 shifts phi_s(0.5) from 2.0 to 2.2.
  PotentialModel quad = perturbed_potential(base, {{{2}, 0.1}});
  CHECK(quad.derivatives(vec1(0.5)).hess(0, 0) == doctest::Approx(2.2).epsilon(1e-14));

  CHECK(quart.kind() == PotentialKind::guillemin_plus_polynomial);
  CHECK_THROWS_AS(perturbed_potential(base, {{{1, 2}, 0.3}}), domain_error);
}

TEST_CASE("derivative tensors are symmetric under index permutations (exact)") {
  PotentialModel m = perturbed_potential(
      guillemin_potential(unit_square()),
      {{{2, 1}, 0.05}, {{0, 4}, -0.02}, {{3, 1}, 0.01}});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.15, 0.85);
  for (int t = 0; t < 5; ++t) {
    const Vec mu = vec2(u(rng), u(rng));
    auto d = m.derivatives(mu);
    CHECK(d.hess == d.hess.transpose().eval());
    for (int p = 0; p < 2; ++p) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          CHECK(d.third[p](i, j) == d.third[p](j, i));
          CHECK(d.third[p](i, j) == d.third[i](p, j));
          for (int q = 0; q < 2; ++q) {
            CHECK(d.fourth[p][q](i, j) == d.fourth[q][p](i, j));
            CHECK(d.fourth[p][q](i, j) == d.fourth[i][j](p, q));
            CHECK(d.fourth[p][q](i, j) == d.fourth[p][i](q, j));
          }
        }
      }
    }
  }
}

TEST_CASE("analytic derivatives match the finite-difference oracle") {
  PotentialModel m = perturbed_potential(guillemin_potential(unit_square()),
                                         {{{2, 2}, 0.04}, {{1, 3}, -0.01}});
  const double h = 1e-4;
  for (const Vec& mu : {vec2(0.5, 0.5), vec2(0.45, 0.55), vec2(0.6, 0.4)}) {
    auto d = m.derivatives(mu);
    for (int p = 0; p < 2; ++p) {
      // order 1 vs order 0; central differences carry O(h^2) truncation, so
      // the comparisons are absolute.
      const double fd1 = fd_partial(
          [&](const Vec& x) { return m.derivatives(x, 0).value; }, mu, p, h);
      CHECK(std::abs(d.grad(p) - fd1) <= 1e-7);
      for (int i = 0; i < 2; ++i) {
        const double fd2 = fd_partial(
            [&](const Vec& x) { return m.derivatives(x, 1).grad(i); }, mu, p, h);
        CHECK(std::abs(d.hess(p, i) - fd2) <= 1e-6);
        for (int j = 0; j < 2; ++j) {
          // order 3 vs FD(order 2), absolute tolerance 1e-6
          const double fd3 = fd_partial(
              [&](const Vec& x) { return m.derivatives(x, 2).hess(i, j); }, mu, p, h);
          CHECK(std::abs(d.third[p](i, j) - fd3) <= 1e-6);
          for (int q = 0; q < 2; ++q) {
            const double fd4 = fd_partial(
                [&](const Vec& x) { return m.derivatives(x, 3).third[q](i, j); }, mu, p,
                h);
            CHECK(std::abs(d.fourth[p][q](i, j) - fd4) <= 1e-5);
          }
        }
      }
    }
  }
}

TEST_CASE("domain and convexity errors") {
  PotentialModel m = guillemin_potential(segment_polytope(0, 1));
  CHECK_THROWS_AS(m.derivatives(vec1(1.5)), domain_error);
  CHECK_THROWS_AS(m.derivatives(vec1(1.0)), domain_error);

  PotentialModel bad = perturbed_potential(m, {{{2}, -10.0}});
  const Vec mu = vec1(0.5);
  try {
    bad.derivatives(mu);
    FAIL("expected convexity_error");
  } catch (const convexity_error& e) {
    CHECK(e.point == mu);
    CHECK(e.min_eigenvalue < 0.0);
  }
  // Low-order queries do not trip the convexity check.
  CHECK_NOTHROW(bad.derivatives(mu, 1));
}
