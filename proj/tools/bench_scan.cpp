#include <chrono>
#include <cstdio>

#include "tgk/curvature.hpp"
#include "tgk/polytope.hpp"
#include "tgk/potential.hpp"

using namespace tgk;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int resolution = argc > 1 ? std::atoi(argv[1]) : 48;

  const MomentPolytope square = box_polytope(Vec::Zero(2), Vec::Ones(2));
  const PotentialModel model =
      guillemin_potential(square).perturbed({Monomial{{2, 2}, 0.01}});
  Mat C = Mat::Zero(2, 2), F = Mat::Zero(2, 2);
  C(0, 1) = 0.3;
  C(1, 0) = -0.3;
  F(0, 1) = 0.2;
  F(1, 0) = -0.2;
  const GKParams params(C, F);
  const GridSpec grid{resolution, 0.05};

  auto t0 = std::chrono::steady_clock::now();
  const ScanResult serial = equivalence_scan(model, params, grid, 1e-7, false);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const ScanResult parallel = equivalence_scan(model, params, grid, 1e-7, true);
  const double t_parallel = seconds_since(t0);

  bool identical = serial.samples.size() == parallel.samples.size();
  for (size_t i = 0; identical && i < serial.samples.size(); ++i) {
    const CurvatureSample& a = serial.samples[i];
    const CurvatureSample& b = parallel.samples[i];
    identical = a.kappa_boulanger == b.kappa_boulanger && a.kappa_goto == b.kappa_goto &&
                a.kappa_from_ricci == b.kappa_from_ricci && a.ok == b.ok;
  }

  std::printf("points            %d\n", serial.summary.n_points);
  std::printf("serial            %.3f s  (%.1f us/point)\n", t_serial,
              1e6 * t_serial / serial.summary.n_points);
  std::printf("parallel          %.3f s  (%.1f us/point)\n", t_parallel,
              1e6 * t_parallel / parallel.summary.n_points);
  std::printf("speedup           %.2fx\n", t_serial / t_parallel);
  std::printf("bitwise identical %s\n", identical ? "yes" : "NO");
  std::printf("max rel diff      %.3e\n", parallel.summary.max_rel_diff);
  return identical ? 0 : 1;
}
