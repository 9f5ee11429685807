#pragma once

#include <map>
#include <string>
#include <vector>

#include "tgk/errors.hpp"
#include "tgk/gk_frame.hpp"
#include "tgk/linalg.hpp"
#include "tgk/polytope.hpp"
#include "tgk/potential.hpp"

namespace tgk {

// Everything a run needs, parsed and validated from one JSON config.
struct RunConfig {
  int dim = 0;
  std::vector<Facet> facets;
  PotentialKind kind = PotentialKind::guillemin;
  std::vector<Monomial> perturbation;
  Mat quad;  // quadratic kind only; empty means identity
  Mat C;     // verified antisymmetric on load
  Mat F;
  GridSpec grid{21, 0.05};
  std::map<std::string, double> tolerances;
  std::vector<std::vector<int>> opt_powers;  // csc-optimize basis
  double opt_box = 0.1;
  int opt_budget = 200;
  unsigned seed = 7;

  MomentPolytope polytope() const;
  PotentialModel model() const;
  GKParams params() const { return GKParams(C, F); }
  double tolerance(const std::string& name, double fallback) const;
};

// Throws config_error with a line/column diagnostic on malformed JSON and a
// field diagnostic on schema violations.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Dispatches one command. Commands: validate, frame, curvature, equivalence,
// connection-suite, clifford-selftest, csc-optimize. The primary artifact goes
// to output_path ("" or "-" for stdout); diagnostics go to stderr. Returns
// 0 on success, 1 when a tolerance assertion fails, 2 on invalid input.
int run(const std::string& command, const std::string& config_path,
        const std::string& output_path);

}  // namespace tgk
