#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgk/cli.hpp"
#include "tgk/clifford.hpp"
#include "tgk/connection.hpp"
#include "tgk/csc_optimizer.hpp"
#include "tgk/curvature.hpp"
#include "tgk/errors.hpp"

namespace tgk {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file " + path);
  out << text;
}

json to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::string scan_csv(const ScanResult& result, int dim) {
  std::string csv;
  for (int i = 0; i < dim; ++i) csv += "mu_" + std::to_string(i + 1) + ",";
  csv += "kappa_boulanger,kappa_goto,kappa_from_ricci,abs_diff\n";
  for (const CurvatureSample& s : result.samples) {
    for (int i = 0; i < dim; ++i) csv += fmt(s.mu(i)) + ",";
    csv += fmt(s.kappa_boulanger) + "," + fmt(s.kappa_goto) + "," +
           fmt(s.kappa_from_ricci) + "," + fmt(s.abs_diff) + "\n";
  }
  return csv;
}

std::vector<Vec> config_grid(const RunConfig& cfg, const PotentialModel& model) {
  const std::vector<Vec> grid = interior_grid(model.polytope(), cfg.grid);
  if (grid.empty()) {
    throw config_error("grid spec produces no interior points; raise the resolution");
  }
  return grid;
}

int cmd_validate(const RunConfig& cfg, const std::string& out) {
  const PotentialModel model = cfg.model();
  const std::vector<Vec> grid = config_grid(cfg, model);

  try {
    for (const Vec& mu : grid) model.derivatives(mu, 2);
  } catch (const convexity_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  }

  const AdmissibilityReport ad = validate_params(model, cfg.params(), grid);
  json rep;
  rep["n_points"] = grid.size();
  rep["min_admissibility_eigenvalue"] = ad.min_eigenvalue;
  rep["worst_point"] = to_json(ad.worst_point);
  rep["admissible"] = ad.pass;
  write_output(out, rep.dump(2) + "\n");
  if (!ad.pass) {
    std::string at;
    for (int i = 0; i < ad.worst_point.size(); ++i) {
      at += (i ? ", " : "") + fmt(ad.worst_point(i));
    }
    std::fprintf(stderr,
                 "invalid input: (C, F) inadmissible; min eigenvalue of "
                 "I + (1/4)(phi_s^{-1/2} F phi_s^{-1/2})^2 is %.17g at (%s)\n",
                 ad.min_eigenvalue, at.c_str());
    return 2;
  }
  return 0;
}

int cmd_frame(const RunConfig& cfg, const std::string& out) {
  const PotentialModel model = cfg.model();
  const std::vector<Vec> grid = config_grid(cfg, model);
  const GKParams params = cfg.params();
  const double tol = cfg.tolerance("analytic", 1e-9);

  FrameResiduals worst{};
  for (const Vec& mu : grid) {
    const FrameResiduals r = frame_residuals(assemble_frame(model, params, mu));
    worst.j_squared = std::max(worst.j_squared, r.j_squared);
    worst.gualtieri_g = std::max(worst.gualtieri_g, r.gualtieri_g);
    worst.gualtieri_b = std::max(worst.gualtieri_b, r.gualtieri_b);
    worst.adjoint = std::max(worst.adjoint, r.adjoint);
    worst.g_symmetry = std::max(worst.g_symmetry, r.g_symmetry);
    worst.b_antisymmetry = std::max(worst.b_antisymmetry, r.b_antisymmetry);
    worst.det_g = std::max(worst.det_g, r.det_g);
    worst.phi_sandwich = std::max(worst.phi_sandwich, r.phi_sandwich);
  }
  const bool pass = worst.max() <= tol;
  json rep;
  rep["n_points"] = grid.size();
  rep["tolerance"] = tol;
  rep["residuals"]["j_squared"] = worst.j_squared;
  rep["residuals"]["gualtieri_g"] = worst.gualtieri_g;
  rep["residuals"]["gualtieri_b"] = worst.gualtieri_b;
  rep["residuals"]["symplectic_adjoint"] = worst.adjoint;
  rep["residuals"]["g_symmetry"] = worst.g_symmetry;
  rep["residuals"]["b_antisymmetry"] = worst.b_antisymmetry;
  rep["residuals"]["det_g_factorization"] = worst.det_g;
  rep["residuals"]["phi_sandwich"] = worst.phi_sandwich;
  rep["max_residual"] = worst.max();
  rep["pass"] = pass;
  write_output(out, rep.dump(2) + "\n");
  if (!pass) {
    std::fprintf(stderr, "frame identities fail: max residual %.17g > %.17g\n",
                 worst.max(), tol);
  }
  return pass ? 0 : 1;
}

int scan_command(const RunConfig& cfg, const std::string& out, bool assert_equal) {
  const PotentialModel model = cfg.model();
  const double tol = cfg.tolerance("equivalence", 1e-7);
  const ScanResult result = equivalence_scan(model, cfg.params(), cfg.grid, tol);
  write_output(out, scan_csv(result, cfg.dim));

  const ScanSummary& s = result.summary;
  std::fprintf(stderr,
               "%d points, %d errors, max |kB - kG|/(1+|kB|) = %.3e, "
               "kappa in [%.6g, %.6g]\n",
               s.n_points, s.n_errors, s.max_rel_diff, s.kappa_min, s.kappa_max);
  if (s.n_errors == s.n_points) {
    std::fprintf(stderr, "invalid input: no grid point evaluated cleanly (%s)\n",
                 result.samples.empty() ? "" : result.samples.front().error.c_str());
    return 2;
  }
  if (s.n_errors > 0) return 1;
  if (assert_equal && s.max_rel_diff > tol) {
    std::fprintf(stderr, "equivalence fails: %.17g > %.17g\n", s.max_rel_diff, tol);
    return 1;
  }
  return 0;
}

int cmd_connection_suite(const RunConfig& cfg, const std::string& out) {
  const PotentialModel model = cfg.model();
  const GKParams params = cfg.params();
  // The identities are pointwise and finite-difference heavy, so the suite
  // checks a deterministic stride-subsample of the grid.
  std::vector<Vec> grid = config_grid(cfg, model);
  const std::size_t cap = 25;
  if (grid.size() > cap) {
    std::vector<Vec> sub;
    const std::size_t stride = (grid.size() + cap - 1) / cap;
    for (std::size_t i = 0; i < grid.size(); i += stride) sub.push_back(grid[i]);
    grid = std::move(sub);
  }

  const double fd_tol = cfg.tolerance("fd", 1e-4);
  const double an_tol = cfg.tolerance("analytic", 1e-9);
  const double eps_tol = cfg.tolerance("epsilon", 1e-7);

  CovariantConstancyReport cc{};
  CurvatureSymmetryReport cs{};
  IntegrabilityReport ig{};
  double eps = 0.0;
  for (const Vec& mu : grid) {
    const CovariantConstancyReport c = covariant_constancy_residuals(model, params, mu);
    cc.nabla_plus_j_plus = std::max(cc.nabla_plus_j_plus, c.nabla_plus_j_plus);
    cc.nabla_minus_j_minus = std::max(cc.nabla_minus_j_minus, c.nabla_minus_j_minus);
    cc.nabla_plus_g = std::max(cc.nabla_plus_g, c.nabla_plus_g);
    cc.nabla_minus_g = std::max(cc.nabla_minus_g, c.nabla_minus_g);
    const CurvatureSymmetryReport y = curvature_symmetry_residuals(model, params, mu);
    cs.xy_antisymmetry = std::max(cs.xy_antisymmetry, y.xy_antisymmetry);
    cs.zw_antisymmetry = std::max(cs.zw_antisymmetry, y.zw_antisymmetry);
    cs.plus_minus_swap = std::max(cs.plus_minus_swap, y.plus_minus_swap);
    cs.j_invariance = std::max(cs.j_invariance, y.j_invariance);
    const IntegrabilityReport g = integrability_residuals(model, params, mu);
    ig.dc_sum = std::max(ig.dc_sum, g.dc_sum);
    ig.h_plus_dc = std::max(ig.h_plus_dc, g.h_plus_dc);
    ig.h_minus_dc = std::max(ig.h_minus_dc, g.h_minus_dc);
    eps = std::max(eps, epsilon_section_residual(model, params, mu));
  }

  const bool pass = cc.max() <= fd_tol && cs.max() <= fd_tol && ig.max() <= an_tol &&
                    eps <= eps_tol;
  json rep;
  rep["n_points"] = grid.size();
  auto put = [&rep](const char* name, double residual, double tol) {
    rep["identities"][name]["residual"] = residual;
    rep["identities"][name]["tolerance"] = tol;
    rep["identities"][name]["pass"] = residual <= tol;
  };
  put("nabla_plus_j_plus", cc.nabla_plus_j_plus, fd_tol);
  put("nabla_minus_j_minus", cc.nabla_minus_j_minus, fd_tol);
  put("nabla_plus_g", cc.nabla_plus_g, fd_tol);
  put("nabla_minus_g", cc.nabla_minus_g, fd_tol);
  put("curvature_xy_antisymmetry", cs.xy_antisymmetry, fd_tol);
  put("curvature_zw_antisymmetry", cs.zw_antisymmetry, fd_tol);
  put("curvature_pair_swap", cs.plus_minus_swap, fd_tol);
  put("curvature_j_invariance", cs.j_invariance, fd_tol);
  put("torsion_dc_sum", ig.dc_sum, an_tol);
  put("torsion_plus_dc", ig.h_plus_dc, an_tol);
  put("torsion_minus_dc", ig.h_minus_dc, an_tol);
  put("epsilon_section", eps, eps_tol);
  rep["pass"] = pass;
  write_output(out, rep.dump(2) + "\n");
  if (!pass) std::fprintf(stderr, "connection identities fail; see report\n");
  return pass ? 0 : 1;
}

int cmd_clifford(const RunConfig& cfg, const std::string& out) {
  const CliffordReport rep = clifford_selftest(cfg.seed);
  json j;
  j["seed"] = rep.seed;
  j["all_pass"] = rep.all_pass;
  j["max_residual"] = rep.max_residual;
  j["checks"] = json::array();
  for (const CliffordCheck& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["n"] = c.n;
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    j["checks"].push_back(std::move(e));
  }
  write_output(out, j.dump(2) + "\n");
  std::fprintf(stderr, "%zu checks in %.3fs, max residual %.3e\n", rep.checks.size(),
               rep.seconds, rep.max_residual);
  return rep.all_pass ? 0 : 1;
}

int cmd_csc_optimize(const RunConfig& cfg, const std::string& out) {
  if (cfg.opt_powers.empty()) {
    throw config_error("csc-optimize needs \"optimizer.powers\" in the config");
  }
  const PotentialModel model = cfg.model();
  const std::vector<Vec> grid = config_grid(cfg, model);
  const PerturbationBasis basis = monomial_basis(cfg.opt_powers, cfg.opt_box);
  const double tol = cfg.tolerance("objective", 1e-8);

  const OptReport rep = optimize(model, cfg.params(), grid, basis, cfg.opt_budget);
  json j;
  j["coefficients"] = to_json(rep.coeffs);
  j["objective_history"] = rep.history;
  j["objective"] = rep.objective;
  j["kappa_min"] = rep.kappa_min;
  j["kappa_max"] = rep.kappa_max;
  j["kappa_range"] = rep.kappa_max - rep.kappa_min;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["stalled"] = rep.stalled;
  j["tolerance"] = tol;
  write_output(out, j.dump(2) + "\n");
  if (rep.objective > tol) {
    std::fprintf(stderr, "objective %.17g > %.17g after %d iterations%s\n",
                 rep.objective, tol, rep.iterations, rep.stalled ? " (stalled)" : "");
    return 1;
  }
  return 0;
}

}  // namespace

int run(const std::string& command, const std::string& config_path,
        const std::string& output_path) {
  RunConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const config_error& e) {
      std::fprintf(stderr, "invalid input: %s\n", e.what());
      return 2;
    }
  }

  try {
    if (command == "validate") return cmd_validate(cfg, output_path);
    if (command == "frame") return cmd_frame(cfg, output_path);
    if (command == "curvature") return scan_command(cfg, output_path, false);
    if (command == "equivalence") return scan_command(cfg, output_path, true);
    if (command == "connection-suite") return cmd_connection_suite(cfg, output_path);
    if (command == "clifford-selftest") return cmd_clifford(cfg, output_path);
    if (command == "csc-optimize") return cmd_csc_optimize(cfg, output_path);
  } catch (const admissibility_error& e) {
    std::fprintf(stderr, "invalid input: %s (min eigenvalue %.17g)\n", e.what(),
                 e.min_eigenvalue);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  }
  std::fprintf(stderr, "unknown command \"%s\"\n", command.c_str());
  return 2;
}

}  // namespace tgk
