#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tgk/cli.hpp"
#include "tgk/errors.hpp"

namespace tgk {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw config_error(std::string("config is missing \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw config_error(std::string(what) + " must be a number");
  return j.get<double>();
}

Mat parse_matrix(const json& rows, int dim, const char* name) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    throw config_error(std::string("\"") + name + "\" must be a " +
                       std::to_string(dim) + "x" + std::to_string(dim) +
                       " row-major matrix");
  }
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw config_error(std::string("\"") + name + "\" row " + std::to_string(i) +
                         " must have " + std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) m(i, j) = number(row.at(j), name);
  }
  return m;
}

void require_antisymmetric(const Mat& m, const char* name) {
  const double r = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (r > 1e-12) {
    throw config_error(std::string("\"") + name + "\" must be antisymmetric (max |" +
                       name + " + " + name + "^T| = " + std::to_string(r) + ")");
  }
}

std::vector<int> parse_powers(const json& arr, int dim, const char* where) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != dim) {
    throw config_error(std::string(where) + " must list " + std::to_string(dim) +
                       " exponents");
  }
  std::vector<int> p(dim);
  for (int i = 0; i < dim; ++i) {
    if (!arr.at(i).is_number_integer() || arr.at(i).get<int>() < 0) {
      throw config_error(std::string(where) + " exponents must be nonnegative integers");
    }
    p[i] = arr.at(i).get<int>();
  }
  return p;
}

}  // namespace

MomentPolytope RunConfig::polytope() const { return MomentPolytope(dim, facets); }

PotentialModel RunConfig::model() const {
  const MomentPolytope p = polytope();
  const PotentialModel base = kind == PotentialKind::quadratic
                                  ? quadratic_potential(p, quad)
                                  : guillemin_potential(p);
  return perturbation.empty() ? base : base.perturbed(perturbation);
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop =
        std::min(text.size(), e.byte == 0 ? std::size_t(0) : std::size_t(e.byte) - 1);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw config_error("malformed JSON at line " + std::to_string(line) + ", column " +
                       std::to_string(column) + ": " + e.what());
  }

  RunConfig cfg;
  const json& poly = need(j, "polytope");
  const json& jdim = need(poly, "dim");
  if (!jdim.is_number_integer() || jdim.get<int>() < 1) {
    throw config_error("\"polytope.dim\" must be a positive integer");
  }
  cfg.dim = jdim.get<int>();
  const json& facets = need(poly, "facets");
  if (!facets.is_array() || facets.empty()) {
    throw config_error("\"polytope.facets\" must be a nonempty array");
  }
  for (const json& f : facets) {
    const json& normal = need(f, "normal");
    if (!normal.is_array() || static_cast<int>(normal.size()) != cfg.dim) {
      throw config_error("facet normals must have " + std::to_string(cfg.dim) +
                         " entries");
    }
    Facet facet;
    facet.normal = Vec(cfg.dim);
    for (int i = 0; i < cfg.dim; ++i) facet.normal(i) = number(normal.at(i), "normal");
    facet.offset = number(need(f, "offset"), "offset");
    cfg.facets.push_back(std::move(facet));
  }

  const json& pot = need(j, "potential");
  const std::string kind = need(pot, "kind").get<std::string>();
  if (kind == "guillemin") {
    cfg.kind = PotentialKind::guillemin;
  } else if (kind == "quadratic") {
    cfg.kind = PotentialKind::quadratic;
  } else {
    throw config_error("\"potential.kind\" must be \"guillemin\" or \"quadratic\"");
  }
  if (pot.contains("quad")) cfg.quad = parse_matrix(pot.at("quad"), cfg.dim, "quad");
  if (pot.contains("perturbation")) {
    for (const json& term : pot.at("perturbation")) {
      Monomial m;
      m.powers = parse_powers(need(term, "powers"), cfg.dim, "perturbation powers");
      m.coeff = number(need(term, "coeff"), "perturbation coeff");
      cfg.perturbation.push_back(std::move(m));
    }
  }

  if (j.contains("params")) {
    const json& params = j.at("params");
    cfg.C = parse_matrix(need(params, "C"), cfg.dim, "C");
    cfg.F = parse_matrix(need(params, "F"), cfg.dim, "F");
  } else {
    cfg.C = Mat::Zero(cfg.dim, cfg.dim);
    cfg.F = Mat::Zero(cfg.dim, cfg.dim);
  }
  require_antisymmetric(cfg.C, "C");
  require_antisymmetric(cfg.F, "F");

  if (j.contains("grid")) {
    const json& grid = j.at("grid");
    const json& res = need(grid, "resolution");
    if (!res.is_number_integer() || res.get<int>() < 2) {
      throw config_error("\"grid.resolution\" must be an integer >= 2");
    }
    cfg.grid.resolution = res.get<int>();
    cfg.grid.margin = number(need(grid, "margin"), "grid margin");
    if (!(cfg.grid.margin > 0.0 && cfg.grid.margin < 0.5)) {
      throw config_error("\"grid.margin\" must lie in (0, 0.5)");
    }
  }

  if (j.contains("tolerances")) {
    for (const auto& [name, value] : j.at("tolerances").items()) {
      cfg.tolerances[name] = number(value, "tolerance");
    }
  }

  if (j.contains("optimizer")) {
    const json& opt = j.at("optimizer");
    if (opt.contains("powers")) {
      for (const json& p : opt.at("powers")) {
        cfg.opt_powers.push_back(parse_powers(p, cfg.dim, "optimizer powers"));
      }
    }
    if (opt.contains("box")) {
      cfg.opt_box = number(opt.at("box"), "optimizer box");
      if (cfg.opt_box < 0.0) throw config_error("\"optimizer.box\" must be >= 0");
    }
    if (opt.contains("budget")) {
      if (!opt.at("budget").is_number_integer() || opt.at("budget").get<int>() < 1) {
        throw config_error("\"optimizer.budget\" must be a positive integer");
      }
      cfg.opt_budget = opt.at("budget").get<int>();
    }
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw config_error("\"seed\" must be a nonnegative integer");
    }
    cfg.seed = j.at("seed").get<unsigned>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace tgk
