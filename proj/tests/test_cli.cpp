#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "tgk_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const fs::path& stderr_path = {}) {
  std::string cmd = std::string(TGK_CLI_PATH) + " " + args + " > /dev/null";
  cmd += stderr_path.empty() ? " 2> /dev/null" : " 2> " + stderr_path.string();
  const int status = std::system(cmd.c_str());
  return status < 0 ? -1 : WEXITSTATUS(status);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

const char* kSegmentConfig = R"({
  "polytope": {"dim": 1, "facets": [{"normal": [1], "offset": 0},
                                    {"normal": [-1], "offset": -1}]},
  "potential": {"kind": "guillemin"},
  "grid": {"resolution": 101, "margin": 0.05}
})";

const char* kGKSquareConfig = R"({
  "polytope": {"dim": 2, "facets": [{"normal": [1, 0], "offset": 0},
                                    {"normal": [0, 1], "offset": 0},
                                    {"normal": [-1, 0], "offset": -1},
                                    {"normal": [0, -1], "offset": -1}]},
  "potential": {"kind": "guillemin",
                "perturbation": [{"powers": [2, 2], "coeff": 0.005}]},
  "params": {"C": [[0, 0.4], [-0.4, 0]], "F": [[0, 0.2], [-0.2, 0]]},
  "grid": {"resolution": 15, "margin": 0.05}
})";

const char* kInadmissibleConfig = R"({
  "polytope": {"dim": 2, "facets": [{"normal": [1, 0], "offset": 0},
                                    {"normal": [0, 1], "offset": 0},
                                    {"normal": [-1, 0], "offset": -1},
                                    {"normal": [0, -1], "offset": -1}]},
  "potential": {"kind": "quadratic"},
  "params": {"C": [[0, 0], [0, 0]], "F": [[0, 3], [-3, 0]]},
  "grid": {"resolution": 5, "margin": 0.1}
})";

const char* kOptimizeConfig = R"({
  "polytope": {"dim": 1, "facets": [{"normal": [1], "offset": 0},
                                    {"normal": [-1], "offset": -1}]},
  "potential": {"kind": "guillemin",
                "perturbation": [{"powers": [4], "coeff": 0.01}]},
  "grid": {"resolution": 101, "margin": 0.05},
  "optimizer": {"powers": [[4]], "box": 0.1, "budget": 200}
})";

}  // namespace

TEST_CASE("equivalence scan writes the documented CSV and exits zero") {
  const fs::path cfg = write_file("segment.json", kSegmentConfig);
  const fs::path out = work_dir() / "segment.csv";
  REQUIRE(run_cli("equivalence " + cfg.string() + " -o " + out.string()) == 0);

  const std::vector<std::string> lines = split(read_file(out), '\n');
  REQUIRE(lines.size() == 102);  // header + one row per interior point
  CHECK(lines[0] == "mu_1,kappa_boulanger,kappa_goto,kappa_from_ricci,abs_diff");
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cols = split(lines[i], ',');
    REQUIRE(cols.size() == 5);
    CHECK(std::abs(std::stod(cols[1]) - 4.0) <= 1e-8);
    CHECK(std::abs(std::stod(cols[2]) - 4.0) <= 1e-8);
    CHECK(std::stod(cols[4]) <= 1e-8);
  }
}

TEST_CASE("identical configs give byte-identical artifacts") {
  const fs::path cfg = write_file("square.json", kGKSquareConfig);
  const fs::path a = work_dir() / "scan_a.csv";
  const fs::path b = work_dir() / "scan_b.csv";
  REQUIRE(run_cli("equivalence " + cfg.string() + " -o " + a.string()) == 0);
  REQUIRE(run_cli("equivalence " + cfg.string() + " -o " + b.string()) == 0);
  const std::string bytes = read_file(a);
  CHECK(bytes == read_file(b));
  CHECK(!bytes.empty());

  const fs::path ja = work_dir() / "cliff_a.json";
  const fs::path jb = work_dir() / "cliff_b.json";
  REQUIRE(run_cli("clifford-selftest -o " + ja.string()) == 0);
  REQUIRE(run_cli("clifford-selftest -o " + jb.string()) == 0);
  CHECK(read_file(ja) == read_file(jb));
}

TEST_CASE("inadmissible parameters exit two with an eigenvalue report") {
  const fs::path cfg = write_file("inadmissible.json", kInadmissibleConfig);
  const fs::path err = work_dir() / "inadmissible.err";
  const fs::path out = work_dir() / "inadmissible.json.out";
  CHECK(run_cli("validate " + cfg.string() + " -o " + out.string(), err) == 2);
  const std::string diag = read_file(err);
  CHECK(diag.find("eigenvalue") != std::string::npos);
  CHECK(diag.find("-1.25") != std::string::npos);
  const json rep = json::parse(read_file(out));
  CHECK(rep.at("admissible") == false);
  CHECK(rep.at("min_admissibility_eigenvalue").get<double>() == doctest::Approx(-1.25));

  // the scan commands refuse the same parameters too
  CHECK(run_cli("equivalence " + cfg.string()) == 2);
}

TEST_CASE("a valid config passes validation") {
  const fs::path cfg = write_file("segment.json", kSegmentConfig);
  const fs::path out = work_dir() / "validate.json";
  CHECK(run_cli("validate " + cfg.string() + " -o " + out.string()) == 0);
  const json rep = json::parse(read_file(out));
  CHECK(rep.at("admissible") == true);
  CHECK(rep.at("n_points") == 101);
}

TEST_CASE("malformed JSON exits two with a line and column diagnostic") {
  const fs::path cfg = write_file("broken.json", "{\n  \"polytope\": }\n");
  const fs::path err = work_dir() / "broken.err";
  CHECK(run_cli("validate " + cfg.string(), err) == 2);
  const std::string diag = read_file(err);
  CHECK(diag.find("malformed JSON at line 2") != std::string::npos);
  CHECK(diag.find("column") != std::string::npos);
}

TEST_CASE("schema violations exit two and name the offending field") {
  const fs::path missing = write_file("missing.json", R"({"potential": {"kind": "guillemin"}})");
  const fs::path err1 = work_dir() / "missing.err";
  CHECK(run_cli("frame " + missing.string(), err1) == 2);
  CHECK(read_file(err1).find("polytope") != std::string::npos);

  std::string bad_c = kGKSquareConfig;
  const auto at = bad_c.find("[[0, 0.4], [-0.4, 0]]");
  REQUIRE(at != std::string::npos);
  bad_c.replace(at, 21, "[[0, 0.4], [0.4, 0]]");
  const fs::path bad = write_file("bad_c.json", bad_c);
  const fs::path err2 = work_dir() / "bad_c.err";
  CHECK(run_cli("frame " + bad.string(), err2) == 2);
  CHECK(read_file(err2).find("antisymmetric") != std::string::npos);

  CHECK(run_cli("equivalence " + work_dir().string() + "/nope.json") == 2);
  CHECK(run_cli("bogus-command " + missing.string()) == 2);
}

TEST_CASE("clifford selftest reports every check and honors the seed") {
  const fs::path out = work_dir() / "clifford.json";
  REQUIRE(run_cli("clifford-selftest -o " + out.string()) == 0);
  const json rep = json::parse(read_file(out));
  CHECK(rep.at("all_pass") == true);
  CHECK(rep.at("seed") == 7);
  CHECK(rep.at("checks").size() > 40);
  CHECK(rep.at("max_residual").get<double>() <= 1e-12);
  for (const json& check : rep.at("checks")) CHECK(check.at("pass") == true);

  const fs::path seeded = write_file("seeded.json", R"({
    "polytope": {"dim": 1, "facets": [{"normal": [1], "offset": 0},
                                      {"normal": [-1], "offset": -1}]},
    "potential": {"kind": "guillemin"},
    "seed": 123
  })");
  const fs::path out2 = work_dir() / "clifford_seeded.json";
  REQUIRE(run_cli("clifford-selftest " + seeded.string() + " -o " + out2.string()) == 0);
  CHECK(json::parse(read_file(out2)).at("seed") == 123);
}

TEST_CASE("csc-optimize restores the round potential through the config file") {
  const fs::path cfg = write_file("optimize.json", kOptimizeConfig);
  const fs::path out = work_dir() / "optimize_report.json";
  REQUIRE(run_cli("csc-optimize " + cfg.string() + " -o " + out.string()) == 0);
  const json rep = json::parse(read_file(out));
  CHECK(rep.at("converged") == true);
  CHECK(rep.at("stalled") == false);
  CHECK(rep.at("objective").get<double>() <= 1e-8);
  CHECK(rep.at("kappa_range").get<double>() <= 1e-4);
  CHECK(std::abs(rep.at("coefficients").at(0).get<double>() + 0.01) <= 1e-4);
  CHECK(rep.at("iterations").get<int>() <= 200);
}

TEST_CASE("frame and connection suites pass on a generalized Kahler square") {
  const fs::path cfg = write_file("square.json", kGKSquareConfig);
  const fs::path fout = work_dir() / "frame.json";
  REQUIRE(run_cli("frame " + cfg.string() + " -o " + fout.string()) == 0);
  const json frame = json::parse(read_file(fout));
  CHECK(frame.at("pass") == true);
  CHECK(frame.at("max_residual").get<double>() <= 1e-9);

  const fs::path cout_path = work_dir() / "connection.json";
  REQUIRE(run_cli("connection-suite " + cfg.string() + " -o " + cout_path.string()) == 0);
  const json conn = json::parse(read_file(cout_path));
  CHECK(conn.at("pass") == true);
  for (const auto& [name, entry] : conn.at("identities").items()) {
    INFO(name);
    CHECK(entry.at("pass") == true);
  }

  const fs::path kout = work_dir() / "square.csv";
  CHECK(run_cli("curvature " + cfg.string() + " -o " + kout.string()) == 0);
  const std::vector<std::string> lines = split(read_file(kout), '\n');
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] ==
        "mu_1,mu_2,kappa_boulanger,kappa_goto,kappa_from_ricci,abs_diff");
}

TEST_CASE("tolerance assertions drive the exit code to one") {
  std::string tight = kGKSquareConfig;
  const auto at = tight.rfind('}');
  REQUIRE(at != std::string::npos);
  tight.insert(tight.rfind("\"grid\""), "\"tolerances\": {\"equivalence\": 1e-18},\n  ");
  const fs::path cfg = write_file("tight.json", tight);
  const fs::path err = work_dir() / "tight.err";
  CHECK(run_cli("equivalence " + cfg.string(), err) == 1);
  CHECK(read_file(err).find("equivalence fails") != std::string::npos);

  std::string tight_frame = kGKSquareConfig;
  tight_frame.insert(tight_frame.rfind("\"grid\""),
                     "\"tolerances\": {\"analytic\": 1e-18},\n  ");
  const fs::path cfg2 = write_file("tight_frame.json", tight_frame);
  CHECK(run_cli("frame " + cfg2.string()) == 1);
}
