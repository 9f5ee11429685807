#include <string>

#include <CLI11.hpp>

#include "tgk/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"toric generalized Kahler geometry toolkit"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Command commands[] = {
      {"validate", "check convexity and admissibility of (C, F) over the grid", true},
      {"frame", "verify the pointwise frame identities over the grid", true},
      {"curvature", "scan both scalar-curvature formulas over the grid (CSV)", true},
      {"equivalence", "scan and assert the two curvature formulas agree", true},
      {"connection-suite", "verify connection, curvature, and torsion identities",
       true},
      {"clifford-selftest", "run the exact spinor-algebra self-test", false},
      {"csc-optimize", "minimize curvature variance over a perturbation basis", true},
  };

  std::string config, output;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    CLI::Option* opt = sub->add_option("config", config, "JSON config file");
    if (c.config_required) opt->required();
    sub->add_option("-o,--output", output, "primary artifact path (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return tgk::run(app.get_subcommands().front()->get_name(), config, output);
}
