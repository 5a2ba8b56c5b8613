// Command-line front end. Talks to the solver exclusively through the C API.
#include <string>

#include "CLI11.hpp"
#include "charids/charids.h"

int main(int argc, char** argv) {
  CLI::App app{"characteristic initial data: constraint hierarchy solver"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  int levels = 3;
  bool quiet = false;

  auto* solve = app.add_subcommand(
      "solve", "integrate the constraint hierarchy on both null surfaces");
  solve->add_option("--config", config, "config file")->required();
  solve->add_option("--out", out, "output directory (default: out)");
  solve->add_flag("--quiet", quiet, "suppress reports");

  auto* verify = app.add_subcommand(
      "verify", "re-check a written bundle against the constraints");
  verify->add_option("--out", out, "bundle directory")->required();
  verify->add_flag("--quiet", quiet, "suppress reports");

  auto* conv = app.add_subcommand(
      "convergence", "refinement ladder study (config grid is the finest level)");
  conv->add_option("--config", config, "config file")->required();
  conv->add_option("--out", out, "output directory (default: out)");
  conv->add_option("--levels", levels, "ladder depth, >= 3 (default: 3)");
  conv->add_flag("--quiet", quiet, "suppress reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : CHARIDS_E_ARG;  // help/version exit clean
  }

  charids_status st = CHARIDS_E_ARG;
  if (solve->parsed())
    st = charids_solve(config.c_str(), out.c_str(), quiet ? 1 : 0);
  else if (verify->parsed())
    st = charids_verify(out.c_str(), quiet ? 1 : 0);
  else if (conv->parsed())
    st = charids_convergence(config.c_str(), out.c_str(), levels, quiet ? 1 : 0);
  return int(st);
}
