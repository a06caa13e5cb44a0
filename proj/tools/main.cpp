// strainlimit: run simulations, parameter studies and the property suite.
//
//   strainlimit run    <config>
//   strainlimit sweep  <config>
//   strainlimit verify

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strainlimit/commands.hpp"
#include "strainlimit/config.hpp"

namespace {

int load(const std::string& path, strainlimit::RunConfig& config) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << '\n';
    return strainlimit::kExitValidation;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    config = strainlimit::parse_config(text.str());
  } catch (const strainlimit::ConfigError& err) {
    std::cerr << path << ": " << err.what() << '\n';
    return strainlimit::kExitValidation;
  }
  return strainlimit::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strain-limiting viscoelastic dynamics: P1 Galerkin solver and diagnostics"};
  app.require_subcommand(1);

  std::string run_path, sweep_path, out_dir;
  auto* run = app.add_subcommand("run", "Run one simulation (energy.csv, monitor.csv, state_<t>.csv)");
  run->add_option("config", run_path, "Config file")->required();
  run->add_option("-o,--out-dir", out_dir, "Override out_dir");
  auto* sweep = app.add_subcommand("sweep", "Run a regularization, refinement or stability study (report.csv)");
  sweep->add_option("config", sweep_path, "Config file")->required();
  sweep->add_option("-o,--out-dir", out_dir, "Override out_dir");
  auto* verify = app.add_subcommand("verify", "Run the built-in property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : strainlimit::kExitValidation;
  }

  try {
    if (verify->parsed()) return strainlimit::cmd_verify(std::cout);
    strainlimit::RunConfig config;
    const std::string& path = run->parsed() ? run_path : sweep_path;
    if (const int rc = load(path, config); rc != 0) return rc;
    if (!out_dir.empty()) config.out_dir = out_dir;
    return run->parsed() ? strainlimit::cmd_run(config, std::cout) : strainlimit::cmd_sweep(config, std::cout);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return strainlimit::kExitRuntime;
  }
}
