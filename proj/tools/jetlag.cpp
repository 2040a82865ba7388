// jetlag command-line entry point.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jetlag/commands.hpp"

int main(int argc, char** argv) {
  using namespace jetlag;
  CLI::App app{"Geometry of metrical multi-time Lagrange spaces", "jetlag"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, out_path, point;
  std::uint64_t seed = 0;
  bool json = false;
  const char* help[] = {"Kronecker h-regularity verdict and decomposition", "Nonlinear connection and Cartan/Berwald coefficients",
                        "Torsion d-tensor tables", "Curvature d-tensor tables", "Integrate a p = 1 extremal (CSV)",
                        "Harmonic-map residual on a grid (CSV)", "Run every invariant check"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < command_names().size(); ++k) {
    auto* sub = app.add_subcommand(command_names()[k], help[k]);
    sub->add_option("--config", config_path, "Problem config (JSON)")->required();
    sub->add_option("--point", point, "Jet point \"t=...;x=...;v=...\"");
    sub->add_option("--out", out_path, "Write the main output here instead of stdout");
    sub->add_option("--seed", seed, "Override sampling.seed");
    sub->add_flag("--json", json, "JSON report instead of CSV or text");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::usage;
  }

  std::string command;
  CommandOptions opt;
  for (auto* sub : subs)
    if (sub->parsed()) {
      command = sub->get_name();
      if (sub->count("--point")) opt.point = point;
      if (sub->count("--seed")) opt.seed = seed;
    }
  opt.json = json;

  CommandResult res;
  try {
    res = run_command(command, load_config(config_path), opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return exit_code::failed;
  }

  std::cerr << res.err;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << res.out;
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return exit_code::failed;
    }
  } else {
    std::cout << res.out;
  }
  return res.exit;
}
