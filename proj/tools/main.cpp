#include <iostream>

#include <CLI11.hpp>

#include "perc/io.hpp"
#include "perc/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, perc::RunConfig& cfg) {
  cmd->add_option("--tree", cfg.tree_file, "tree spec JSON file");
  cmd->add_option("--target", cfg.target_file, "target set JSON file");
  cmd->add_option("--kernel", cfg.kernel, "h|phi|lyons|betaset|riesz");
  cmd->add_option("--p", cfg.p, "open probability in (0,1)");
  cmd->add_option("--alpha", cfg.alpha, "phi/riesz exponent in (0,1)");
  cmd->add_option("--alphas", cfg.alphas, "alpha grid A:B:STEPS");
  cmd->add_option("--beta", cfg.beta, "beta-set exponent in [0,1]");
  cmd->add_option("--resolution", cfg.resolution, "grid cell half-width");
  cmd->add_option("--tol", cfg.tol, "duality gap tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "Frank-Wolfe iteration cap");
  cmd->add_option("--runs", cfg.runs, "Monte Carlo runs");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--horizon", cfg.horizon, "simulation horizon");
  cmd->add_option("--cutoff", cfg.cutoff, "capacity positivity cutoff");
  cmd->add_flag("--refine", cfg.refine, "multi-resolution sweep threshold");
  cmd->add_option("--refine-steps", cfg.refine_steps, "refinement stages");
  cmd->add_option("--terms", cfg.terms, "series terms for hps-check");
  cmd->add_option("--rn-min", cfg.rn_min, "smallest R(n) index");
  cmd->add_option("--rn-max", cfg.rn_max, "largest R(n) index");
  cmd->add_option("--max-atoms", cfg.max_atoms, "kernel matrix atom budget");
  cmd->add_option("--out", cfg.out_file, "write the report to this file");
  cmd->add_option("--format", cfg.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity, dynamics and dimension toolkit for dynamical "
               "percolation on rooted trees"};
  app.require_subcommand(1);

  perc::RunConfig cfg;
  for (const char* name : {"capacity", "simulate", "bounds-check", "dim-sweep",
                           "betaset", "hps-check"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common_options(cmd, cfg);
    cmd->callback([&cfg, name] { cfg.command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const perc::RunReport report = perc::run_command(cfg);
    const std::string text =
        cfg.format == "csv" ? report.csv : report.body.dump(2) + "\n";
    if (cfg.out_file.empty())
      std::cout << text;
    else
      perc::write_text_file(cfg.out_file, text);
    return report.exit_code;
  } catch (const perc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
