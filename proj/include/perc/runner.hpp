#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "perc/capacity.hpp"
#include "perc/dynamics.hpp"

namespace perc {

// Parsed command line for one invocation; commands are thin wrappers over
// the library and hold no numerics of their own.
struct RunConfig {
  std::string command;  // capacity|simulate|bounds-check|dim-sweep|betaset|hps-check
  std::string tree_file;
  std::string target_file;
  std::string out_file;
  std::string format = "json";  // json|csv
  std::string kernel = "h";
  double p = 0.5;
  double alpha = 0.5;
  std::string alphas;  // "A:B:STEPS" inclusive grid
  double beta = -1;    // < 0: use the target's beta when present
  double resolution = 1.0 / 32;
  double tol = 1e-8;
  long long max_iter = 100000;
  long long runs = 10000;
  std::uint64_t seed = 1;
  double horizon = 0;  // <= 0: max(target hull end, 1)
  double cutoff = 1e-6;
  bool refine = false;       // dim-sweep: multi-resolution threshold
  int refine_steps = 6;      // number of dyadic refinement stages
  int terms = 4096;          // hps-check / dimh series terms
  int rn_min = 16;           // betaset R(n) range, dyadic
  int rn_max = 256;
  long long max_atoms = 8192;
};

struct RunReport {
  nlohmann::json body;
  std::string csv;  // populated when format == "csv"
  int exit_code = 0;
};

std::vector<double> parse_alpha_grid(const std::string& spec);

RunReport run_command(const RunConfig& cfg);

}  // namespace perc
