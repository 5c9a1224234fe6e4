#include "perc/runner.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "perc/io.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

using nlohmann::json;

json config_fingerprint(const RunConfig& cfg) {
  return json{{"command", cfg.command},   {"kernel", cfg.kernel},
              {"p", cfg.p},               {"alpha", cfg.alpha},
              {"alphas", cfg.alphas},     {"beta", cfg.beta},
              {"resolution", cfg.resolution}, {"tol", cfg.tol},
              {"max_iter", cfg.max_iter}, {"runs", cfg.runs},
              {"seed", cfg.seed},         {"horizon", cfg.horizon},
              {"cutoff", cfg.cutoff},     {"refine", cfg.refine},
              {"terms", cfg.terms}};
}

std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a(config_fingerprint(cfg).dump());
}

json measure_to_json(const ProductMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms) atoms.push_back({a.leaf, a.cell});
  return json{{"atoms", atoms}, {"weights", mu.weights}};
}

json capacity_result_to_json(const CapacityResult& r, const KernelMatrix& k,
                             double epsilon) {
  return json{{"energy", r.energy},
              {"capacity", r.capacity},
              {"gap", r.gap},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"measure", measure_to_json(r.measure)},
              {"diag_policy",
               {{"substituted", k.diag_policy.substituted},
                {"epsilon", k.diag_policy.epsilon},
                {"note", k.diag_policy.note}}},
              {"epsilon", epsilon}};
}

std::string report_csv(const json& body, const std::string& prefix = "") {
  std::ostringstream out;
  for (const auto& [key, value] : body.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      out << report_csv(value, name);
    } else if (value.is_number_float()) {
      out << name << "," << double_to_string17(value.get<double>()) << "\n";
    } else if (value.is_number()) {
      out << name << "," << value.dump() << "\n";
    } else if (value.is_boolean() || value.is_string()) {
      out << name << "," << value.dump() << "\n";
    }
  }
  return out.str();
}

double effective_horizon(const RunConfig& cfg, const TargetSet& d) {
  if (cfg.horizon > 0) return cfg.horizon;
  return std::max(d.hull_hi(), 1.0);
}

KernelSpec kernel_spec_from(const RunConfig& cfg, const TargetSet& d) {
  KernelSpec spec{kernel_kind_from_string(cfg.kernel),
                  PercolationParams(cfg.p), cfg.alpha, 1.0};
  if (cfg.beta >= 0)
    spec.beta = cfg.beta;
  else if (d.beta)
    spec.beta = *d.beta;
  return spec;
}

// Uses the spherical degree list directly when the tree file declares one,
// so sweeps and series checks scale past buildable trees.
std::vector<double> log_levels_for(const RunConfig& cfg, int terms) {
  const json j = load_json_file(cfg.tree_file);
  if (j.at("kind") == "spherical") {
    std::vector<int> degrees = j.at("degrees").get<std::vector<int>>();
    if (static_cast<int>(degrees.size()) > terms) degrees.resize(terms);
    return log_levels_from_degrees(degrees);
  }
  const Tree t = prune_leafless(tree_from_json(j));
  return log_levels_from_counts(t.level_counts);
}

json run_capacity(const RunConfig& cfg, RunReport&) {
  const Tree t = prune_leafless(load_tree(cfg.tree_file));
  const TargetSet d = load_target(cfg.target_file);
  const TimeGrid grid = discretize(d, cfg.resolution);
  const KernelSpec spec = kernel_spec_from(cfg, d);
  const KernelMatrix k = assemble_matrix(t, grid, spec, cfg.max_atoms);
  const CapacityResult r = minimize_energy(k, cfg.tol, cfg.max_iter);
  json body = capacity_result_to_json(r, k, grid.half_width);
  body["kernel"] = cfg.kernel;
  body["tree_hash"] = tree_hash(t);
  return body;
}

json run_simulate(const RunConfig& cfg, RunReport& report) {
  const Tree t = load_tree(cfg.tree_file);
  TargetSet d = cfg.target_file.empty()
                    ? from_intervals({{0.0, std::max(cfg.horizon, 1.0)}})
                    : load_target(cfg.target_file);
  const double horizon = effective_horizon(cfg, d);
  const HitEstimate est = estimate_hit_probability(
      t, PercolationParams(cfg.p), d, cfg.runs, cfg.seed, horizon);

  if (cfg.format == "csv") {
    std::ostringstream csv;
    csv << "run,start,end\n";
    SubstreamRng seeder(cfg.seed, 0x5eedULL);
    for (long long r = 0; r < cfg.runs; ++r) {
      const SimulationRun run =
          simulate_edges(t, PercolationParams(cfg.p), horizon, seeder.next_u64());
      for (const Interval& iv : percolation_trace(t, run).intervals)
        csv << r << "," << double_to_string17(iv.lo) << ","
            << double_to_string17(iv.hi) << "\n";
    }
    report.csv = csv.str();
  }

  return json{{"tree_hash", tree_hash(t)}, {"p", cfg.p},
              {"horizon", horizon},        {"runs", est.runs},
              {"seed", cfg.seed},          {"hits", est.hits},
              {"p_hat", est.p_hat},        {"std_err", est.std_err}};
}

json run_bounds_check(const RunConfig& cfg, RunReport& report) {
  const Tree t = prune_leafless(load_tree(cfg.tree_file));
  const TargetSet d = load_target(cfg.target_file);
  const PercolationParams params(cfg.p);

  const TimeGrid grid = discretize(d, cfg.resolution);
  const KernelSpec spec{KernelKind::H, params, cfg.alpha, 1.0};
  const KernelMatrix k = assemble_matrix(t, grid, spec, cfg.max_atoms);
  const CapacityResult cap = minimize_energy(k, cfg.tol, cfg.max_iter);

  const double horizon = effective_horizon(cfg, d);
  const HitEstimate est =
      estimate_hit_probability(t, params, d, cfg.runs, cfg.seed, horizon);

  const double band = 3.0 * est.std_err;
  const bool lower_ok = est.p_hat + band >= 0.5 * cap.capacity;
  const bool upper_ok = est.p_hat - band <= 512.0 * cap.capacity;
  const bool pass = lower_ok && upper_ok && cap.converged;

  json body{{"capacity", cap.capacity},
            {"energy", cap.energy},
            {"converged", cap.converged},
            {"p_hat", est.p_hat},
            {"std_err", est.std_err},
            {"band", band},
            {"runs", est.runs},
            {"hits", est.hits},
            {"lower_bound", 0.5 * cap.capacity},
            {"upper_bound", 512.0 * cap.capacity},
            {"lower_ok", lower_ok},
            {"upper_ok", upper_ok},
            {"verdict", pass ? "PASS" : "FAIL"},
            {"tree_hash", tree_hash(t)},
            {"epsilon", grid.half_width}};
  body["ratio"] = cap.capacity > 0 ? json(est.p_hat / cap.capacity) : json();
  if (!pass) report.exit_code = 2;
  return body;
}

json sweep_to_json(const DimSweep& sweep) {
  return json{{"alphas", sweep.alphas},       {"capacities", sweep.capacities},
              {"converged", sweep.converged}, {"threshold", sweep.threshold},
              {"cutoff", sweep.cutoff},       {"resolution", sweep.resolution}};
}

json run_dim_sweep(const RunConfig& cfg, RunReport& report) {
  const TargetSet d = load_target(cfg.target_file);
  const PercolationParams params(cfg.p);
  const std::vector<double> alphas = parse_alpha_grid(
      cfg.alphas.empty() ? "0.05:0.95:19" : cfg.alphas);

  const json tree_json = load_json_file(cfg.tree_file);
  const bool virtual_spherical = tree_json.at("kind") == "spherical";
  Tree t;
  bool reduced = virtual_spherical;
  std::vector<double> log_levels;
  if (virtual_spherical) {
    log_levels = log_levels_from_degrees(
        tree_json.at("degrees").get<std::vector<int>>());
  } else {
    t = prune_leafless(tree_from_json(tree_json));
    if (is_spherically_symmetric(t)) {
      reduced = true;
      log_levels = log_levels_from_counts(t.level_counts);
    }
  }

  auto sweep_at = [&](double resolution) {
    return reduced
               ? capacity_sweep_spherical(log_levels, d, params, alphas,
                                          resolution, cfg.tol, cfg.cutoff,
                                          cfg.max_iter)
               : capacity_sweep(t, d, params, alphas, resolution, cfg.tol,
                                cfg.cutoff, cfg.max_iter, cfg.max_atoms);
  };

  std::vector<DimSweep> sweeps;
  if (cfg.refine) {
    for (int s = cfg.refine_steps - 1; s >= 0; --s)
      sweeps.push_back(sweep_at(cfg.resolution * std::ldexp(1.0, s)));
  } else {
    sweeps.push_back(sweep_at(cfg.resolution));
  }
  const DimSweep& finest = sweeps.back();

  json body{{"sweep", sweep_to_json(finest)}, {"reduced", reduced}};
  if (cfg.refine) {
    double step = 0.05;
    for (std::size_t i = 1; i < alphas.size(); ++i)
      step = std::min(step, alphas[i] - alphas[i - 1]);
    body["refined_threshold"] = refined_sweep_threshold(sweeps, 0.5 * step);
    json caps = json::array();
    for (const DimSweep& s : sweeps)
      caps.push_back({{"resolution", s.resolution},
                      {"capacities", s.capacities}});
    body["refinement"] = caps;
  }
  if (reduced) {
    const DimhResult series = dimh_sg(log_levels, params, alphas);
    body["series_threshold"] = series.threshold;
    body["series_conclusive"] = series.conclusive;
    if (d.beta) {
      const auto [lo, hi] = sandwich_bounds(series.threshold, *d.beta, *d.beta);
      body["sandwich"] = {{"lower", lo}, {"upper", hi}};
    }
  }

  std::ostringstream csv;
  csv << "alpha,capacity\n";
  for (std::size_t i = 0; i < finest.alphas.size(); ++i)
    csv << double_to_string17(finest.alphas[i]) << ","
        << double_to_string17(finest.capacities[i]) << "\n";
  report.csv = csv.str();
  return body;
}

json run_betaset(const RunConfig& cfg, RunReport& report) {
  const Tree t = prune_leafless(load_tree(cfg.tree_file));
  const TargetSet d = load_target(cfg.target_file);
  if (!d.generator)
    throw Error(Errc::MissingGenerator, "betaset needs a cantor target");
  const PercolationParams params(cfg.p);
  const double beta = cfg.beta >= 0 ? cfg.beta : *d.beta;

  // (a) g-capacity of the boundary alone (time-free kernel).
  const TimeGrid point_grid = discretize(point_target(0.0), cfg.resolution);
  const KernelSpec g_spec{KernelKind::BetaSet, params, cfg.alpha, beta};
  const KernelMatrix gk = assemble_matrix(t, point_grid, g_spec, cfg.max_atoms);
  const CapacityResult g_cap = minimize_energy(gk, cfg.tol, cfg.max_iter);

  // (b) h-capacity of boundary x target, one cell per generator interval.
  const double cell_half = 0.5 * d.intervals.front().length();
  const TimeGrid grid = discretize(d, std::min(cfg.resolution, cell_half));
  const KernelSpec h_spec{KernelKind::H, params, cfg.alpha, 1.0};
  const KernelMatrix hk = assemble_matrix(t, grid, h_spec, cfg.max_atoms);
  const CapacityResult h_cap = minimize_energy(hk, cfg.tol, cfg.max_iter);

  // (c) R(n) n^beta p^n over dyadic n.
  json rn = json::array();
  double band_lo = std::numeric_limits<double>::infinity(), band_hi = 0;
  double drift_max = 1, previous = 0;
  for (int n = cfg.rn_min; n <= cfg.rn_max; n *= 2) {
    const double scaled = std::exp(log_r_of_n(d, n, params) +
                                   beta * std::log(static_cast<double>(n)) +
                                   n * std::log(params.p));
    rn.push_back({{"n", n}, {"scaled", scaled}});
    band_lo = std::min(band_lo, scaled);
    band_hi = std::max(band_hi, scaled);
    if (previous > 0)
      drift_max = std::max(drift_max, std::max(scaled / previous,
                                               previous / scaled));
    previous = scaled;
  }

  const bool g_positive = g_cap.capacity > cfg.cutoff;
  const bool h_positive = h_cap.capacity > cfg.cutoff;
  const bool pass = g_positive == h_positive;
  if (!pass) report.exit_code = 2;
  return json{{"beta", beta},
              {"g_capacity", g_cap.capacity},
              {"h_capacity", h_cap.capacity},
              {"g_positive", g_positive},
              {"h_positive", h_positive},
              {"rn_band", rn},
              {"band_ratio", band_hi / band_lo},
              {"dyadic_drift_max", drift_max},
              {"verdict", pass ? "PASS" : "FAIL"},
              {"tree_hash", tree_hash(t)}};
}

json run_hps_check(const RunConfig& cfg, RunReport&) {
  const PercolationParams params(cfg.p);
  const std::vector<double> log_levels = log_levels_for(cfg, cfg.terms);
  const int terms =
      std::min<int>(cfg.terms, static_cast<int>(log_levels.size()) - 1);
  const HpsResult r = hps_condition(log_levels, params, terms);
  const char* verdict =
      r.probe.verdict == SeriesVerdict::Converges    ? "converges"
      : r.probe.verdict == SeriesVerdict::Diverges   ? "diverges"
                                                     : "inconclusive";
  return json{{"partial_sum", r.partial_sum},
              {"log_partial_sum", r.log_partial_sum},
              {"verdict", verdict},
              {"tail_log2_ratio", r.probe.tail_log2_ratio},
              {"stable", r.probe.stable},
              {"terms", terms}};
}

}  // namespace

std::vector<double> parse_alpha_grid(const std::string& spec) {
  double lo = 0, hi = 0;
  int steps = 0;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> sep1 >> hi >> sep2 >> steps) || sep1 != ':' ||
      sep2 != ':' || steps < 1 || hi < lo)
    throw Error(Errc::ConfigInvalid, "alpha grid must be A:B:STEPS");
  std::vector<double> grid;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i)
    grid.push_back(lo + (hi - lo) * i / (steps - 1));
  return grid;
}

RunReport run_command(const RunConfig& cfg) {
  RunReport report;
  json body;
  if (cfg.command == "capacity")
    body = run_capacity(cfg, report);
  else if (cfg.command == "simulate")
    body = run_simulate(cfg, report);
  else if (cfg.command == "bounds-check")
    body = run_bounds_check(cfg, report);
  else if (cfg.command == "dim-sweep")
    body = run_dim_sweep(cfg, report);
  else if (cfg.command == "betaset")
    body = run_betaset(cfg, report);
  else if (cfg.command == "hps-check")
    body = run_hps_check(cfg, report);
  else
    throw Error(Errc::ConfigInvalid, "unknown command '" + cfg.command + "'");

  body["config_hash"] = config_hash(cfg);
  body["seed"] = cfg.seed;
  report.body = std::move(body);
  if (cfg.format == "csv" && report.csv.empty())
    report.csv = report_csv(report.body);
  return report;
}

}  // namespace perc
