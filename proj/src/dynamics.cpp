#include "perc/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "perc/rng.hpp"

namespace perc {

SimulationRun simulate_edges(const Tree& t, const PercolationParams& params,
                             double horizon, std::uint64_t seed) {
  if (!(horizon > 0)) throw Error(Errc::ConfigInvalid, "horizon must be > 0");
  SimulationRun run;
  run.horizon = horizon;
  run.seed = seed;
  run.edge_slots = t.vertex_count();
  run.initial_open.assign(static_cast<std::size_t>(t.vertex_count()), 0);
  run.flip_times.assign(static_cast<std::size_t>(t.vertex_count()), {});
  for (int e = 1; e < t.vertex_count(); ++e) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(e));
    bool open = rng.next_bernoulli(params.p);
    run.initial_open[static_cast<std::size_t>(e)] = open ? 1 : 0;
    double now = 0;
    auto& flips = run.flip_times[static_cast<std::size_t>(e)];
    while (true) {
      now += rng.next_exponential(open ? params.q : params.p);
      if (now > horizon) break;
      flips.push_back(now);
      open = !open;
    }
  }
  return run;
}

bool edge_open_at(const SimulationRun& run, int edge, double t) {
  const auto& flips = run.flip_times[static_cast<std::size_t>(edge)];
  const auto n_before =
      std::upper_bound(flips.begin(), flips.end(), t) - flips.begin();
  const bool initially = run.initial_open[static_cast<std::size_t>(edge)] != 0;
  return (n_before % 2 == 0) ? initially : !initially;
}

namespace {

void check_run(const Tree& t, const SimulationRun& run) {
  if (run.edge_slots != t.vertex_count())
    throw Error(Errc::MismatchedRun, "run was generated for a different tree");
}

}  // namespace

PercolationTrace percolation_trace(const Tree& t, const SimulationRun& run) {
  check_run(t, run);
  const int n = t.vertex_count();

  // live[v]: v reaches depth n through open edges below it.
  // live_children[v] counts children c with edge (v,c) open and live[c].
  std::vector<std::uint8_t> open(run.initial_open.begin(),
                                 run.initial_open.end());
  std::vector<int> live_children(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> live(static_cast<std::size_t>(n), 0);
  for (int v = n - 1; v >= 0; --v) {
    live[static_cast<std::size_t>(v)] =
        t.depth[v] == t.height || live_children[static_cast<std::size_t>(v)] > 0;
    if (v > 0 && open[static_cast<std::size_t>(v)] &&
        live[static_cast<std::size_t>(v)])
      ++live_children[static_cast<std::size_t>(t.parent[v])];
  }

  struct Event {
    double time;
    int edge;
  };
  std::vector<Event> events;
  for (int e = 1; e < n; ++e)
    for (double time : run.flip_times[static_cast<std::size_t>(e)])
      events.push_back({time, e});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.edge < b.edge);
  });

  PercolationTrace trace;
  trace.horizon = run.horizon;
  bool percolating = live[0] != 0;
  double started = 0;
  for (const Event& ev : events) {
    const int c = ev.edge;
    const bool was_contributing =
        open[static_cast<std::size_t>(c)] && live[static_cast<std::size_t>(c)];
    open[static_cast<std::size_t>(c)] ^= 1;
    const bool contributes =
        open[static_cast<std::size_t>(c)] && live[static_cast<std::size_t>(c)];
    if (was_contributing == contributes) continue;

    // Propagate the changed contribution along the root path until a
    // vertex's liveness is unaffected.
    int child = c;
    bool grow = contributes;
    while (true) {
      const int v = t.parent[child];
      auto& count = live_children[static_cast<std::size_t>(v)];
      count += grow ? 1 : -1;
      const bool now_live = t.depth[v] == t.height || count > 0;
      if (now_live == (live[static_cast<std::size_t>(v)] != 0)) break;
      live[static_cast<std::size_t>(v)] = now_live ? 1 : 0;
      if (v == 0) break;
      if (!open[static_cast<std::size_t>(v)]) break;  // change is invisible above
      child = v;
      grow = now_live;
    }

    const bool now_percolating = live[0] != 0;
    if (now_percolating != percolating) {
      if (now_percolating)
        started = ev.time;
      else
        trace.intervals.push_back({started, ev.time});
      percolating = now_percolating;
    }
  }
  if (percolating) trace.intervals.push_back({started, run.horizon});
  return trace;
}

bool hits_target(const PercolationTrace& trace, const TargetSet& d) {
  if (d.hull_hi() > trace.horizon)
    throw Error(Errc::HorizonExceeded, "target extends past the run horizon");
  std::size_t i = 0, j = 0;
  while (i < trace.intervals.size() && j < d.intervals.size()) {
    if (trace.intervals[i].touches(d.intervals[j])) return true;
    if (trace.intervals[i].hi < d.intervals[j].hi)
      ++i;
    else
      ++j;
  }
  return false;
}

HitEstimate estimate_hit_probability(const Tree& t,
                                     const PercolationParams& params,
                                     const TargetSet& d, long long runs,
                                     std::uint64_t seed, double horizon) {
  if (runs < 1) throw Error(Errc::ConfigInvalid, "need at least one run");
  if (horizon <= 0) horizon = std::max(d.hull_hi(), 1e-9);
  HitEstimate est;
  est.runs = runs;
  SubstreamRng seeder(seed, 0x5eedULL);
  for (long long r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = seeder.next_u64();
    const SimulationRun run = simulate_edges(t, params, horizon, run_seed);
    const PercolationTrace trace = percolation_trace(t, run);
    if (hits_target(trace, d)) ++est.hits;
  }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(runs);
  est.std_err =
      std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(runs));
  return est;
}

double z_statistic(const Tree& t, const SimulationRun& run,
                   const ProductMeasure& mu, const TimeGrid& grid,
                   const PercolationParams& params) {
  check_run(t, run);
  mu.validate();
  double total = 0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& a = mu.atoms[i];
    if (a.leaf < 0 || a.leaf >= static_cast<int>(t.leaves.size()))
      throw Error(Errc::DimensionMismatch, "atom leaf out of range");
    if (a.cell < 0 || a.cell >= grid.size())
      throw Error(Errc::DimensionMismatch, "atom cell out of range");
    const double time = grid.cell_centers[static_cast<std::size_t>(a.cell)];
    if (time > run.horizon)
      throw Error(Errc::HorizonExceeded, "atom time past the run horizon");
    bool path_open = true;
    for (int v = t.leaves[static_cast<std::size_t>(a.leaf)]; v != 0;
         v = t.parent[v]) {
      if (!edge_open_at(run, v, time)) {
        path_open = false;
        break;
      }
    }
    if (path_open) total += mu.weights[i];
  }
  return total * std::pow(params.p, -t.height);
}

std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

double exceptional_dim_estimate(const std::vector<PercolationTrace>& traces,
                                const TargetSet& d,
                                const std::vector<double>& scales) {
  if (traces.empty()) throw Error(Errc::NoHits, "no traces supplied");
  double total = 0;
  long long hits = 0;
  for (const PercolationTrace& trace : traces) {
    const auto meet = intersect_intervals(trace.intervals, d.intervals);
    if (meet.empty()) continue;
    total += box_dimension_estimate(meet, scales);
    ++hits;
  }
  if (hits == 0) throw Error(Errc::NoHits, "no trace hits the target");
  return total / static_cast<double>(hits);
}

}  // namespace perc
