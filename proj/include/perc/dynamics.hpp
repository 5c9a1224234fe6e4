#pragma once

#include <cstdint>
#include <vector>

#include "perc/capacity.hpp"
#include "perc/params.hpp"
#include "perc/target_set.hpp"
#include "perc/tree.hpp"

namespace perc {

// Per-edge flip trajectories over [0, horizon].  Edges are indexed by
// their child vertex (entry 0 unused).  Each edge draws from its own
// counter-based substream keyed by (seed, edge), so the result does not
// depend on iteration order.
struct SimulationRun {
  double horizon = 0;
  std::uint64_t seed = 0;
  int edge_slots = 0;  // == vertex count of the generating tree
  std::vector<std::uint8_t> initial_open;
  std::vector<std::vector<double>> flip_times;  // strictly increasing
};

// S(G) over [0, horizon]: closed intervals during which the root is joined
// to depth n by open edges.
struct PercolationTrace {
  double horizon = 0;
  std::vector<Interval> intervals;
};

struct HitEstimate {
  long long runs = 0;
  long long hits = 0;
  double p_hat = 0;
  double std_err = 0;
};

SimulationRun simulate_edges(const Tree& t, const PercolationParams& params,
                             double horizon, std::uint64_t seed);

bool edge_open_at(const SimulationRun& run, int edge, double t);

// Exact percolation time set of the run: per-vertex live-child counters
// are updated along the flipped edge's root path only, so each event costs
// O(depth).
PercolationTrace percolation_trace(const Tree& t, const SimulationRun& run);

// Closed-interval intersection; endpoint touching counts as a hit.
bool hits_target(const PercolationTrace& trace, const TargetSet& d);

HitEstimate estimate_hit_probability(const Tree& t,
                                     const PercolationParams& params,
                                     const TargetSet& d, long long runs,
                                     std::uint64_t seed, double horizon = 0);

// p^-n * sum_atoms mu(v,t) 1{every edge from the root to v open at t}.
// Averaged over runs this estimates 1; its second moment is at most
// 2 I_h(mu).
double z_statistic(const Tree& t, const SimulationRun& run,
                   const ProductMeasure& mu, const TimeGrid& grid,
                   const PercolationParams& params);

std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b);

// Mean box-dimension estimate of trace-with-target intersections over the
// traces that hit; a finite-depth proxy for dim_H(S(G) meet D).
double exceptional_dim_estimate(const std::vector<PercolationTrace>& traces,
                                const TargetSet& d,
                                const std::vector<double>& scales);

}  // namespace perc
