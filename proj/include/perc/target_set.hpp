#pragma once

#include <optional>
#include <vector>

#include "perc/error.hpp"

namespace perc {

// Closed interval [lo, hi]; lo == hi is a point.
struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  bool touches(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

struct CantorGenerator {
  int base;                // b >= 2
  std::vector<int> digits; // B, subset of {0,...,b-1}, sorted
  int depth;               // m
};

// Closed target set D as sorted intervals.  Generator-built sets keep one
// interval per depth-m cell, each of width base^-m, and record
// beta = log_base |digits|.  The measure-scaling bound sigma([x-r,x+r]) ~ r^beta
// is certified only for r in [base^-m, 1]; certified_scale_min() reports it.
struct TargetSet {
  std::vector<Interval> intervals;
  std::optional<CantorGenerator> generator;
  std::optional<double> beta;

  double hull_lo() const { return intervals.front().lo; }
  double hull_hi() const { return intervals.back().hi; }
  bool is_single_point() const {
    return intervals.size() == 1 && intervals[0].length() == 0;
  }
  double certified_scale_min() const;
};

// Uniform-width cells tiling the target intervals.  Point intervals become
// atomic cells of half-width 0.
struct TimeGrid {
  std::vector<double> cell_centers;       // strictly increasing
  double half_width = 0;                  // requested epsilon
  std::vector<double> cell_half_widths;   // exact per-cell value (0 = atomic)
  std::vector<int> parent_interval;

  int size() const { return static_cast<int>(cell_centers.size()); }
  bool has_atomic_cells() const;
};

TargetSet from_intervals(const std::vector<Interval>& spec);
TargetSet point_target(double t);
TargetSet cantor_set(int base, const std::vector<int>& digits, int depth,
                     long long max_cells = 4'000'000);

TimeGrid discretize(const TargetSet& d, double resolution);

// Least-squares slope of log N(eps) against log(1/eps), N(eps) = number of
// grid boxes of side eps meeting the interval union.
double box_dimension_estimate(const std::vector<Interval>& set,
                              const std::vector<double>& scales);

}  // namespace perc
