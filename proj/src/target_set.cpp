#include "perc/target_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace perc {

double TargetSet::certified_scale_min() const {
  if (!generator) return 0.0;
  return std::pow(static_cast<double>(generator->base), -generator->depth);
}

bool TimeGrid::has_atomic_cells() const {
  return std::any_of(cell_half_widths.begin(), cell_half_widths.end(),
                     [](double w) { return w == 0.0; });
}

TargetSet from_intervals(const std::vector<Interval>& spec) {
  if (spec.empty()) throw Error(Errc::EmptySpec, "no intervals");
  std::vector<Interval> sorted = spec;
  for (const Interval& iv : sorted) {
    if (!(iv.lo <= iv.hi))
      throw Error(Errc::ReversedInterval, "interval endpoints out of order");
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw Error(Errc::ReversedInterval, "interval endpoint not finite");
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  TargetSet d;
  d.intervals.push_back(sorted[0]);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    Interval& last = d.intervals.back();
    if (sorted[i].lo <= last.hi)
      last.hi = std::max(last.hi, sorted[i].hi);
    else
      d.intervals.push_back(sorted[i]);
  }
  return d;
}

TargetSet point_target(double t) { return from_intervals({{t, t}}); }

TargetSet cantor_set(int base, const std::vector<int>& digits, int depth,
                     long long max_cells) {
  if (base < 2) throw Error(Errc::ConfigInvalid, "cantor base must be >= 2");
  if (depth < 1) throw Error(Errc::ConfigInvalid, "cantor depth must be >= 1");
  if (digits.empty()) throw Error(Errc::EmptyDigitSet, "empty digit set");
  std::vector<int> b = digits;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (b.front() < 0 || b.back() >= base)
    throw Error(Errc::ConfigInvalid, "digit outside {0,...,base-1}");

  long long cells = 1;
  for (int j = 0; j < depth; ++j) {
    cells *= static_cast<long long>(b.size());
    if (cells > max_cells)
      throw Error(Errc::BudgetExceeded, "too many generator cells");
  }

  const double width = std::pow(static_cast<double>(base), -depth);
  // Enumerate depth-m digit strings over B in lexicographic order; the
  // cell of string (d_1..d_m) is [sum d_j b^-j, sum + b^-m].
  TargetSet d;
  d.intervals.reserve(static_cast<std::size_t>(cells));
  std::vector<int> idx(depth, 0);
  while (true) {
    double lo = 0.0;
    double scale = 1.0;
    for (int j = 0; j < depth; ++j) {
      scale /= base;
      lo += b[idx[j]] * scale;
    }
    d.intervals.push_back({lo, lo + width});
    int j = depth - 1;
    while (j >= 0 && idx[j] + 1 == static_cast<int>(b.size())) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  d.generator = CantorGenerator{base, b, depth};
  d.beta = std::log(static_cast<double>(b.size())) / std::log(base);
  return d;
}

TimeGrid discretize(const TargetSet& d, double resolution) {
  if (!(resolution > 0))
    throw Error(Errc::ResolutionTooCoarse, "resolution must be positive");
  TimeGrid grid;
  grid.half_width = resolution;
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    const Interval& iv = d.intervals[i];
    if (iv.length() == 0) {
      grid.cell_centers.push_back(iv.lo);
      grid.cell_half_widths.push_back(0.0);
      grid.parent_interval.push_back(static_cast<int>(i));
      continue;
    }
    if (resolution >= iv.length())
      throw Error(Errc::ResolutionTooCoarse,
                  "resolution exceeds an interval length");
    const long long k = std::max<long long>(
        1, std::llround(iv.length() / (2.0 * resolution)));
    const double w = iv.length() / (2.0 * k);
    for (long long j = 0; j < k; ++j) {
      grid.cell_centers.push_back(iv.lo + (2 * j + 1) * w);
      grid.cell_half_widths.push_back(w);
      grid.parent_interval.push_back(static_cast<int>(i));
    }
  }
  return grid;
}

double box_dimension_estimate(const std::vector<Interval>& set,
                              const std::vector<double>& scales) {
  if (set.empty()) throw Error(Errc::EmptySpec, "empty interval set");
  std::vector<double> eps = scales;
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  if (eps.size() < 2 || eps.front() <= 0)
    throw Error(Errc::DegenerateScales, "need >= 2 positive distinct scales");

  std::vector<Interval> sorted = set;
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  std::vector<double> xs, ys;
  for (double e : eps) {
    long long boxes = 0;
    long long last = std::numeric_limits<long long>::min();
    for (const Interval& iv : sorted) {
      long long lo = static_cast<long long>(std::floor(iv.lo / e));
      long long hi = static_cast<long long>(std::floor(iv.hi / e));
      lo = std::max(lo, last + 1);
      if (hi >= lo) {
        boxes += hi - lo + 1;
        last = hi;
      } else {
        last = std::max(last, hi);
      }
    }
    xs.push_back(std::log(1.0 / e));
    ys.push_back(std::log(static_cast<double>(std::max<long long>(1, boxes))));
  }

  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(Errc::DegenerateScales, "identical scales");
  return sxy / sxx;
}

}  // namespace perc
