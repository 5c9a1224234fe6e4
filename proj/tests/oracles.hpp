#pragma once

// Brute-force reference implementations used only by tests.  They stay
// deliberately independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "perc/dynamics.hpp"
#include "perc/tree.hpp"

namespace oracles {

// Meet depth via explicit ancestor-set intersection.
inline int meet_depth_bruteforce(const perc::Tree& t, int a, int b) {
  std::set<int> ancestors;
  for (int v = a; v != -1; v = t.parent[v]) ancestors.insert(v);
  int best = 0;
  for (int v = b; v != -1; v = t.parent[v])
    if (ancestors.count(v)) {
      best = t.depth[v];
      break;
    }
  return best;
}

// Root-to-depth-n connectivity by scratch DFS over currently open edges.
inline bool percolates_now(const perc::Tree& t,
                           const std::vector<std::uint8_t>& open) {
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (t.depth[v] == t.height) return true;
    for (int c : t.children[v])
      if (open[static_cast<std::size_t>(c)]) stack.push_back(c);
  }
  return false;
}

// Recomputes the whole percolation time set from scratch at every event.
inline perc::PercolationTrace trace_bruteforce(const perc::Tree& t,
                                               const perc::SimulationRun& run) {
  struct Event {
    double time;
    int edge;
  };
  std::vector<Event> events;
  for (int e = 1; e < t.vertex_count(); ++e)
    for (double time : run.flip_times[static_cast<std::size_t>(e)])
      events.push_back({time, e});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.edge < b.edge);
  });

  std::vector<std::uint8_t> open(run.initial_open.begin(),
                                 run.initial_open.end());
  perc::PercolationTrace trace;
  trace.horizon = run.horizon;
  bool percolating = percolates_now(t, open);
  double started = 0;
  for (const Event& ev : events) {
    open[static_cast<std::size_t>(ev.edge)] ^= 1;
    const bool now = percolates_now(t, open);
    if (now != percolating) {
      if (now)
        started = ev.time;
      else
        trace.intervals.push_back({started, ev.time});
      percolating = now;
    }
  }
  if (percolating) trace.intervals.push_back({started, run.horizon});
  return trace;
}

// Minimum of w'Kw over a simplex grid with `steps` subdivisions per
// coordinate (composition enumeration).
inline double simplex_grid_min_energy(const Eigen::MatrixXd& k, int steps,
                                      Eigen::VectorXd* argmin = nullptr) {
  const int n = static_cast<int>(k.rows());
  std::vector<int> comp(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  // enumerate all compositions of `steps` into n parts
  comp[0] = steps;
  while (true) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i)
      w[i] = static_cast<double>(comp[static_cast<std::size_t>(i)]) / steps;
    const double e = w.dot(k * w);
    if (e < best) {
      best = e;
      if (argmin) *argmin = w;
    }
    // next composition in colex order
    int i = 0;
    while (i < n - 1 && comp[static_cast<std::size_t>(i)] == 0) ++i;
    if (i == n - 1) break;
    const int moved = comp[static_cast<std::size_t>(i)];
    comp[static_cast<std::size_t>(i)] = 0;
    comp[0] = moved - 1;
    ++comp[static_cast<std::size_t>(i) + 1];
  }
  return best;
}

// All rooted trees with at most `max_edges` edges, one representative per
// isomorphism class, as explicit children lists.  Canonical form: sorted
// multiset of child canonical strings.
inline void enumerate_rooted_trees(
    int max_edges, std::vector<std::vector<std::vector<int>>>& out) {
  // trees_by_size[k]: canonical strings of rooted trees with k vertices
  std::vector<std::set<std::string>> by_size(
      static_cast<std::size_t>(max_edges) + 2);
  by_size[1].insert("()");
  for (int size = 2; size <= max_edges + 1; ++size) {
    // split size-1 vertices among children subtrees: enumerate multisets
    // recursively over the canonical strings of smaller trees
    std::vector<std::string> pool;
    std::vector<int> pool_size;
    for (int k = 1; k < size; ++k)
      for (const std::string& s : by_size[static_cast<std::size_t>(k)]) {
        pool.push_back(s);
        pool_size.push_back(k);
      }
    // choose a multiset of pool entries with sizes summing to size-1,
    // non-decreasing indices to avoid duplicates
    std::vector<int> chosen;
    std::function<void(int, int)> rec = [&](int start, int remaining) {
      if (remaining == 0) {
        std::vector<std::string> parts;
        for (int idx : chosen)
          parts.push_back(pool[static_cast<std::size_t>(idx)]);
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (const std::string& part : parts) s += part;
        s += ")";
        by_size[static_cast<std::size_t>(size)].insert(s);
        return;
      }
      for (int i = start; i < static_cast<int>(pool.size()); ++i) {
        if (pool_size[static_cast<std::size_t>(i)] > remaining) continue;
        chosen.push_back(i);
        rec(i, remaining - pool_size[static_cast<std::size_t>(i)]);
        chosen.pop_back();
      }
    };
    rec(0, size - 1);
  }

  // parse canonical strings back into children lists
  for (int size = 1; size <= max_edges + 1; ++size) {
    for (const std::string& s : by_size[static_cast<std::size_t>(size)]) {
      std::vector<std::vector<int>> children;
      std::vector<int> stack;
      int next = -1;
      for (char c : s) {
        if (c == '(') {
          ++next;
          children.emplace_back();
          if (!stack.empty()) children[static_cast<std::size_t>(stack.back())]
                                  .push_back(next);
          stack.push_back(next);
        } else {
          stack.pop_back();
        }
      }
      out.push_back(children);
    }
  }
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

struct MeanStd {
  double mean = 0;
  double std_of_mean = 0;
};

inline MeanStd mean_and_error(const std::vector<double>& xs) {
  MeanStd r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std_of_mean =
      std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0)) /
      std::sqrt(static_cast<double>(xs.size()));
  return r;
}

}  // namespace oracles
