#pragma once

#include <cstdint>
#include <vector>

#include "perc/params.hpp"

namespace perc {

inline constexpr long long kDefaultVertexBudget = 8'000'000;

// Rooted tree in breadth-first vertex order (root = 0).  The boundary of
// the depth-n truncation is the set of depth-n vertices, listed in
// `leaves`.  Immutable after construction and safe to share.
struct Tree {
  std::vector<int> parent;                // parent[0] == -1
  std::vector<std::vector<int>> children;
  std::vector<int> depth;
  int height = 0;                         // n = max depth
  std::vector<long long> level_counts;    // |G_0| .. |G_n|
  std::vector<int> leaves;                // depth-n vertices, BFS order

  int vertex_count() const { return static_cast<int>(parent.size()); }
  int edge_count() const { return vertex_count() - 1; }
  bool is_leaf(int v) const { return depth[v] == height; }
};

// Per-level child counts of a spherically symmetric tree.
struct SphericalSpec {
  std::vector<int> degrees;
};

Tree build_explicit(const std::vector<std::vector<int>>& children_lists);

Tree build_spherical(const SphericalSpec& spec,
                     long long max_vertices = kDefaultVertexBudget);

// Galton-Watson tree grown level by level to `target_depth`, then pruned
// leafless.  Extinct samples are retried on fresh substreams; throws
// GenerationFailed when every retry dies out.
Tree build_galton_watson(const std::vector<double>& offspring_probs,
                         int target_depth, std::uint64_t seed,
                         long long max_vertices = kDefaultVertexBudget);

// Deterministic tree with prescribed (non-decreasing) level sizes; children
// are distributed round-robin so same-level child counts differ by at most
// one.  Exactly spherically symmetric when each count divides the next.
Tree build_with_level_counts(const std::vector<long long>& counts,
                             long long max_vertices = kDefaultVertexBudget);

// Keeps exactly the vertices that have a descendant at depth n.
Tree prune_leafless(const Tree& t);

// Depth |a ^ b| of the lowest common ancestor of two leaves.
int meet_depth(const Tree& t, int leaf_a, int leaf_b);

bool is_spherically_symmetric(const Tree& t);

// Stable structural hash (FNV-1a over the BFS child-count sequence).
std::uint64_t tree_hash(const Tree& t);

}  // namespace perc
