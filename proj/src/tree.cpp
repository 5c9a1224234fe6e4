#include "perc/tree.hpp"

#include <algorithm>
#include <queue>

#include "perc/rng.hpp"

namespace perc {

namespace {

// Recomputes depths, level counts and the leaf list from parent/children,
// assuming BFS vertex order (parents precede children).
void finalize(Tree& t) {
  const int n = t.vertex_count();
  t.depth.assign(n, 0);
  int height = 0;
  for (int v = 1; v < n; ++v) {
    t.depth[v] = t.depth[t.parent[v]] + 1;
    height = std::max(height, t.depth[v]);
  }
  t.height = height;
  t.level_counts.assign(height + 1, 0);
  for (int v = 0; v < n; ++v) ++t.level_counts[t.depth[v]];
  t.leaves.clear();
  for (int v = 0; v < n; ++v)
    if (t.depth[v] == height) t.leaves.push_back(v);
}

// Rebuilds a tree in BFS order from an arbitrary parent assignment over a
// subset of kept vertices.
Tree reindex_bfs(int root, const std::vector<std::vector<int>>& children,
                 const std::vector<char>& keep) {
  std::vector<int> order;
  std::vector<int> new_id(children.size(), -1);
  std::queue<int> q;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    new_id[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (int c : children[v])
      if (keep[c]) q.push(c);
  }
  Tree t;
  t.parent.assign(order.size(), -1);
  t.children.assign(order.size(), {});
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : children[order[i]]) {
      if (!keep[c]) continue;
      t.parent[new_id[c]] = static_cast<int>(i);
      t.children[i].push_back(new_id[c]);
    }
  }
  finalize(t);
  return t;
}

}  // namespace

Tree build_explicit(const std::vector<std::vector<int>>& children_lists) {
  const int n = static_cast<int>(children_lists.size());
  if (n == 0) throw Error(Errc::EmptyTree, "no vertices");

  std::vector<int> indegree(n, 0);
  for (int v = 0; v < n; ++v) {
    for (int c : children_lists[v]) {
      if (c < 0 || c >= n)
        throw Error(Errc::DisconnectedVertex, "child index out of range");
      if (c == 0) throw Error(Errc::CycleDetected, "root listed as a child");
      if (++indegree[c] > 1)
        throw Error(Errc::CycleDetected, "vertex has two parents");
    }
  }
  for (int v = 1; v < n; ++v)
    if (indegree[v] == 0)
      throw Error(Errc::DisconnectedVertex, "vertex unreachable from root");

  // Every non-root has a unique parent; anything BFS from the root misses
  // must sit on a cycle.
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int c : children_lists[v]) {
      if (seen[c]) throw Error(Errc::CycleDetected, "vertex revisited");
      seen[c] = 1;
      ++reached;
      q.push(c);
    }
  }
  if (reached != n) throw Error(Errc::CycleDetected, "cyclic component");

  return reindex_bfs(0, children_lists, std::vector<char>(n, 1));
}

Tree build_spherical(const SphericalSpec& spec, long long max_vertices) {
  long long total = 1, level = 1;
  for (int d : spec.degrees) {
    if (d < 1) throw Error(Errc::ConfigInvalid, "spherical degree < 1");
    if (level > max_vertices / d)
      throw Error(Errc::BudgetExceeded, "spherical tree too large");
    level *= d;
    total += level;
    if (total > max_vertices)
      throw Error(Errc::BudgetExceeded, "spherical tree too large");
  }

  Tree t;
  t.parent.reserve(total);
  t.children.reserve(total);
  t.parent.push_back(-1);
  t.children.emplace_back();
  int level_begin = 0, level_end = 1;
  for (int d : spec.degrees) {
    for (int v = level_begin; v < level_end; ++v) {
      for (int k = 0; k < d; ++k) {
        int c = static_cast<int>(t.parent.size());
        t.parent.push_back(v);
        t.children.emplace_back();
        t.children[v].push_back(c);
      }
    }
    level_begin = level_end;
    level_end = static_cast<int>(t.parent.size());
  }
  finalize(t);
  return t;
}

Tree build_galton_watson(const std::vector<double>& offspring_probs,
                         int target_depth, std::uint64_t seed,
                         long long max_vertices) {
  if (offspring_probs.empty())
    throw Error(Errc::ConfigInvalid, "empty offspring distribution");
  double mass = 0;
  for (double w : offspring_probs) {
    if (w < 0) throw Error(Errc::ConfigInvalid, "negative offspring weight");
    mass += w;
  }
  if (mass <= 0) throw Error(Errc::ConfigInvalid, "zero offspring mass");

  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(attempt));
    Tree t;
    t.parent.push_back(-1);
    t.children.emplace_back();
    int level_begin = 0, level_end = 1;
    for (int depth = 0; depth < target_depth && level_begin < level_end;
         ++depth) {
      for (int v = level_begin; v < level_end; ++v) {
        double u = rng.next_unit() * mass;
        int k = 0;
        for (; k + 1 < static_cast<int>(offspring_probs.size()); ++k) {
          if (u < offspring_probs[k]) break;
          u -= offspring_probs[k];
        }
        for (int j = 0; j < k; ++j) {
          if (static_cast<long long>(t.parent.size()) >= max_vertices)
            throw Error(Errc::BudgetExceeded, "Galton-Watson tree too large");
          int c = static_cast<int>(t.parent.size());
          t.parent.push_back(v);
          t.children.emplace_back();
          t.children[v].push_back(c);
        }
      }
      level_begin = level_end;
      level_end = static_cast<int>(t.parent.size());
    }
    finalize(t);
    if (t.height == target_depth) return prune_leafless(t);
  }
  throw Error(Errc::GenerationFailed,
              "Galton-Watson sample died out on every attempt");
}

Tree build_with_level_counts(const std::vector<long long>& counts,
                             long long max_vertices) {
  if (counts.empty() || counts[0] != 1)
    throw Error(Errc::ConfigInvalid, "level counts must start with 1");
  long long total = 0;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] < 1) throw Error(Errc::ConfigInvalid, "empty level");
    if (l > 0 && counts[l] < counts[l - 1])
      throw Error(Errc::ConfigInvalid,
                  "level counts must be non-decreasing for a leafless tree");
    total += counts[l];
    if (total > max_vertices)
      throw Error(Errc::BudgetExceeded, "level-count tree too large");
  }

  Tree t;
  t.parent.reserve(total);
  t.children.reserve(total);
  t.parent.push_back(-1);
  t.children.emplace_back();
  int level_begin = 0, level_end = 1;
  for (std::size_t l = 1; l < counts.size(); ++l) {
    const long long parents = counts[l - 1];
    const long long want = counts[l];
    // Parent i gets floor(want/parents) children plus one of the
    // remainder, spread from the front.
    for (long long i = 0; i < parents; ++i) {
      long long share = want / parents + (i < want % parents ? 1 : 0);
      int v = level_begin + static_cast<int>(i);
      for (long long j = 0; j < share; ++j) {
        int c = static_cast<int>(t.parent.size());
        t.parent.push_back(v);
        t.children.emplace_back();
        t.children[v].push_back(c);
      }
    }
    level_begin = level_end;
    level_end = static_cast<int>(t.parent.size());
  }
  finalize(t);
  return t;
}

Tree prune_leafless(const Tree& t) {
  const int n = t.vertex_count();
  std::vector<int> deepest(n, 0);
  // BFS order means children come after parents; sweep backwards.
  for (int v = n - 1; v >= 0; --v) {
    deepest[v] = std::max(deepest[v], t.depth[v]);
    if (v > 0)
      deepest[t.parent[v]] = std::max(deepest[t.parent[v]], deepest[v]);
  }
  std::vector<char> keep(n, 0);
  for (int v = 0; v < n; ++v) keep[v] = deepest[v] == t.height;
  return reindex_bfs(0, t.children, keep);
}

int meet_depth(const Tree& t, int leaf_a, int leaf_b) {
  auto check = [&](int v) {
    if (v < 0 || v >= t.vertex_count() || !t.is_leaf(v))
      throw Error(Errc::NotALeaf, "meet_depth argument is not a leaf");
  };
  check(leaf_a);
  check(leaf_b);
  int a = leaf_a, b = leaf_b;
  while (a != b) {
    if (t.depth[a] >= t.depth[b])
      a = t.parent[a];
    else
      b = t.parent[b];
  }
  return t.depth[a];
}

bool is_spherically_symmetric(const Tree& t) {
  for (int l = 0; l < t.height; ++l) {
    int degree = -1;
    for (int v = 0; v < t.vertex_count(); ++v) {
      if (t.depth[v] != l) continue;
      int d = static_cast<int>(t.children[v].size());
      if (degree == -1)
        degree = d;
      else if (degree != d)
        return false;
    }
  }
  return true;
}

std::uint64_t tree_hash(const Tree& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  eat(static_cast<std::uint64_t>(t.vertex_count()));
  for (int v = 0; v < t.vertex_count(); ++v)
    eat(static_cast<std::uint64_t>(t.children[v].size()));
  return h;
}

}  // namespace perc
