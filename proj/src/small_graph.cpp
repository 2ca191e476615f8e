#include "ust/small_graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ust {

SmallGraph cycle_graph(int n) {
  SmallGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

SmallGraph complete_graph(int n) {
  SmallGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

SmallGraph path_graph(int n) {
  SmallGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

bool is_connected(const SmallGraph& g) {
  const int n = g.vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(std::size_t(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : g.adjacency[std::size_t(u)]) {
      if (!seen[std::size_t(v)]) {
        seen[std::size_t(v)] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

std::uint64_t spanning_tree_count(const SmallGraph& g) {
  const int n = g.vertex_count();
  if (n <= 1) return 1;
  if (!is_connected(g)) return 0;

  // Laplacian cofactor (delete row/col 0), fraction-free Bareiss elimination.
  const int m = n - 1;
  std::vector<__int128> a(std::size_t(m) * std::size_t(m), 0);
  auto at = [&](int i, int j) -> __int128& { return a[std::size_t(i) * m + j]; };
  // Each undirected edge appears once per direction in the adjacency lists,
  // contributing deg(u) to the diagonal and -multiplicity off-diagonal.
  for (int u = 1; u < n; ++u) {
    for (int v : g.adjacency[std::size_t(u)]) {
      at(u - 1, u - 1) += 1;
      if (v >= 1) at(u - 1, v - 1) -= 1;
    }
  }

  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < m - 1; ++k) {
    if (at(k, k) == 0) {
      int pivot = -1;
      for (int i = k + 1; i < m; ++i) {
        if (at(i, k) != 0) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return 0;
      for (int j = 0; j < m; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < m; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  __int128 det = at(m - 1, m - 1) * sign;
  if (det < 0) det = -det;
  return std::uint64_t(det);
}

std::vector<int> wilson_tree(const SmallGraph& g, int root, RngStream& rng) {
  const int n = g.vertex_count();
  if (root < 0 || root >= n) throw std::out_of_range("wilson_tree: bad root");
  std::vector<int> parent(std::size_t(n), -2);  // -2 = not in tree yet
  parent[std::size_t(root)] = -1;
  std::vector<int> successor(std::size_t(n), -1);
  for (int start = 0; start < n; ++start) {
    if (parent[std::size_t(start)] != -2) continue;
    int cur = start;
    // Random walk until the current tree is hit; successor overwrites
    // perform the loop erasure implicitly (last-exit edges survive).
    while (parent[std::size_t(cur)] == -2) {
      const auto& nb = g.adjacency[std::size_t(cur)];
      const int nxt = nb[rng.uniform_below(std::uint32_t(nb.size()))];
      successor[std::size_t(cur)] = nxt;
      cur = nxt;
    }
    int u = start;
    while (parent[std::size_t(u)] == -2) {
      parent[std::size_t(u)] = successor[std::size_t(u)];
      u = successor[std::size_t(u)];
    }
  }
  return parent;
}

std::uint64_t tree_edge_signature(const SmallGraph& g, const std::vector<int>& parent) {
  std::map<std::pair<int, int>, int> edge_slot;
  for (const auto& [u, v] : g.edges) {
    const auto key = std::minmax(u, v);
    if (!edge_slot.contains({key.first, key.second})) {
      const int slot = int(edge_slot.size());
      edge_slot[{key.first, key.second}] = slot;
    }
  }
  if (edge_slot.size() >= 64) throw std::length_error("tree_edge_signature: too many edges");
  std::uint64_t mask = 0;
  for (int v = 0; v < int(parent.size()); ++v) {
    const int p = parent[std::size_t(v)];
    if (p < 0) continue;
    const auto key = std::minmax(v, p);
    mask |= 1ULL << edge_slot.at({key.first, key.second});
  }
  return mask;
}

}  // namespace ust
