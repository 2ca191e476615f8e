#pragma once

#include <cstdint>
#include <vector>

#include "ust/rng.hpp"

namespace ust {

// Explicit finite graph for unit tests, validation oracles and the generic
// electrical solver. Vertices are 0..n-1; parallel edges are allowed.
struct SmallGraph {
  explicit SmallGraph(int n = 0) : adjacency(std::size_t(n)) {}

  int vertex_count() const { return int(adjacency.size()); }

  void add_edge(int u, int v) {
    adjacency[std::size_t(u)].push_back(v);
    adjacency[std::size_t(v)].push_back(u);
    edges.push_back({u, v});
  }

  std::vector<std::vector<int>> adjacency;
  std::vector<std::pair<int, int>> edges;
};

SmallGraph cycle_graph(int n);
SmallGraph complete_graph(int n);
SmallGraph path_graph(int n);

bool is_connected(const SmallGraph& g);

// Number of spanning trees by the matrix-tree theorem: any cofactor of the
// graph Laplacian, in exact integer arithmetic. Returns 0 for disconnected
// graphs. Intended for graphs of at most ~12 vertices.
std::uint64_t spanning_tree_count(const SmallGraph& g);

// Wilson's algorithm on a finite connected graph: parent pointers toward
// `root` (parent[root] = -1). Produces an exactly uniform spanning tree.
std::vector<int> wilson_tree(const SmallGraph& g, int root, RngStream& rng);

// Canonical identifier of a spanning tree given by parent pointers: sorted
// edge list encoded as a bitmask over the graph's (deduplicated) edge slots.
// Requires fewer than 64 distinct edges.
std::uint64_t tree_edge_signature(const SmallGraph& g, const std::vector<int>& parent);

}  // namespace ust
