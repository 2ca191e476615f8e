#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ust/lattice.hpp"
#include "ust/wilson.hpp"

namespace ust {

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sentinel in adjacency rows for an edge into the absorbing layer.
inline constexpr std::int32_t kAbsorbingSlot = -1;

// A finite piece of a sampled tree with an explicit absorbing layer: the
// state space of walks killed on leaving the piece. Row i of the CSR
// adjacency has exactly degree(i) slots (full-tree degree), each either
// another member index or kAbsorbingSlot. Members are stored in BFS order
// from the source, so member 0 is the source and depth is nondecreasing.
struct BallGraph {
  std::vector<LatticePoint> members;
  std::vector<std::int32_t> depth;
  std::vector<std::int32_t> adj;
  std::vector<std::int32_t> offset;  // size members+1
  std::vector<LatticePoint> boundary;  // absorbing vertices, one per absorbing edge

  int source = 0;
  std::size_t size() const { return members.size(); }
  int degree(std::size_t i) const { return int(offset[i + 1] - offset[i]); }
  std::size_t edge_count() const { return adj.size(); }  // directed slots
};

struct IntrinsicBall {
  LatticePoint center;
  std::int64_t radius = 0;
  BallGraph graph;

  const std::vector<LatticePoint>& members() const { return graph.members; }
  const std::vector<LatticePoint>& exits() const { return graph.boundary; }
};

// Connected component of (tree restricted to the Euclidean ball B(0,r))
// containing the origin, with its absorbing attachment edges.
struct TreeComponent {
  std::int64_t radius = 0;
  std::int64_t intrinsic_radius = 0;  // max d_U(0, x) over the component
  BallGraph graph;
};

// Unique tree path from x to y (both endpoints included). Throws
// std::domain_error if either vertex is missing or the path would run
// through the wired super-vertex.
LatticePath tree_path(const SpanningTree& tree, const LatticePoint& x,
                      const LatticePoint& y);

std::int64_t tree_distance(const SpanningTree& tree, const LatticePoint& x,
                           const LatticePoint& y);

// Intrinsic ball B_U(center, r): members at tree distance <= r, absorbing
// layer at distance exactly r+1. Requires r+1 within the tree's valid
// region; throws TruncationError otherwise.
IntrinsicBall intrinsic_ball(const SpanningTree& tree, const LatticePoint& center,
                             std::int64_t r);

// U_r: component of the tree inside Euclidean B(0,r) containing the origin,
// absorbing at its tree-neighbors outside.
TreeComponent component_ur(const SpanningTree& tree, std::int64_t r);

}  // namespace ust
