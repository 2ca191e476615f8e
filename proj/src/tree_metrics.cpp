#include "ust/tree_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ust/detail/key_table.hpp"

namespace ust {

namespace {

// Tree neighbors of u: its parent plus every lattice neighbor whose parent
// pointer aims back at u. Appends (neighbor, true) for lattice vertices and
// reports a super-edge through the out parameter.
void tree_neighbors(const SpanningTree& tree, const LatticePoint& u,
                    std::vector<LatticePoint>& out, bool& super_edge) {
  out.clear();
  super_edge = false;
  const int code = tree.parent_code(u);
  if (code == kParentSuper) {
    super_edge = true;
  } else {
    out.push_back(step(u, code));
  }
  for (int d = 0; d < 6; ++d) {
    const LatticePoint w = step(u, d);
    if (!tree.contains(w)) continue;
    const int wcode = tree.parent_code(w);
    if (wcode != kParentSuper && wcode == opposite_dir(d)) out.push_back(w);
  }
}

}  // namespace

LatticePath tree_path(const SpanningTree& tree, const LatticePoint& x,
                      const LatticePoint& y) {
  if (!tree.contains(x) || !tree.contains(y)) {
    throw std::domain_error("tree_path: vertex not in tree");
  }
  // Ancestor chain of x (to the super-vertex), then ascend from y to the
  // first common vertex.
  std::unordered_map<PointKey, std::size_t> position;
  std::vector<LatticePoint> chain_x;
  LatticePoint cur = x;
  while (true) {
    position.emplace(pack_point(cur), chain_x.size());
    chain_x.push_back(cur);
    const int code = tree.parent_code(cur);
    if (code == kParentSuper) break;
    cur = step(cur, code);
  }
  std::vector<LatticePoint> chain_y;
  cur = y;
  std::size_t meet;
  while (true) {
    auto it = position.find(pack_point(cur));
    if (it != position.end()) {
      meet = it->second;
      break;
    }
    chain_y.push_back(cur);
    const int code = tree.parent_code(cur);
    if (code == kParentSuper) {
      throw std::domain_error("tree_path: path crosses the wired boundary");
    }
    cur = step(cur, code);
  }
  LatticePath path;
  path.vertices.assign(chain_x.begin(), chain_x.begin() + std::ptrdiff_t(meet) + 1);
  for (auto it = chain_y.rbegin(); it != chain_y.rend(); ++it) {
    path.vertices.push_back(*it);
  }
  return path;
}

std::int64_t tree_distance(const SpanningTree& tree, const LatticePoint& x,
                           const LatticePoint& y) {
  return std::int64_t(tree_path(tree, x, y).length());
}

namespace {

struct BfsItem {
  LatticePoint point;
  std::int32_t depth;
};

// Shared BFS core for intrinsic balls and U_r components. `expand` decides
// whether a vertex at the given depth joins the interior; vertices that do
// not join become absorbing boundary.
template <typename ExpandFn>
BallGraph explore(const SpanningTree& tree, const LatticePoint& source,
                  ExpandFn&& expand, const char* what) {
  if (!tree.contains(source)) {
    throw std::domain_error(std::string(what) + ": source not in tree");
  }
  const std::int64_t valid2 = tree.valid_radius() * tree.valid_radius();

  BallGraph g;
  detail::KeyTable<std::int32_t> index(1 << 10);
  std::vector<BfsItem> queue;
  queue.push_back({source, 0});
  index[pack_point(source)] = 0;
  g.members.push_back(source);
  g.depth.push_back(0);

  std::vector<LatticePoint> nbrs;
  bool super_edge = false;

  for (std::size_t head = 0; head < queue.size(); ++head) {
    const BfsItem item = queue[head];
    tree_neighbors(tree, item.point, nbrs, super_edge);
    if (super_edge) {
      throw TruncationError(std::string(what) + ": reached the wired boundary; container too small");
    }
    for (const LatticePoint& w : nbrs) {
      if (squared_distance(LatticePoint{}, w) > valid2) {
        throw TruncationError(std::string(what) +
                              ": region touches unfinalized structure; container too small");
      }
      const PointKey wk = pack_point(w);
      if (index.find(wk) != nullptr) continue;
      if (!expand(w, item.depth + 1)) continue;
      index[wk] = std::int32_t(g.members.size());
      g.members.push_back(w);
      g.depth.push_back(item.depth + 1);
      queue.push_back({w, item.depth + 1});
    }
  }

  // Second pass: adjacency rows with absorbing slots for edges that left
  // the interior.
  g.offset.assign(g.size() + 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.offset[i + 1] = g.offset[i] + std::int32_t(tree.degree(g.members[i]));
  }
  g.adj.assign(std::size_t(g.offset.back()), kAbsorbingSlot);
  std::vector<std::int32_t> fill(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    tree_neighbors(tree, g.members[i], nbrs, super_edge);
    std::int32_t row = g.offset[i];
    for (const LatticePoint& w : nbrs) {
      const std::int32_t* slot = index.find(pack_point(w));
      const std::int32_t entry = slot ? *slot : kAbsorbingSlot;
      g.adj[std::size_t(row + fill[i])] = entry;
      ++fill[i];
      if (entry == kAbsorbingSlot) g.boundary.push_back(w);
    }
    if (fill[i] != g.offset[i + 1] - g.offset[i]) {
      throw std::logic_error(std::string(what) + ": degree mismatch against tree metadata");
    }
  }
  g.source = 0;
  return g;
}

}  // namespace

IntrinsicBall intrinsic_ball(const SpanningTree& tree, const LatticePoint& center,
                             std::int64_t r) {
  if (r < 0) throw std::domain_error("intrinsic_ball: negative radius");
  const std::int64_t reach = std::int64_t(std::lround(
      std::sqrt(double(squared_distance(LatticePoint{}, center))))) + r + 1;
  if (reach > tree.valid_radius()) {
    throw TruncationError("intrinsic_ball: r+1 exceeds the tree's valid region");
  }
  IntrinsicBall ball;
  ball.center = center;
  ball.radius = r;
  ball.graph = explore(
      tree, center, [&](const LatticePoint&, std::int32_t depth) { return depth <= r; },
      "intrinsic_ball");
  return ball;
}

TreeComponent component_ur(const SpanningTree& tree, std::int64_t r) {
  if (r < 0) throw std::domain_error("component_ur: negative radius");
  if (r + 1 > tree.valid_radius()) {
    throw TruncationError("component_ur: r+1 exceeds the tree's valid region");
  }
  TreeComponent comp;
  comp.radius = r;
  const std::int64_t r2 = r * r;
  comp.graph = explore(
      tree, LatticePoint{},
      [&](const LatticePoint& w, std::int32_t) {
        return squared_distance(LatticePoint{}, w) <= r2;
      },
      "component_ur");
  comp.intrinsic_radius = 0;
  for (std::int32_t d : comp.graph.depth) {
    comp.intrinsic_radius = std::max<std::int64_t>(comp.intrinsic_radius, d);
  }
  return comp;
}

}  // namespace ust
