#include "ust/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace ust {

std::array<LatticePoint, 6> neighbors(const LatticePoint& p) {
  std::array<LatticePoint, 6> out;
  for (int d = 0; d < 6; ++d) out[d] = step(p, d);
  return out;
}

bool LatticePath::is_adjacency_valid() const {
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (squared_distance(vertices[i - 1], vertices[i]) != 1) return false;
  }
  return true;
}

PointSet inner_boundary(const PointSet& a) {
  PointSet out;
  for (const LatticePoint& p : a) {
    for (const LatticePoint& q : neighbors(p)) {
      if (!a.contains(q)) {
        out.insert(p);
        break;
      }
    }
  }
  return out;
}

PointSet outer_boundary(const PointSet& a) {
  PointSet out;
  for (const LatticePoint& p : a) {
    for (const LatticePoint& q : neighbors(p)) {
      if (!a.contains(q)) out.insert(q);
    }
  }
  return out;
}

std::vector<LatticePoint> spiral_order(const Box& box) {
  std::vector<LatticePoint> pts;
  const std::int64_t r = box.radius;
  pts.reserve(std::size_t(box.norm == Norm::Linf
                              ? (2 * r + 1) * (2 * r + 1) * (2 * r + 1)
                              : (4 * r * r * r) / 3 + 6 * r * r + 8));
  for (std::int64_t dx = -r; dx <= r; ++dx) {
    for (std::int64_t dy = -r; dy <= r; ++dy) {
      for (std::int64_t dz = -r; dz <= r; ++dz) {
        LatticePoint p{box.center.x + std::int32_t(dx), box.center.y + std::int32_t(dy),
                       box.center.z + std::int32_t(dz)};
        if (box.contains(p)) pts.push_back(p);
      }
    }
  }
  std::sort(pts.begin(), pts.end(), [&](const LatticePoint& a, const LatticePoint& b) {
    std::int64_t da, db;
    if (box.norm == Norm::L2) {
      da = squared_distance(box.center, a);
      db = squared_distance(box.center, b);
    } else {
      da = linf_distance(box.center, a);
      db = linf_distance(box.center, b);
    }
    if (da != db) return da < db;
    return a < b;
  });
  return pts;
}

}  // namespace ust
