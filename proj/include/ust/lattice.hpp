#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace ust {

// A vertex of the Z^3 lattice. Coordinates stay far below the 2^31 range
// used by the packed-key encoding, so plain int32 arithmetic never overflows.
struct LatticePoint {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline std::int64_t squared_distance(const LatticePoint& a, const LatticePoint& b) {
  const std::int64_t dx = a.x - b.x;
  const std::int64_t dy = a.y - b.y;
  const std::int64_t dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline std::int64_t linf_distance(const LatticePoint& a, const LatticePoint& b) {
  auto abs64 = [](std::int64_t v) { return v < 0 ? -v : v; };
  std::int64_t m = abs64(std::int64_t(a.x) - b.x);
  if (std::int64_t d = abs64(std::int64_t(a.y) - b.y); d > m) m = d;
  if (std::int64_t d = abs64(std::int64_t(a.z) - b.z); d > m) m = d;
  return m;
}

// Packed coordinate key: 21 bits per axis, biased by 2^20. Supports
// |coordinate| < 2^20, plenty for desk-scale containers. Key 0 is reserved
// as the empty-slot sentinel of open-addressing tables (it would correspond
// to the far corner (-2^20,...) which no valid configuration touches).
using PointKey = std::uint64_t;

inline constexpr std::int32_t kKeyBias = 1 << 20;

inline PointKey pack_point(const LatticePoint& p) {
  return (PointKey(std::uint32_t(p.x + kKeyBias)) << 42) |
         (PointKey(std::uint32_t(p.y + kKeyBias)) << 21) |
         PointKey(std::uint32_t(p.z + kKeyBias));
}

inline LatticePoint unpack_point(PointKey k) {
  return LatticePoint{std::int32_t((k >> 42) & 0x1FFFFF) - kKeyBias,
                      std::int32_t((k >> 21) & 0x1FFFFF) - kKeyBias,
                      std::int32_t(k & 0x1FFFFF) - kKeyBias};
}

struct PointHash {
  std::size_t operator()(const LatticePoint& p) const {
    std::uint64_t z = pack_point(p) + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return std::size_t(z ^ (z >> 31));
  }
};

using PointSet = std::unordered_set<LatticePoint, PointHash>;

// Direction encoding shared by the walk and tree modules:
// 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z.
inline constexpr std::array<std::array<std::int32_t, 3>, 6> kStepDelta = {{
    {{1, 0, 0}}, {{-1, 0, 0}}, {{0, 1, 0}}, {{0, -1, 0}}, {{0, 0, 1}}, {{0, 0, -1}},
}};

inline LatticePoint step(const LatticePoint& p, int dir) {
  return LatticePoint{p.x + kStepDelta[dir][0], p.y + kStepDelta[dir][1],
                      p.z + kStepDelta[dir][2]};
}

inline int opposite_dir(int dir) { return dir ^ 1; }

// The six unit neighbors of p, in the fixed order +x,-x,+y,-y,+z,-z.
std::array<LatticePoint, 6> neighbors(const LatticePoint& p);

// A nearest-neighbor path on Z^3. length() counts edges.
struct LatticePath {
  std::vector<LatticePoint> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  bool is_adjacency_valid() const;
};

enum class Norm { L2, Linf };

// Ball B(center, radius) in the selected norm. L2 matches the Euclidean
// balls used for regions of interest; Linf gives the cubic containers.
struct Box {
  LatticePoint center;
  std::int64_t radius = 0;
  Norm norm = Norm::L2;

  bool contains(const LatticePoint& p) const {
    if (norm == Norm::L2) return squared_distance(center, p) <= radius * radius;
    return linf_distance(center, p) <= radius;
  }
};

// {x in A : some unit neighbor of x lies outside A}
PointSet inner_boundary(const PointSet& a);

// {x not in A : some unit neighbor of x lies in A}
PointSet outer_boundary(const PointSet& a);

// All vertices of the box sorted by (distance from center, then
// lexicographic (x,y,z)). Deterministic; first element is the center.
std::vector<LatticePoint> spiral_order(const Box& box);

}  // namespace ust
