#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ust/detail/key_table.hpp"
#include "ust/lattice.hpp"
#include "ust/rng.hpp"
#include "ust/walk.hpp"

namespace ust {

// Parent encoding inside a sampled tree: 0..5 are step directions toward the
// parent, 6 marks an edge into the wired super-vertex at the container
// boundary.
inline constexpr int kParentSuper = 6;

struct TreeProvenance {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string mode = "wired";
  std::int64_t region_radius = 0;
  double container_factor = 0.0;
};

// A sampled spanning tree over a finite piece of Z^3, wired to a single
// super-vertex at the container boundary. Parent pointers lead toward the
// super-vertex root. Structure and degrees are guaranteed final (independent
// of any branches a larger run would add) for vertices within Euclidean
// distance valid_radius of the origin; degree queries further out on a
// region-restricted sample would see child counts that later branches could
// still raise.
class SpanningTree {
 public:
  SpanningTree() = default;
  SpanningTree(Box container, std::int64_t valid_radius, TreeProvenance provenance)
      : container_(container), valid_radius_(valid_radius), provenance_(provenance) {}

  bool contains(const LatticePoint& p) const { return table_.contains(pack_point(p)); }
  bool contains_key(PointKey k) const { return table_.contains(k); }

  // Parent code 0..5 (direction) or kParentSuper; throws if absent.
  int parent_code(const LatticePoint& p) const;

  // Parent vertex, or nullopt when the parent is the super-vertex.
  std::optional<LatticePoint> parent_of(const LatticePoint& p) const;

  // Number of tree edges at p, counting a super-edge if present.
  int degree(const LatticePoint& p) const;

  int child_count(const LatticePoint& p) const;

  std::size_t vertex_count() const { return table_.size(); }
  const Box& container() const { return container_; }
  std::int64_t valid_radius() const { return valid_radius_; }
  const TreeProvenance& provenance() const { return provenance_; }

  template <typename Fn>
  void for_each_vertex(Fn&& fn) const {  // fn(LatticePoint, parent_code)
    table_.for_each([&](PointKey k, const Slot& s) { fn(unpack_point(k), int(s.parent)); });
  }

  // Sampler-side mutation: add vertex with its parent code; the lattice
  // parent (if any) must already be present so its child count can bump.
  void add_vertex(PointKey key, int parent_code_value);
  // Deserialization path: insert without touching child counts, then rebuild
  // them in one pass once every vertex is present.
  void add_vertex_raw(PointKey key, int parent_code_value);
  void rebuild_child_counts();
  void reserve(std::size_t expected) { table_.reserve(expected); }

  bool same_structure(const SpanningTree& other) const;

 private:
  struct Slot {
    std::uint8_t parent = 0xFF;
    std::uint8_t children = 0;
  };

  detail::KeyTable<Slot> table_;
  Box container_;
  std::int64_t valid_radius_ = 0;
  TreeProvenance provenance_;
};

struct WilsonConfig {
  std::int64_t region_radius = 0;
  double container_factor = 4.0;
  enum class Boundary { Wired, InfinityApprox };
  enum class Order { Spiral, Lexicographic };
  Boundary boundary = Boundary::InfinityApprox;
  Order order = Order::Spiral;

  std::int64_t container_radius() const;
  void validate() const;
};

// First index i with path[i] in `targets`, or nullopt.
std::optional<std::size_t> hitting_time(const LatticePath& path, const PointSet& targets);

// Exact uniform spanning tree of the wired graph on `box`: box vertices plus
// one super-vertex standing for everything outside. Every vertex of the box
// is processed.
SpanningTree wilson_wired(const Box& box, RngStream& rng);

// Wilson's algorithm rooted at the wired container boundary, processing only
// the vertices of the region ball B(0, region_radius) (in the configured
// order, origin first). The loop-erased walk from the origin to the
// container boundary plays the role of the path to infinity; the returned
// tree is final within the region.
SpanningTree wilson_infinity_approx(const WilsonConfig& config, RngStream& rng,
                                    const std::vector<LatticePoint>* cached_order = nullptr);

void save_tree(const SpanningTree& tree, std::ostream& out);
SpanningTree load_tree(std::istream& in);
void save_tree_file(const SpanningTree& tree, const std::string& path);
SpanningTree load_tree_file(const std::string& path);

}  // namespace ust
