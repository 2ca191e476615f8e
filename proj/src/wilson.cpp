#include "ust/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ust {

namespace {

constexpr std::uint8_t kNoParent = 0xFF;

const char* parent_code_label(int code) {
  static const char* labels[7] = {"+x", "-x", "+y", "-y", "+z", "-z", "W"};
  return labels[code];
}

int parse_parent_code(const std::string& s) {
  for (int c = 0; c < 7; ++c) {
    if (s == parent_code_label(c)) return c;
  }
  throw std::runtime_error("tree file: bad parent code '" + s + "'");
}

}  // namespace

int SpanningTree::parent_code(const LatticePoint& p) const {
  const Slot* slot = table_.find(pack_point(p));
  if (slot == nullptr || slot->parent == kNoParent) {
    throw std::domain_error("SpanningTree: vertex not in tree");
  }
  return int(slot->parent);
}

std::optional<LatticePoint> SpanningTree::parent_of(const LatticePoint& p) const {
  const int code = parent_code(p);
  if (code == kParentSuper) return std::nullopt;
  return step(p, code);
}

int SpanningTree::degree(const LatticePoint& p) const {
  const Slot* slot = table_.find(pack_point(p));
  if (slot == nullptr) throw std::domain_error("SpanningTree: vertex not in tree");
  return int(slot->children) + 1;  // every stored vertex has a parent edge
}

int SpanningTree::child_count(const LatticePoint& p) const {
  const Slot* slot = table_.find(pack_point(p));
  if (slot == nullptr) throw std::domain_error("SpanningTree: vertex not in tree");
  return int(slot->children);
}

void SpanningTree::add_vertex(PointKey key, int parent_code_value) {
  Slot& slot = table_[key];
  slot.parent = std::uint8_t(parent_code_value);
  if (parent_code_value != kParentSuper) {
    const LatticePoint parent = step(unpack_point(key), parent_code_value);
    Slot* ps = table_.find(pack_point(parent));
    if (ps == nullptr) throw std::logic_error("add_vertex: parent missing");
    ps->children = std::uint8_t(ps->children + 1);
  }
}

void SpanningTree::add_vertex_raw(PointKey key, int parent_code_value) {
  Slot& slot = table_[key];
  slot.parent = std::uint8_t(parent_code_value);
}

void SpanningTree::rebuild_child_counts() {
  std::vector<PointKey> keys;
  keys.reserve(table_.size());
  table_.for_each([&](PointKey k, const Slot&) { keys.push_back(k); });
  for (PointKey k : keys) {
    const Slot* s = table_.find(k);
    if (s->parent == kParentSuper) continue;
    const LatticePoint parent = step(unpack_point(k), int(s->parent));
    Slot* ps = table_.find(pack_point(parent));
    if (ps == nullptr) throw std::runtime_error("tree file: orphaned vertex");
    ps->children = std::uint8_t(ps->children + 1);
  }
}

bool SpanningTree::same_structure(const SpanningTree& other) const {
  if (vertex_count() != other.vertex_count()) return false;
  bool equal = true;
  table_.for_each([&](PointKey k, const Slot& s) {
    if (!equal) return;
    const Slot* o = other.table_.find(k);
    if (o == nullptr || o->parent != s.parent) equal = false;
  });
  return equal;
}

std::int64_t WilsonConfig::container_radius() const {
  return std::int64_t(std::ceil(container_factor * double(region_radius)));
}

void WilsonConfig::validate() const {
  if (region_radius < 1) throw InvalidConfig("WilsonConfig: region_radius must be >= 1");
  if (container_factor * double(region_radius) < double(region_radius) + 2.0) {
    throw InvalidConfig("WilsonConfig: container too small (factor*radius < radius+2)");
  }
  if (container_radius() >= kKeyBias - 2) {
    throw InvalidConfig("WilsonConfig: container exceeds coordinate range");
  }
}

std::optional<std::size_t> hitting_time(const LatticePath& path, const PointSet& targets) {
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    if (targets.contains(path.vertices[i])) return i;
  }
  return std::nullopt;
}

namespace {

struct SuccessorEntry {
  std::uint32_t stamp = 0;
  std::uint8_t dir = 0;
};

// Cache-friendly working state for the sampling walks. Membership tests and
// successor records run millions of times per tree, so the inner cube around
// the origin (where almost all steps land) is backed by flat arrays: a
// one-bit membership mask plus dense last-exit direction/stamp slots. The
// rare positions outside the cube fall back to hash tables.
struct WalkScratch {
  explicit WalkScratch(std::int64_t dense_bound)
      : bound(dense_bound),
        stride(2 * dense_bound + 1),
        member_bits(std::size_t((stride * stride * stride + 63) / 64), 0),
        succ_dir(std::size_t(stride * stride * stride), 0),
        succ_stamp(std::size_t(stride * stride * stride), 0) {}

  bool in_cube(const LatticePoint& p) const {
    return p.x >= -bound && p.x <= bound && p.y >= -bound && p.y <= bound &&
           p.z >= -bound && p.z <= bound;
  }

  std::size_t cell(const LatticePoint& p) const {
    return std::size_t((std::int64_t(p.x) + bound) * stride * stride +
                       (std::int64_t(p.y) + bound) * stride +
                       (std::int64_t(p.z) + bound));
  }

  bool is_member(const LatticePoint& p, PointKey key) {
    if (in_cube(p)) {
      const std::size_t c = cell(p);
      return (member_bits[c >> 6] >> (c & 63)) & 1;
    }
    return outside_members.find(key) != nullptr;
  }

  void mark_member(const LatticePoint& p, PointKey key) {
    if (in_cube(p)) {
      const std::size_t c = cell(p);
      member_bits[c >> 6] |= 1ULL << (c & 63);
    } else {
      outside_members[key] = 1;
    }
  }

  void record_successor(const LatticePoint& p, PointKey key, int dir,
                        std::uint32_t stamp) {
    if (in_cube(p)) {
      const std::size_t c = cell(p);
      succ_dir[c] = std::uint8_t(dir);
      succ_stamp[c] = stamp;
    } else {
      SuccessorEntry& e = outside_succ[key];
      e.stamp = stamp;
      e.dir = std::uint8_t(dir);
    }
  }

  int successor(const LatticePoint& p, PointKey key, std::uint32_t stamp) {
    if (in_cube(p)) {
      const std::size_t c = cell(p);
      return succ_stamp[c] == stamp ? int(succ_dir[c]) : -1;
    }
    const SuccessorEntry* e = outside_succ.find(key);
    return (e != nullptr && e->stamp == stamp) ? int(e->dir) : -1;
  }

  std::int64_t bound;
  std::int64_t stride;
  std::vector<std::uint64_t> member_bits;
  std::vector<std::uint8_t> succ_dir;
  std::vector<std::uint32_t> succ_stamp;
  detail::KeyTable<char> outside_members{1 << 12};
  detail::KeyTable<SuccessorEntry> outside_succ{1 << 12};
};

// Wilson's algorithm with a wired root: walks are absorbed on stepping out
// of the container, successor overwrites perform the loop erasure, and the
// surviving path is retraced into the tree. Every vertex of `order` that is
// not yet covered starts one branch.
SpanningTree run_wilson(const std::vector<LatticePoint>& order, const Box& container,
                        std::int64_t region_bound, std::int64_t valid_radius,
                        TreeProvenance provenance, RngStream& rng) {
  SpanningTree tree(container, valid_radius, provenance);
  tree.reserve(order.size() + order.size() / 4 + 64);

  // Dense structures cover the region (or as much of it as stays affordable).
  constexpr std::int64_t kDenseBoundCap = 110;
  WalkScratch scratch(std::min(region_bound, kDenseBoundCap));
  std::uint32_t stamp = 0;

  struct BranchStep {
    PointKey key;
    std::uint8_t dir;
  };
  std::vector<BranchStep> branch;
  branch.reserve(1 << 12);

  for (const LatticePoint& start : order) {
    const PointKey start_key = pack_point(start);
    if (scratch.is_member(start, start_key)) continue;

    ++stamp;
    if (stamp == 0 ||
        scratch.outside_succ.size() * 5 > scratch.outside_succ.capacity() * 3) {
      scratch.outside_succ.clear();
      if (stamp == 0) {
        std::fill(scratch.succ_stamp.begin(), scratch.succ_stamp.end(), 0);
        stamp = 1;
      }
    }

    LatticePoint cur = start;
    PointKey cur_key = start_key;
    while (true) {
      const int dir = rng.uniform_dir();
      scratch.record_successor(cur, cur_key, dir, stamp);
      const LatticePoint nxt = step(cur, dir);
      if (!container.contains(nxt)) break;
      const PointKey nxt_key = pack_point(nxt);
      if (scratch.is_member(nxt, nxt_key)) break;
      cur = nxt;
      cur_key = nxt_key;
    }

    // Collect the loop-erased branch (last-exit directions from start).
    branch.clear();
    LatticePoint u = start;
    PointKey u_key = start_key;
    while (true) {
      const int dir = scratch.successor(u, u_key, stamp);
      if (dir < 0) throw std::logic_error("wilson: broken successor chain");
      branch.push_back({u_key, std::uint8_t(dir)});
      const LatticePoint w = step(u, dir);
      if (!container.contains(w)) break;
      const PointKey w_key = pack_point(w);
      if (scratch.is_member(w, w_key)) break;
      u = w;
      u_key = w_key;
    }

    // Attach far end first so every lattice parent already exists.
    for (auto it = branch.rbegin(); it != branch.rend(); ++it) {
      const LatticePoint from = unpack_point(it->key);
      const LatticePoint to = step(from, it->dir);
      if (!container.contains(to)) {
        tree.add_vertex(it->key, kParentSuper);
      } else {
        tree.add_vertex(it->key, int(it->dir));
      }
      scratch.mark_member(from, it->key);
    }
  }
  return tree;
}

}  // namespace

SpanningTree wilson_wired(const Box& box, RngStream& rng) {
  if (std::abs(std::int64_t(box.center.x)) + box.radius >= kKeyBias - 2 ||
      std::abs(std::int64_t(box.center.y)) + box.radius >= kKeyBias - 2 ||
      std::abs(std::int64_t(box.center.z)) + box.radius >= kKeyBias - 2) {
    throw InvalidConfig("wilson_wired: box exceeds coordinate range");
  }
  TreeProvenance prov;
  prov.seed = rng.seed();
  prov.stream = rng.stream_index();
  prov.mode = "wired";
  prov.region_radius = box.radius;
  prov.container_factor = 1.0;
  const std::vector<LatticePoint> order = spiral_order(box);
  return run_wilson(order, box, box.radius, box.radius, prov, rng);
}

SpanningTree wilson_infinity_approx(const WilsonConfig& config, RngStream& rng,
                                    const std::vector<LatticePoint>* cached_order) {
  config.validate();
  const Box region{LatticePoint{}, config.region_radius, Norm::L2};
  const Box container{LatticePoint{}, config.container_radius(), Norm::Linf};
  TreeProvenance prov;
  prov.seed = rng.seed();
  prov.stream = rng.stream_index();
  prov.mode = "infinity-approx";
  prov.region_radius = config.region_radius;
  prov.container_factor = config.container_factor;

  std::vector<LatticePoint> local_order;
  const std::vector<LatticePoint>* order = cached_order;
  if (order == nullptr) {
    local_order = spiral_order(region);
    if (config.order == WilsonConfig::Order::Lexicographic) {
      std::sort(local_order.begin(), local_order.end());
    }
    order = &local_order;
  }
  return run_wilson(*order, container, config.region_radius, config.region_radius, prov,
                    rng);
}

void save_tree(const SpanningTree& tree, std::ostream& out) {
  const TreeProvenance& prov = tree.provenance();
  out << "ustsim-tree v1\n";
  out << "seed " << prov.seed << "\n";
  out << "stream " << prov.stream << "\n";
  out << "mode " << prov.mode << "\n";
  out << "region_radius " << prov.region_radius << "\n";
  char factor[64];
  std::snprintf(factor, sizeof factor, "%.17g", prov.container_factor);
  out << "container_factor " << factor << "\n";
  out << "container_norm " << (tree.container().norm == Norm::L2 ? "l2" : "linf") << "\n";
  out << "container_radius " << tree.container().radius << "\n";
  out << "valid_radius " << tree.valid_radius() << "\n";
  out << "vertex_count " << tree.vertex_count() << "\n";

  std::vector<std::pair<PointKey, int>> rows;
  rows.reserve(tree.vertex_count());
  tree.for_each_vertex([&](const LatticePoint& p, int code) {
    rows.emplace_back(pack_point(p), code);
  });
  std::sort(rows.begin(), rows.end());
  for (const auto& [key, code] : rows) {
    const LatticePoint p = unpack_point(key);
    out << p.x << ' ' << p.y << ' ' << p.z << ' ' << parent_code_label(code) << '\n';
  }
}

SpanningTree load_tree(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "ustsim-tree v1") {
    throw std::runtime_error("tree file: bad magic line");
  }
  TreeProvenance prov;
  Box container;
  std::int64_t valid_radius = 0;
  std::size_t vertex_count = 0;
  std::string norm_label = "linf";
  for (int i = 0; i < 8; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("tree file: truncated header");
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "seed") ls >> prov.seed;
    else if (key == "stream") ls >> prov.stream;
    else if (key == "mode") ls >> prov.mode;
    else if (key == "region_radius") ls >> prov.region_radius;
    else if (key == "container_factor") ls >> prov.container_factor;
    else if (key == "container_norm") ls >> norm_label;
    else if (key == "container_radius") ls >> container.radius;
    else if (key == "valid_radius") ls >> valid_radius;
    else throw std::runtime_error("tree file: unexpected header key '" + key + "'");
  }
  container.norm = norm_label == "l2" ? Norm::L2 : Norm::Linf;
  if (!std::getline(in, line)) throw std::runtime_error("tree file: truncated header");
  {
    std::istringstream ls(line);
    std::string key;
    ls >> key >> vertex_count;
    if (key != "vertex_count") throw std::runtime_error("tree file: missing vertex_count");
  }

  SpanningTree tree(container, valid_radius, prov);
  tree.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("tree file: truncated body");
    std::istringstream ls(line);
    LatticePoint p;
    std::string code;
    ls >> p.x >> p.y >> p.z >> code;
    if (!ls) throw std::runtime_error("tree file: bad vertex line");
    tree.add_vertex_raw(pack_point(p), parse_parent_code(code));
  }
  tree.rebuild_child_counts();
  return tree;
}

void save_tree_file(const SpanningTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_tree(tree, out);
}

SpanningTree load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_tree(in);
}

}  // namespace ust
