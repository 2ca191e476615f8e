#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "ust/lattice.hpp"
#include "ust/rng.hpp"

namespace ust::detail {

// Open-addressing hash table keyed by packed lattice points (key 0 reserved
// as the empty sentinel). Linear probing, power-of-two capacity, insert-only.
// This sits on the hot path of the tree sampler; keys and values live in
// separate flat arrays to keep probes cache-friendly.
template <typename V>
class KeyTable {
 public:
  explicit KeyTable(std::size_t expected = 16) { rehash(capacity_for(expected)); }

  void reserve(std::size_t expected) {
    const std::size_t cap = capacity_for(expected);
    if (cap > keys_.size()) rehash(cap);
  }

  void clear() {
    std::memset(keys_.data(), 0, keys_.size() * sizeof(PointKey));
    size_ = 0;
  }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return keys_.size(); }

  V* find(PointKey key) {
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) return &vals_[i];
      if (keys_[i] == 0) return nullptr;
      i = (i + 1) & mask_;
    }
  }

  const V* find(PointKey key) const { return const_cast<KeyTable*>(this)->find(key); }

  bool contains(PointKey key) const { return find(key) != nullptr; }

  // Returns the value slot for `key`, inserting a default if absent.
  V& operator[](PointKey key) {
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) return vals_[i];
      if (keys_[i] == 0) {
        if (size_ + 1 > (keys_.size() * 3) / 5) {
          rehash(keys_.size() * 2);
          i = slot(key);
          while (keys_[i] != 0 && keys_[i] != key) i = (i + 1) & mask_;
          if (keys_[i] == key) return vals_[i];
        }
        keys_[i] = key;
        vals_[i] = V{};
        ++size_;
        return vals_[i];
      }
      i = (i + 1) & mask_;
    }
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != 0) fn(keys_[i], vals_[i]);
    }
  }

 private:
  static std::size_t capacity_for(std::size_t expected) {
    std::size_t cap = 16;
    while (cap * 3 < expected * 5) cap <<= 1;  // target load factor <= 0.6
    return cap;
  }

  std::size_t slot(PointKey key) const { return RngStream::mix64(key) & mask_; }

  void rehash(std::size_t new_cap) {
    std::vector<PointKey> old_keys = std::move(keys_);
    std::vector<V> old_vals = std::move(vals_);
    keys_.assign(new_cap, 0);
    vals_.assign(new_cap, V{});
    mask_ = new_cap - 1;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == 0) continue;
      std::size_t j = slot(old_keys[i]);
      while (keys_[j] != 0) j = (j + 1) & mask_;
      keys_[j] = old_keys[i];
      vals_[j] = old_vals[i];
    }
  }

  std::vector<PointKey> keys_;
  std::vector<V> vals_;
  std::size_t mask_ = 15;
  std::size_t size_ = 0;
};

}  // namespace ust::detail
