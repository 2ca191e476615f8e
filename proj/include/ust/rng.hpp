#pragma once

#include <cstdint>

namespace ust {

// Splittable counter-based generator (SplitMix64 family). A stream is keyed
// by (seed, stream_index); the key fully determines the sequence on every
// platform, which keeps parallel sampling order-independent: worker layout
// can change, results cannot. Each stream walks its own Weyl sequence with a
// per-stream odd increment, so distinct streams are distinct full-period
// sequences rather than offsets into a shared one.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {
    state_ = mix64(seed + 0x9E3779B97F4A7C15ULL + mix64(stream_index));
    gamma_ = mix64(seed ^ mix64(stream_index + 0x632BE59BD9B4E019ULL)) | 1ULL;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix64(state_);
  }

  // Unbiased integer in [0, n) via Lemire's multiply-shift with rejection.
  std::uint32_t uniform_below(std::uint32_t n) {
    std::uint64_t m = std::uint64_t(std::uint32_t(next_u64() >> 32)) * n;
    std::uint32_t lo = std::uint32_t(m);
    if (lo < n) {
      const std::uint32_t threshold = std::uint32_t(-n) % n;
      while (lo < threshold) {
        m = std::uint64_t(std::uint32_t(next_u64() >> 32)) * n;
        lo = std::uint32_t(m);
      }
    }
    return std::uint32_t(m >> 32);
  }

  int uniform_dir() { return int(uniform_below(6)); }

  double next_unit() {  // [0,1) with 53 random bits
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  // Deterministically derived independent stream. Derivation uses only the
  // (seed, stream_index) key, never the consumed state, so child identities
  // do not depend on how much the parent has been used.
  RngStream child(std::uint64_t tag) const {
    return RngStream(seed_, mix64(stream_ + 0x9E3779B97F4A7C15ULL * (tag + 1)));
  }

  RngStream child2(std::uint64_t a, std::uint64_t b) const { return child(a).child(b); }

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace ust
