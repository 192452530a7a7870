#pragma once

#include <cstdint>

namespace spinest {

// Counter-based splittable RNG. A stream is a value type; substreams are
// derived from a master seed and an index, never by sharing state. The
// same (seed, index) pair always yields the same sequence, independent of
// thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  return z ^ (z >> 33);
}
}  // namespace detail

// Collision-free per-index substream derivation from a master seed.
inline RngStream derive_substream(std::uint64_t master_seed,
                                  std::uint64_t index) {
  std::uint64_t s = detail::mix64(master_seed) ^
                    detail::mix64(index * 0xD6E8FEB86659FD93ULL + 1);
  return RngStream(detail::mix64(s));
}

}  // namespace spinest
