#pragma once

#include <cstdint>
#include <limits>

namespace gaussmatch {

/// Purpose tags keep the streams of one replicate disjoint.
enum class StreamPurpose : std::uint64_t {
  sample_x = 1,
  sample_y = 2,
  reference = 3,
  localize = 4,
  monte_carlo = 5,
  check = 6,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: draw i is splitmix64(key + i * golden). The output
/// depends only on the key, never on scheduling, so replicates can run on any
/// thread in any order.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : key_(key) {}

  static Stream derive(std::uint64_t master_seed, std::uint64_t n, std::uint64_t replicate, StreamPurpose purpose) {
    std::uint64_t k = splitmix64(master_seed);
    k = splitmix64(k ^ n);
    k = splitmix64(k ^ replicate);
    k = splitmix64(k ^ static_cast<std::uint64_t>(purpose));
    return Stream(k);
  }

  /// Independent child stream.
  Stream split(std::uint64_t tag) const { return Stream(splitmix64(key_ ^ splitmix64(tag + 0x632be59bd9b4e019ULL))); }

  std::uint64_t next_u64() { return splitmix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal by inverse CDF.
  double normal();

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gaussmatch
