#pragma once

#include <array>
#include <cstdint>

namespace plausets {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seeded xoshiro256** generator with explicit (master_seed, stream_index) provenance.
///
/// Streams are derived as follows (these constants are part of the output
/// contract; changing them changes every golden file):
///
///   key    = mix64(master_seed) ^ (stream_index * kGoldenGamma)
///   s[k]   = mix64(key + (k + 1) * kGoldenGamma),  k = 0..3
///
/// Multiplication by an odd constant and xor with a fixed word are bijections,
/// and s[0] is a bijection of key, so s[0] alone is injective in stream_index
/// for a fixed master seed.
///
/// Draws:
///   next()        xoshiro256** output
///   uniform()     ((next() >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
///   normal()      norm_quantile(uniform())
///   exponential() -mean * log(uniform())
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  double uniform() noexcept;
  double normal();
  double exponential(double mean = 1.0);

  /// Child stream keyed by this stream's provenance, not its current position:
  /// derive_stream(mix64(master_seed ^ mix64(stream_index + kGoldenGamma)), index).
  Rng substream(std::uint64_t index) const noexcept;

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
};

inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return Rng(master_seed, index);
}

}  // namespace plausets
