#include "plausets/rng.hpp"

#include <bit>
#include <cmath>

#include "plausets/numerics.hpp"

namespace plausets {

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : master_seed_(master_seed), stream_index_(stream_index) {
  const std::uint64_t key = mix64(master_seed) ^ (stream_index * kGoldenGamma);
  for (std::uint64_t k = 0; k < 4; ++k) s_[k] = mix64(key + (k + 1) * kGoldenGamma);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return norm_quantile(uniform()); }

double Rng::exponential(double mean) { return -mean * std::log(uniform()); }

Rng Rng::substream(std::uint64_t index) const noexcept {
  return Rng(mix64(master_seed_ ^ mix64(stream_index_ + kGoldenGamma)), index);
}

}  // namespace plausets
