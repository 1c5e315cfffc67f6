#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "plausets/rng.hpp"

using namespace plausets;

// Frozen from tests/oracles/rng_golden.py, an independent reimplementation.
TEST_CASE("rng: golden sequences") {
  Rng a(0, 0);
  CHECK(a.next() == 0x99ec5f36cb75f2b4ULL);
  CHECK(a.next() == 0xbf6e1f784956452aULL);
  CHECK(a.next() == 0x1a5f849d4933e6e0ULL);
  Rng b = derive_stream(42, 7);
  CHECK(b.next() == 0x36e0ad61b31bc888ULL);
  CHECK(b.next() == 0xd0d0ea9b1c0b2006ULL);
  CHECK(b.next() == 0x04aab6cd0f59e58fULL);
  CHECK(derive_stream(42, 7).substream(3).next() == 0x2e8f8dfcf2712c7bULL);
  Rng c(1, 2);
  CHECK(c.uniform() == 0.8572541104798357);
}

TEST_CASE("rng: same (seed, stream) reproduces the sequence") {
  Rng a = derive_stream(99, 5), b = derive_stream(99, 5);
  CHECK(a == b);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next() == b.next());
  }
  CHECK(a.normal() == b.normal());
  CHECK(a.exponential(2.0) == b.exponential(2.0));
  CHECK(derive_stream(3, 1).substream(9) == derive_stream(3, 1).substream(9));
}

TEST_CASE("rng: derive_stream is injective over 10^4 indices") {
  for (std::uint64_t seed : {0ULL, 1ULL, 0xDEADBEEFULL}) {
    std::unordered_set<std::uint64_t> first;
    for (std::uint64_t i = 0; i < 10000; ++i) first.insert(derive_stream(seed, i).state()[0]);
    CHECK(first.size() == 10000);
  }
  std::unordered_set<std::uint64_t> subs;
  const Rng parent = derive_stream(5, 5);
  for (std::uint64_t i = 0; i < 10000; ++i) subs.insert(parent.substream(i).state()[0]);
  CHECK(subs.size() == 10000);
}

TEST_CASE("rng: uniform moments and range") {
  Rng r = derive_stream(11, 0);
  const int N = 1000000;
  double sum = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < N; ++i) {
    const double u = r.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(std::fabs(sum / N - 0.5) < 0.002);
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("rng: exponential and normal moments") {
  Rng r = derive_stream(12, 0);
  const int N = 1000000;
  for (double m : {1.0, 3.5}) {
    double sum = 0.0;
    for (int i = 0; i < N; ++i) sum += r.exponential(m);
    CHECK(std::fabs(sum / N - m) < 3.0 * m / 1000.0);
  }
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(std::fabs(s1 / N) < 3.0 / 1000.0);
  CHECK(std::fabs(s2 / N - 1.0) < 3.0 * std::sqrt(2.0) / 1000.0);
}

TEST_CASE("rng: distinct streams are uncorrelated") {
  const int N = 100000;
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{7, 1000}}) {
    Rng a = derive_stream(2024, i), b = derive_stream(2024, j);
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int k = 0; k < N; ++k) {
      const double x = a.uniform(), y = b.uniform();
      sa += x, sb += y, saa += x * x, sbb += y * y, sab += x * y;
    }
    const double cov = sab / N - sa / N * sb / N;
    const double r = cov / std::sqrt((saa / N - sa * sa / N / N) * (sbb / N - sb * sb / N / N));
    CHECK(std::fabs(r) < 0.01);
  }
}
