#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qrf {

// splitmix64 step (Steele/Lea/Flood).  Used to whiten seeds and to derive
// independent per-index substream seeds so that work items can be computed
// in any order (or in parallel) and still see exactly the same random draws.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for substream `index` of the stream identified by `master_seed`.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  (void)splitmix64(s);     // decouple from the raw master seed
  s ^= 0xa0761d6478bd642fULL * (index + 1);
  return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  std::uint64_t s = seed;
  return std::mt19937_64(splitmix64(s));
}

// Unbiased integer in [0, bound) by rejection on the top of the 64-bit range.
inline std::uint64_t bounded_uniform(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = eng();
  } while (v >= limit);
  return v % bound;
}

// Seeded Fisher-Yates permutation of 0..n-1.
inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  auto eng = make_engine(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(bounded_uniform(eng, static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace qrf
