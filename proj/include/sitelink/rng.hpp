#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sitelink {

// SplitMix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Collapses a tuple of words into a single stream key.
inline constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x5bf03635f0935ad1ull;
  for (std::uint64_t p : parts) h = mix64(h + 0x9E3779B97F4A7C15ull + p);
  return h;
}

// Counter-based generator: the t-th output is a pure function of (key, t).
// Streams keyed per work item therefore reproduce bit-identically under any
// scheduling or thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  // Unbiased integer in [0, n); Lemire's multiply-with-rejection.
  std::uint64_t next_below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Floyd's uniform sample of s distinct values from {0,...,k-1}, appended to
// `out` in draw order. `member` is caller-owned zeroed scratch of size >= k;
// it is returned zeroed again.
inline void sample_subset(CounterRng& rng, int k, int s, std::vector<int>& out,
                          std::vector<std::uint8_t>& member) {
  out.clear();
  for (int t = k - s; t < k; ++t) {
    const int r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(t) + 1));
    if (member[static_cast<std::size_t>(r)]) {
      member[static_cast<std::size_t>(t)] = 1;
      out.push_back(t);
    } else {
      member[static_cast<std::size_t>(r)] = 1;
      out.push_back(r);
    }
  }
  for (int v : out) member[static_cast<std::size_t>(v)] = 0;
}

}  // namespace sitelink
