#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>

namespace sitelink {

// C(n, r), or nullopt as soon as the running value exceeds `cap`.
inline std::optional<std::uint64_t> binomial_capped(std::int64_t n, std::int64_t r,
                                                    std::uint64_t cap) {
  if (n < 0 || r < 0 || r > n) return std::uint64_t{0};
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (std::int64_t t = 1; t <= r; ++t) {
    // After step t the value is C(n-r+t, t), so the division is exact.
    c = c * static_cast<unsigned __int128>(n - r + t) / static_cast<unsigned __int128>(t);
    if (c > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(c);
}

// Advances a strictly increasing r-subset of {0,...,n-1} to its
// colexicographic successor; returns false after the last subset.
// The first subset is {0,1,...,r-1}.
inline bool next_combination_colex(std::span<int> comb, int n) {
  const int r = static_cast<int>(comb.size());
  for (int t = 0; t < r; ++t) {
    const int limit = (t + 1 < r) ? comb[t + 1] : n;
    if (comb[t] + 1 < limit) {
      ++comb[t];
      for (int u = 0; u < t; ++u) comb[u] = u;
      return true;
    }
  }
  return false;
}

}  // namespace sitelink
