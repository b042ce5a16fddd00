#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <sitelink/sitelink.hpp>

namespace testutil {

inline constexpr char kSymbols[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

inline sitelink::Alphabet test_alphabet(int a) {
  return sitelink::Alphabet(std::string(kSymbols, static_cast<std::size_t>(a)));
}

// Mutable cell grid for building test systems.
struct Grid {
  int k = 0;
  int n = 0;
  int a = 2;
  std::vector<std::uint8_t> cells;  // row-major

  Grid(int k_, int n_, int a_) : k(k_), n(n_), a(a_), cells(static_cast<std::size_t>(k_) * n_, 0) {}

  std::uint8_t& at(int r, int c) { return cells[static_cast<std::size_t>(r) * n + c]; }
  std::uint8_t at(int r, int c) const { return cells[static_cast<std::size_t>(r) * n + c]; }

  sitelink::System build() const {
    std::vector<int> labels(static_cast<std::size_t>(k));
    std::iota(labels.begin(), labels.end(), 1);
    return sitelink::System(n, test_alphabet(a), cells, labels);
  }
};

inline sitelink::System system_from_columns(const std::vector<std::vector<std::uint8_t>>& cols,
                                            int a) {
  Grid g(static_cast<int>(cols.front().size()), static_cast<int>(cols.size()), a);
  for (int c = 0; c < g.n; ++c) {
    for (int r = 0; r < g.k; ++r) g.at(r, c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  }
  return g.build();
}

inline Grid random_grid(sitelink::CounterRng& rng, int k, int n, int a) {
  Grid g(k, n, a);
  for (auto& c : g.cells) c = static_cast<std::uint8_t>(rng.next_below(static_cast<std::uint64_t>(a)));
  return g;
}

inline std::vector<std::uint8_t> random_permutation(sitelink::CounterRng& rng, int a) {
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(a));
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  for (int t = a - 1; t > 0; --t) {
    const auto r = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(t) + 1));
    std::swap(perm[static_cast<std::size_t>(t)], perm[r]);
  }
  return perm;
}

// Sets column j to a bijective image of column i on rows [row0, row1).
inline void plant_bijection(Grid& g, int i, int j, const std::vector<std::uint8_t>& perm,
                            int row0 = 0, int row1 = -1) {
  if (row1 < 0) row1 = g.k;
  for (int r = row0; r < row1; ++r) g.at(r, j) = perm[g.at(r, i)];
}

}  // namespace testutil
