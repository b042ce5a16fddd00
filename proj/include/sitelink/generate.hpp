#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "system.hpp"

namespace sitelink {

// One planted link inside a block: on the block's rows, column j is set to
// the bijective image of column i, then each row's j-symbol is resampled
// uniformly with probability noise_rate.
struct PlantedLink {
  int i = 0;                            // 0-based site
  int j = 0;                            // 0-based site, distinct from i
  std::vector<std::uint8_t> bijection;  // code permutation: image[code]
  double noise_rate = 0.0;
};

struct BlockSpec {
  int row_count = 0;
  std::vector<PlantedLink> links;
};

// Deterministic synthetic system: i.i.d. uniform background cells, then the
// planted links applied block by block in declaration order.
struct SyntheticSpec {
  int rows = 0;
  int cols = 0;
  Alphabet alphabet;
  std::uint64_t seed = 0;
  std::vector<BlockSpec> blocks;
};

inline void validate(const SyntheticSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw config_error("synthetic spec requires at least one row and one column");
  }
  const int a = spec.alphabet.size();
  int row_sum = 0;
  for (const auto& block : spec.blocks) {
    if (block.row_count < 0) throw config_error("block row counts must be non-negative");
    row_sum += block.row_count;
    for (const auto& link : block.links) {
      if (link.i < 0 || link.i >= spec.cols || link.j < 0 || link.j >= spec.cols) {
        throw config_error("planted link site index out of range");
      }
      if (link.i == link.j) throw config_error("planted link requires two distinct sites");
      if (!(link.noise_rate >= 0.0 && link.noise_rate <= 1.0)) {
        throw config_error("planted link noise rate must lie in [0, 1]");
      }
      if (static_cast<int>(link.bijection.size()) != a) {
        throw config_error("planted bijection must cover the whole alphabet");
      }
      std::vector<std::uint8_t> seen(static_cast<std::size_t>(a), 0);
      for (std::uint8_t img : link.bijection) {
        if (img >= a || seen[img]) throw config_error("planted bijection is not a permutation");
        seen[img] = 1;
      }
    }
  }
  if (row_sum != spec.rows) {
    throw config_error("block row counts sum to " + std::to_string(row_sum) + ", expected " +
                       std::to_string(spec.rows));
  }
}

inline System generate(const SyntheticSpec& spec) {
  validate(spec);
  const int a = spec.alphabet.size();
  const auto n = static_cast<std::size_t>(spec.cols);
  CounterRng rng(derive_key({spec.seed}));

  std::vector<std::uint8_t> cells(static_cast<std::size_t>(spec.rows) * n);
  for (auto& c : cells) c = static_cast<std::uint8_t>(rng.next_below(static_cast<std::uint64_t>(a)));

  int row0 = 0;
  for (const auto& block : spec.blocks) {
    for (const auto& link : block.links) {
      for (int r = row0; r < row0 + block.row_count; ++r) {
        const std::size_t base = static_cast<std::size_t>(r) * n;
        std::uint8_t& cell = cells[base + static_cast<std::size_t>(link.j)];
        cell = link.bijection[cells[base + static_cast<std::size_t>(link.i)]];
        if (link.noise_rate > 0.0 && rng.next_unit() < link.noise_rate) {
          cell = static_cast<std::uint8_t>(rng.next_below(static_cast<std::uint64_t>(a)));
        }
      }
    }
    row0 += block.row_count;
  }

  std::vector<int> labels(static_cast<std::size_t>(spec.rows));
  std::iota(labels.begin(), labels.end(), 1);
  return System(spec.cols, spec.alphabet, std::move(cells), std::move(labels));
}

}  // namespace sitelink
