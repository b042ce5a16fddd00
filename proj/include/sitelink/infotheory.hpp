#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>

#include "error.hpp"
#include "link_counts.hpp"
#include "special_functions.hpp"

namespace sitelink {

// All entropies are in nats (natural log). Accumulation order is fixed
// (ascending code), so results reproduce bit for bit across runs.
using Nats = double;

// Plug-in Shannon entropy of a count table, with the 0*ln(0) = 0 convention.
inline Nats entropy(std::span<const std::int64_t> counts, std::int64_t total) {
  if (total <= 0) throw config_error("entropy requires a positive total");
  assert(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == total);
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    if (c < 0) throw config_error("entropy counts must be non-negative");
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h == 0.0 ? 0.0 : h;
}

// Variation of information of a link: 2 H(joint) - H(left) - H(right).
// Symmetric in the two sites; lies in [0, 2 ln a].
inline Nats vi_distance(const LinkCounts& lc) {
  if (lc.total < 1) throw config_error("vi_distance requires at least one row");
  const double d = 2.0 * entropy(lc.joint, lc.total) - entropy(lc.left, lc.total) -
                   entropy(lc.right, lc.total);
  return d < 0.0 ? 0.0 : d;  // exact cancellation may land an ulp below zero
}

// Mutual information between a column variable Z (given as its count table,
// totalling k) and a uniformly chosen row index:
//
//   F(Z) = H(Z) - (1/k) * sum_x H(Z with row x deleted),
//
// evaluated in closed form as ln(k/(k-1)) - sum_z G(v_z) / (k(k-1)).
// Counts of 1 contribute exactly zero (G(1) = 0).
inline Nats row_mutual_information(std::span<const std::int64_t> counts, std::int64_t k) {
  if (k < 2) throw config_error("row_mutual_information requires k >= 2");
  assert(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == k);
  const double kd = static_cast<double>(k);
  double gsum = 0.0;
  for (std::int64_t c : counts) {
    if (c < 0) throw config_error("counts must be non-negative");
    if (c >= 2) gsum += special_G(static_cast<double>(c));
  }
  return std::log1p(1.0 / (kd - 1.0)) - gsum / (kd * (kd - 1.0));
}

}  // namespace sitelink
