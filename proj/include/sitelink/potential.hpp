#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "combinatorics.hpp"
#include "error.hpp"
#include "infotheory.hpp"
#include "link_counts.hpp"
#include "numeric.hpp"
#include "rng.hpp"
#include "special_functions.hpp"
#include "system.hpp"

namespace sitelink {

enum class Method { closed_form, exact, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::exact:
      return "exact";
    default:
      return "monte_carlo";
  }
}

// An estimate of the link potential: the expected drop in D-distance when s
// uniformly chosen rows are removed. samples/std_error/seed are meaningful
// for Monte Carlo only. The value is exactly 0 for pure links.
struct PotentialEstimate {
  double value = 0.0;
  int s = 0;
  Method method = Method::closed_form;
  std::uint64_t samples = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

// Evaluates the D-distance of a link after removing a row subset, by
// updating precomputed sum(v ln v) tallies of the full count tables instead
// of recounting. Single-row removals are const and thread-safe; multi-row
// removals use internal scratch and must stay on one thread per instance.
class ResidualVi {
 public:
  ResidualVi(const System& sys, int i, int j, const LinkCounts& full)
      : a_(full.a), k_(static_cast<int>(full.total)), full_(&full), xlnx_(xlnx_table(full.total)) {
    urow_.resize(static_cast<std::size_t>(k_));
    vrow_.resize(static_cast<std::size_t>(k_));
    jrow_.resize(static_cast<std::size_t>(k_));
    for (int h = 0; h < k_; ++h) {
      const int u = sys.at(h, i);
      const int v = sys.at(h, j);
      urow_[static_cast<std::size_t>(h)] = u;
      vrow_[static_cast<std::size_t>(h)] = v;
      jrow_[static_cast<std::size_t>(h)] = u * a_ + v;
    }
    sl_ = table_sum(full.left);
    sr_ = table_sum(full.right);
    sj_ = table_sum(full.joint);
    dl_.assign(static_cast<std::size_t>(a_), 0);
    dr_.assign(static_cast<std::size_t>(a_), 0);
    dj_.assign(static_cast<std::size_t>(a_) * static_cast<std::size_t>(a_), 0);
    touched_l_.reserve(8);
    touched_r_.reserve(8);
    touched_j_.reserve(8);
  }

  double full_vi() const { return (sl_ + sr_ - 2.0 * sj_) / static_cast<double>(k_); }

  // D-distance after removing exactly one row. Thread-safe.
  double after_single_removal(int row) const {
    const auto u = static_cast<std::size_t>(urow_[static_cast<std::size_t>(row)]);
    const auto v = static_cast<std::size_t>(vrow_[static_cast<std::size_t>(row)]);
    const auto p = static_cast<std::size_t>(jrow_[static_cast<std::size_t>(row)]);
    const double dsl = sl_ + step_down(full_->left[u]);
    const double dsr = sr_ + step_down(full_->right[v]);
    const double dsj = sj_ + step_down(full_->joint[p]);
    return (dsl + dsr - 2.0 * dsj) / static_cast<double>(k_ - 1);
  }

  // D-distance after removing the given distinct rows. Not thread-safe.
  double after_removal(std::span<const int> rows) {
    for (int r : rows) {
      bump(dl_, touched_l_, urow_[static_cast<std::size_t>(r)]);
      bump(dr_, touched_r_, vrow_[static_cast<std::size_t>(r)]);
      bump(dj_, touched_j_, jrow_[static_cast<std::size_t>(r)]);
    }
    const double dsl = sl_ + drain(full_->left, dl_, touched_l_);
    const double dsr = sr_ + drain(full_->right, dr_, touched_r_);
    const double dsj = sj_ + drain(full_->joint, dj_, touched_j_);
    return (dsl + dsr - 2.0 * dsj) / static_cast<double>(k_ - static_cast<int>(rows.size()));
  }

 private:
  double table_sum(const std::vector<std::int64_t>& t) const {
    double s = 0.0;
    for (std::int64_t c : t) s += xlnx_[static_cast<std::size_t>(c)];
    return s;
  }

  double step_down(std::int64_t c) const {
    return xlnx_[static_cast<std::size_t>(c - 1)] - xlnx_[static_cast<std::size_t>(c)];
  }

  static void bump(std::vector<std::int32_t>& delta, std::vector<int>& touched, int idx) {
    if (delta[static_cast<std::size_t>(idx)]++ == 0) touched.push_back(idx);
  }

  // Applies the accumulated deltas to the tally, resetting them for reuse.
  double drain(const std::vector<std::int64_t>& counts, std::vector<std::int32_t>& delta,
               std::vector<int>& touched) const {
    double ds = 0.0;
    for (int idx : touched) {
      const std::int64_t c = counts[static_cast<std::size_t>(idx)];
      ds += xlnx_[static_cast<std::size_t>(c - delta[static_cast<std::size_t>(idx)])] -
            xlnx_[static_cast<std::size_t>(c)];
      delta[static_cast<std::size_t>(idx)] = 0;
    }
    touched.clear();
    return ds;
  }

  int a_;
  int k_;
  const LinkCounts* full_;
  std::vector<double> xlnx_;
  std::vector<int> urow_, vrow_, jrow_;
  double sl_ = 0.0, sr_ = 0.0, sj_ = 0.0;
  mutable std::vector<std::int32_t> dl_, dr_, dj_;
  mutable std::vector<int> touched_l_, touched_r_, touched_j_;
};

}  // namespace detail

// lambda statistic of a link: k times the closed-form single-removal
// potential, assembled from G over the observed counts. G(0) is never
// evaluated; counts of 0 or 1 contribute nothing.
inline double lambda_statistic(const LinkCounts& lc) {
  if (lc.total < 2) throw input_error("lambda_statistic requires at least two rows");
  double marginal = 0.0;
  for (std::int64_t c : lc.left) {
    if (c >= 2) marginal += special_G(static_cast<double>(c));
  }
  for (std::int64_t c : lc.right) {
    if (c >= 2) marginal += special_G(static_cast<double>(c));
  }
  double joint = 0.0;
  for (std::int64_t c : lc.joint) {
    if (c >= 2) joint += special_G(static_cast<double>(c));
  }
  return (marginal - 2.0 * joint) / static_cast<double>(lc.total);
}

// Closed-form potential for single-row removal: lambda / (k - 1).
// Exactly 0 for pure links, strictly positive otherwise.
inline PotentialEstimate potential_closed_form_s1(const LinkCounts& lc) {
  if (lc.total < 2) throw input_error("closed-form potential requires at least two rows");
  PotentialEstimate est{.value = 0.0, .s = 1, .method = Method::closed_form};
  if (!is_pure(lc)) {
    est.value = lambda_statistic(lc) / static_cast<double>(lc.total - 1);
  }
  return est;
}

struct ExactOptions {
  std::uint64_t subset_budget = 10'000'000;  // hard cap on C(k, s)
};

// Exact potential: full D-distance minus the mean residual D-distance over
// all C(k, s) row subsets, enumerated in colexicographic order and averaged
// with pairwise summation. s = 0 yields 0 by definition.
inline PotentialEstimate potential_exact(const System& sys, int i, int j, int s,
                                         const ExactOptions& opt = {}) {
  const int k = sys.rows();
  if (s < 0 || s > k - 1) {
    throw config_error("s must lie in [0, k-1]; got s=" + std::to_string(s) +
                       " with k=" + std::to_string(k));
  }
  const LinkCounts full = link_counts(sys, i, j);
  PotentialEstimate est{.value = 0.0, .s = s, .method = Method::exact};
  if (s == 0 || is_pure(full)) return est;  // every sub-link of a pure link is pure

  const auto n_subsets = binomial_capped(k, s, opt.subset_budget);
  if (!n_subsets) {
    throw budget_error("C(" + std::to_string(k) + "," + std::to_string(s) +
                       ") exceeds the enumeration budget of " + std::to_string(opt.subset_budget) +
                       " subsets; use the monte_carlo method instead");
  }

  detail::ResidualVi rv(sys, i, j, full);
  std::vector<int> comb(static_cast<std::size_t>(s));
  for (int t = 0; t < s; ++t) comb[static_cast<std::size_t>(t)] = t;
  PairwiseSum mean_acc;
  do {
    mean_acc.add(rv.after_removal(comb));
  } while (next_combination_colex(comb, k));
  assert(mean_acc.count() == *n_subsets);

  est.value = rv.full_vi() - mean_acc.total() / static_cast<double>(*n_subsets);
  return est;
}

// Monte Carlo potential: subsets are drawn with one counter-based stream per
// sample, keyed by (seed, i, j, sample), so the estimate is reproducible for
// a given seed regardless of scheduling. std_error is the standard deviation
// of the sampled residual distances divided by sqrt(samples).
inline PotentialEstimate potential_mc(const System& sys, int i, int j, int s,
                                      std::uint64_t samples, std::uint64_t seed) {
  const int k = sys.rows();
  if (s < 1 || s > k - 1) {
    throw config_error("s must lie in [1, k-1]; got s=" + std::to_string(s) +
                       " with k=" + std::to_string(k));
  }
  if (samples < 2) throw config_error("monte_carlo requires at least 2 samples");
  const LinkCounts full = link_counts(sys, i, j);
  PotentialEstimate est{.value = 0.0,
                        .s = s,
                        .method = Method::monte_carlo,
                        .samples = samples,
                        .std_error = 0.0,
                        .seed = seed};
  if (is_pure(full)) return est;  // every subsample of a pure link is pure

  detail::ResidualVi rv(sys, i, j, full);
  std::vector<double> vals(samples);
  std::vector<int> pick;
  pick.reserve(static_cast<std::size_t>(s));
  std::vector<std::uint8_t> member(static_cast<std::size_t>(k), 0);
  for (std::uint64_t m = 0; m < samples; ++m) {
    CounterRng rng(derive_key({seed, static_cast<std::uint64_t>(i),
                               static_cast<std::uint64_t>(j), m}));
    sample_subset(rng, k, s, pick, member);
    vals[m] = rv.after_removal(pick);
  }

  PairwiseSum mean_acc;
  for (double v : vals) mean_acc.add(v);
  const double mean = mean_acc.total() / static_cast<double>(samples);
  PairwiseSum var_acc;
  for (double v : vals) var_acc.add((v - mean) * (v - mean));
  est.value = rv.full_vi() - mean;
  est.std_error =
      std::sqrt(var_acc.total() / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return est;
}

// Minimal single-removal potential among non-pure links of k rows:
// (2/(k-1)) [g(k/a) - g(k/a^2)], attained exactly at uniform links.
// Defined when uniform links exist, i.e. k divisible by a^2.
inline double ground_state_bound(std::int64_t k, int a) {
  if (a < 2) throw config_error("ground_state_bound requires a >= 2");
  const std::int64_t a2 = static_cast<std::int64_t>(a) * a;
  if (k <= 0 || k % a2 != 0) {
    throw config_error("ground_state_bound requires k divisible by a^2 (k=" + std::to_string(k) +
                       ", a=" + std::to_string(a) + ")");
  }
  const double kd = static_cast<double>(k);
  return 2.0 / (kd - 1.0) *
         (special_g(kd / static_cast<double>(a)) - special_g(kd / static_cast<double>(a2)));
}

// Guaranteed drop in average link distance when a fraction `pure_fraction`
// of the analyzed links is pure: (1 - p) times the ground-state bound.
inline double purity_gain_bound(std::int64_t k, int a, double pure_fraction) {
  if (!(pure_fraction >= 0.0 && pure_fraction <= 1.0)) {
    throw config_error("pure_fraction must lie in [0, 1]");
  }
  return (1.0 - pure_fraction) * ground_state_bound(k, a);
}

}  // namespace sitelink
