#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "infotheory.hpp"
#include "link_counts.hpp"
#include "parallel.hpp"
#include "potential.hpp"
#include "system.hpp"

namespace sitelink {

using Link = std::pair<int, int>;  // site pair, i < j, 0-based

// A deduplicated set of links, kept lexicographically sorted so every
// downstream output has a deterministic order.
class LinkSet {
 public:
  LinkSet() = default;

  static LinkSet of(std::vector<Link> links, int n_sites) {
    for (const auto& [i, j] : links) {
      if (i < 0 || j >= n_sites) throw config_error("link site index out of range");
      if (i >= j) {
        throw config_error("links require i < j (got i=" + std::to_string(i) +
                           ", j=" + std::to_string(j) + ")");
      }
    }
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    LinkSet ls;
    ls.links_ = std::move(links);
    return ls;
  }

  static LinkSet all(int n_sites) {
    if (n_sites < 2) throw input_error("a link set requires at least two sites");
    std::vector<Link> links;
    links.reserve(static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2);
    for (int i = 0; i < n_sites; ++i) {
      for (int j = i + 1; j < n_sites; ++j) links.emplace_back(i, j);
    }
    LinkSet ls;
    ls.links_ = std::move(links);
    return ls;
  }

  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  const Link& operator[](std::size_t t) const { return links_[t]; }
  const std::vector<Link>& links() const { return links_; }
  auto begin() const { return links_.begin(); }
  auto end() const { return links_.end(); }

  bool operator==(const LinkSet&) const = default;

 private:
  std::vector<Link> links_;
};

struct SpectrumEntry {
  Link link;
  Nats distance = 0.0;
  PotentialEstimate potential;
};

struct MethodSpec {
  Method method = Method::closed_form;
  std::uint64_t samples = 10'000;            // monte_carlo only
  std::uint64_t seed = 0;                    // monte_carlo only
  std::uint64_t subset_budget = 10'000'000;  // exact only
};

// Ranks all C(n,2) links by ascending D-distance (ties lexicographic) and
// keeps the lowest max(1, floor(fraction * C(n,2))) of them.
inline LinkSet rank_links(const System& sys, double fraction, int threads = 1) {
  const int n = sys.cols();
  if (n < 2) throw input_error("ranking links requires at least two sites");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw config_error("link fraction must lie in (0, 1]");
  }
  const LinkSet all = LinkSet::all(n);
  std::vector<double> dist(all.size());
  detail::parallel_for(all.size(), threads, [&](std::size_t t) {
    dist[t] = vi_distance(link_counts(sys, all[t].first, all[t].second));
  });
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (dist[x] != dist[y]) return dist[x] < dist[y];
    return all[x] < all[y];
  });
  const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(all.size()))));
  std::vector<Link> keep;
  keep.reserve(m);
  for (std::size_t t = 0; t < m; ++t) keep.push_back(all[order[t]]);
  return LinkSet::of(std::move(keep), n);
}

// One spectrum entry per link, in link-set order. Per-link work is
// independent, so the result does not depend on the thread count.
inline std::vector<SpectrumEntry> site_spectrum(const System& sys, const LinkSet& links, int s,
                                                const MethodSpec& spec = {}, int threads = 1) {
  if (spec.method == Method::closed_form && s != 1) {
    throw config_error("the closed_form method is defined for s = 1 only");
  }
  std::vector<SpectrumEntry> out(links.size());
  detail::parallel_for(links.size(), threads, [&](std::size_t t) {
    const auto [i, j] = links[t];
    const LinkCounts lc = link_counts(sys, i, j);
    PotentialEstimate pot;
    switch (spec.method) {
      case Method::closed_form:
        pot = potential_closed_form_s1(lc);
        break;
      case Method::exact:
        pot = potential_exact(sys, i, j, s, {spec.subset_budget});
        break;
      case Method::monte_carlo:
        pot = potential_mc(sys, i, j, s, spec.samples, spec.seed);
        break;
    }
    out[t] = SpectrumEntry{links[t], vi_distance(lc), pot};
  });
  return out;
}

// Average D-distance over the link set.
inline Nats q_average(const System& sys, const LinkSet& links) {
  if (links.empty()) throw config_error("q_average requires a non-empty link set");
  double sum = 0.0;
  for (const auto& [i, j] : links) sum += vi_distance(link_counts(sys, i, j));
  return sum / static_cast<double>(links.size());
}

// Drop in average D-distance caused by removing row x. May be negative for
// an individual row.
inline double q_drop(const System& sys, const LinkSet& links, int row) {
  if (sys.rows() < 2) throw config_error("q_drop requires at least two rows");
  if (row < 0 || row >= sys.rows()) throw config_error("row position out of range");
  return q_average(sys, links) - q_average(remove_rows(sys, RowMask::of({row})), links);
}

// Q(x) for every row position, via per-link tally updates rather than
// recounting each residual system.
inline std::vector<double> q_drop_profile(const System& sys, const LinkSet& links,
                                          int threads = 1) {
  if (sys.rows() < 2) throw config_error("q_drop_profile requires at least two rows");
  if (links.empty()) throw config_error("q_drop_profile requires a non-empty link set");
  const int k = sys.rows();
  std::vector<LinkCounts> counts;
  counts.reserve(links.size());
  std::vector<detail::ResidualVi> evals;
  evals.reserve(links.size());
  for (const auto& [i, j] : links) {
    counts.push_back(link_counts(sys, i, j));
    evals.emplace_back(sys, i, j, counts.back());
  }
  double q_before = 0.0;
  for (const auto& rv : evals) q_before += rv.full_vi();
  q_before /= static_cast<double>(links.size());

  std::vector<double> profile(static_cast<std::size_t>(k));
  detail::parallel_for(static_cast<std::size_t>(k), threads, [&](std::size_t x) {
    double q_after = 0.0;
    for (const auto& rv : evals) {
      const double d = rv.after_single_removal(static_cast<int>(x));
      q_after += d < 0.0 ? 0.0 : d;
    }
    q_after /= static_cast<double>(links.size());
    profile[x] = q_before - q_after;
  });
  return profile;
}

// Row position maximizing Q(x) plus the achieved drop; ties go to the lowest
// position (equivalently the lowest original label).
inline std::pair<int, double> argmax_drop(const System& sys, const LinkSet& links,
                                          int threads = 1) {
  const std::vector<double> profile = q_drop_profile(sys, links, threads);
  int best = 0;
  for (int x = 1; x < static_cast<int>(profile.size()); ++x) {
    if (profile[static_cast<std::size_t>(x)] > profile[static_cast<std::size_t>(best)]) best = x;
  }
  return {best, profile[static_cast<std::size_t>(best)]};
}

enum class StopReason { threshold_reached, max_removals, all_links_pure, no_positive_drop };

inline const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::threshold_reached:
      return "threshold_reached";
    case StopReason::max_removals:
      return "max_removals";
    case StopReason::all_links_pure:
      return "all_links_pure";
    default:
      return "no_positive_drop";
  }
}

struct PurgeStep {
  int row_label = 0;  // 1-based original label of the removed row
  double q_drop = 0.0;
  double q_before = 0.0;
  double q_after = 0.0;
};

struct RemovalTrace {
  std::vector<PurgeStep> steps;
  StopReason stop_reason = StopReason::all_links_pure;
};

// How the link set evolves during a purge: analyze one fixed set, or re-rank
// the lowest `fraction` of links on the surviving system before each step.
struct LinkPolicy {
  static LinkPolicy fixed(LinkSet links) {
    if (links.empty()) throw config_error("fixed link policy requires a non-empty link set");
    LinkPolicy p;
    p.fixed_links = std::move(links);
    return p;
  }

  static LinkPolicy refresh(double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
      throw config_error("refresh fraction must lie in (0, 1]");
    }
    LinkPolicy p;
    p.fraction = fraction;
    return p;
  }

  bool is_refresh() const { return !fixed_links.has_value(); }

  std::optional<LinkSet> fixed_links;
  double fraction = 0.0;
};

struct StopRule {
  std::optional<double> q_threshold;  // stop once q <= threshold
  std::optional<int> max_removals;
};

// Greedy purge: repeatedly remove the row with the largest drop in average
// link distance. Stop reasons are checked in the order all_links_pure,
// threshold_reached, max_removals, no_positive_drop.
inline RemovalTrace purge(const System& sys, const LinkPolicy& policy, const StopRule& stop,
                          int threads = 1) {
  if (sys.rows() < 2) throw config_error("purge requires at least two rows");
  if (!stop.q_threshold && !stop.max_removals) {
    throw config_error("purge requires a stop criterion: a q threshold and/or max removals");
  }
  if (stop.q_threshold && !(*stop.q_threshold >= 0.0)) {
    throw config_error("q threshold must be >= 0");
  }
  if (stop.max_removals && *stop.max_removals < 0) {
    throw config_error("max removals must be >= 0");
  }

  RemovalTrace trace;
  System cur = sys;
  while (true) {
    const LinkSet links = policy.is_refresh() ? rank_links(cur, policy.fraction, threads)
                                              : *policy.fixed_links;
    const bool all_pure = std::all_of(links.begin(), links.end(), [&](const Link& l) {
      return is_pure(link_counts(cur, l.first, l.second));
    });
    if (all_pure) {
      trace.stop_reason = StopReason::all_links_pure;
      break;
    }
    const double q_before = q_average(cur, links);
    if (stop.q_threshold && q_before <= *stop.q_threshold) {
      trace.stop_reason = StopReason::threshold_reached;
      break;
    }
    if (stop.max_removals && static_cast<int>(trace.steps.size()) >= *stop.max_removals) {
      trace.stop_reason = StopReason::max_removals;
      break;
    }
    const auto [x, q] = argmax_drop(cur, links, threads);
    if (!(q > 0.0)) {
      trace.stop_reason = StopReason::no_positive_drop;
      break;
    }
    System next = remove_rows(cur, RowMask::of({x}));
    const double q_after = q_average(next, links);
    trace.steps.push_back(PurgeStep{.row_label = cur.row_label(x),
                                    .q_drop = q_before - q_after,
                                    .q_before = q_before,
                                    .q_after = q_after});
    cur = std::move(next);
  }
  return trace;
}

}  // namespace sitelink
