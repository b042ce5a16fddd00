#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "system.hpp"

namespace sitelink {

// Joint and marginal count tables of one link (i, j): the sufficient
// statistic for every quantity computed downstream.
struct LinkCounts {
  int a = 0;                        // alphabet size
  std::int64_t total = 0;           // number of rows counted
  std::vector<std::int64_t> joint;  // a*a, row-major: joint[u*a + v]
  std::vector<std::int64_t> left;   // length a, row sums of joint
  std::vector<std::int64_t> right;  // length a, column sums of joint

  std::int64_t joint_at(int u, int v) const {
    return joint[static_cast<std::size_t>(u) * static_cast<std::size_t>(a) +
                 static_cast<std::size_t>(v)];
  }

  // Builds counts from an explicit joint table; marginals and total derived.
  static LinkCounts from_joint(int a, std::span<const std::int64_t> joint) {
    if (a < 1) throw config_error("alphabet size must be positive");
    if (joint.size() != static_cast<std::size_t>(a) * static_cast<std::size_t>(a)) {
      throw config_error("joint table must have a*a entries");
    }
    LinkCounts lc;
    lc.a = a;
    lc.joint.assign(joint.begin(), joint.end());
    lc.left.assign(static_cast<std::size_t>(a), 0);
    lc.right.assign(static_cast<std::size_t>(a), 0);
    for (int u = 0; u < a; ++u) {
      for (int v = 0; v < a; ++v) {
        const std::int64_t c = lc.joint_at(u, v);
        if (c < 0) throw config_error("joint counts must be non-negative");
        lc.left[static_cast<std::size_t>(u)] += c;
        lc.right[static_cast<std::size_t>(v)] += c;
        lc.total += c;
      }
    }
    return lc;
  }

  bool operator==(const LinkCounts&) const = default;
};

inline LinkCounts link_counts(const System& sys, int i, int j) {
  if (i < 0 || j >= sys.cols()) throw config_error("link site index out of range");
  if (i >= j) {
    throw config_error("link requires site indices i < j (got i=" + std::to_string(i) +
                       ", j=" + std::to_string(j) + ")");
  }
  const int a = sys.alphabet().size();
  LinkCounts lc;
  lc.a = a;
  lc.total = sys.rows();
  lc.joint.assign(static_cast<std::size_t>(a) * static_cast<std::size_t>(a), 0);
  lc.left.assign(static_cast<std::size_t>(a), 0);
  lc.right.assign(static_cast<std::size_t>(a), 0);
  for (int h = 0; h < sys.rows(); ++h) {
    const int u = sys.at(h, i);
    const int v = sys.at(h, j);
    ++lc.joint[static_cast<std::size_t>(u) * static_cast<std::size_t>(a) +
               static_cast<std::size_t>(v)];
    ++lc.left[static_cast<std::size_t>(u)];
    ++lc.right[static_cast<std::size_t>(v)];
  }
  return lc;
}

// A link is pure when the observed symbol correspondence extends to a
// bijection of the alphabet: at most one nonzero entry in every row and in
// every column of the joint table. Decided exactly on integer counts.
inline bool is_pure(const LinkCounts& lc) {
  std::vector<std::uint8_t> col_used(static_cast<std::size_t>(lc.a), 0);
  for (int u = 0; u < lc.a; ++u) {
    bool row_used = false;
    for (int v = 0; v < lc.a; ++v) {
      if (lc.joint_at(u, v) == 0) continue;
      if (row_used || col_used[static_cast<std::size_t>(v)]) return false;
      row_used = true;
      col_used[static_cast<std::size_t>(v)] = 1;
    }
  }
  return true;
}

// A link is uniform when every symbol pair occurs with the same count, which
// requires total to be divisible by a^2.
inline bool is_uniform(const LinkCounts& lc) {
  const std::int64_t a2 = static_cast<std::int64_t>(lc.a) * lc.a;
  if (lc.total <= 0 || lc.total % a2 != 0) return false;
  const std::int64_t q = lc.total / a2;
  for (std::int64_t c : lc.joint) {
    if (c != q) return false;
  }
  return true;
}

}  // namespace sitelink
