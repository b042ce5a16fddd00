#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace sitelink {

// Streaming pairwise (tree) summation: values are combined in power-of-two
// blocks, which bounds the rounding error of long sums and yields the same
// bits for the same sequence of add() calls, no matter how it was produced.
class PairwiseSum {
 public:
  void add(double x) {
    std::uint64_t c = count_;
    std::size_t level = 0;
    while (c & 1u) {
      x += stack_[level];
      c >>= 1;
      ++level;
    }
    if (level == stack_.size()) {
      stack_.push_back(x);
    } else {
      stack_[level] = x;
    }
    ++count_;
  }

  std::uint64_t count() const { return count_; }

  // Folds the remaining partial blocks from the lowest level upward.
  double total() const {
    double t = 0.0;
    for (std::size_t level = 0; level < stack_.size(); ++level) {
      if ((count_ >> level) & 1u) t += stack_[level];
    }
    return t;
  }

 private:
  std::vector<double> stack_;  // stack_[l] holds a sum of 2^l inputs
  std::uint64_t count_ = 0;
};

// Table of x*ln(x) for integer x in [0, max]; entries 0 and 1 are 0.
inline std::vector<double> xlnx_table(std::int64_t max) {
  std::vector<double> t(static_cast<std::size_t>(max) + 1, 0.0);
  for (std::int64_t x = 2; x <= max; ++x) {
    const double xd = static_cast<double>(x);
    t[static_cast<std::size_t>(x)] = xd * std::log(xd);
  }
  return t;
}

}  // namespace sitelink
