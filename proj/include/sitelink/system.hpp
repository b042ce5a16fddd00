#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace sitelink {

// An aligned block of k rows over a fixed alphabet, with a fixed row order.
// Row labels are the 1-based positions of the rows in the original input;
// they survive row removal, so traces and reports always reference the
// input file unambiguously. Immutable after construction.
class System {
 public:
  System(int cols, Alphabet alphabet, std::vector<std::uint8_t> cells,
         std::vector<int> row_labels)
      : cols_(cols),
        alphabet_(std::move(alphabet)),
        cells_(std::move(cells)),
        row_labels_(std::move(row_labels)) {
    if (cols_ <= 0) throw input_error("system must have at least one column");
    if (row_labels_.empty()) throw input_error("system must have at least one row");
    if (cells_.size() != row_labels_.size() * static_cast<std::size_t>(cols_)) {
      throw input_error("cell table size does not match rows x cols");
    }
    for (std::uint8_t c : cells_) {
      if (static_cast<int>(c) >= alphabet_.size()) {
        throw input_error("cell code outside the alphabet");
      }
    }
  }

  // Rows of symbol characters, labelled 1..k in the given order.
  static System from_rows(const std::vector<std::string>& rows, const Alphabet& alphabet) {
    if (rows.empty()) throw input_error("empty input: no rows");
    const std::size_t n = rows.front().size();
    if (n == 0) throw input_error("empty input: row 1 has no symbols");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != n) {
        throw input_error("row " + std::to_string(r + 1) + " has length " +
                          std::to_string(rows[r].size()) + ", but row 1 has length " +
                          std::to_string(n));
      }
    }
    std::vector<std::uint8_t> cells;
    cells.reserve(rows.size() * n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const int code = alphabet.code(rows[r][c]);
        if (code < 0) {
          throw input_error(std::string("symbol '") + rows[r][c] + "' at row " +
                            std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                            " is not in alphabet \"" + alphabet.symbols() + "\"");
        }
        cells.push_back(static_cast<std::uint8_t>(code));
      }
    }
    std::vector<int> labels(rows.size());
    std::iota(labels.begin(), labels.end(), 1);
    return System(static_cast<int>(n), alphabet, std::move(cells), std::move(labels));
  }

  int rows() const { return static_cast<int>(row_labels_.size()); }
  int cols() const { return cols_; }
  const Alphabet& alphabet() const { return alphabet_; }

  std::uint8_t at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(col)];
  }

  std::span<const std::uint8_t> row(int r) const {
    return {cells_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_),
            static_cast<std::size_t>(cols_)};
  }

  int row_label(int r) const { return row_labels_[static_cast<std::size_t>(r)]; }
  const std::vector<int>& row_labels() const { return row_labels_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

 private:
  int cols_;
  Alphabet alphabet_;
  std::vector<std::uint8_t> cells_;  // row-major, rows() x cols()
  std::vector<int> row_labels_;
};

// A set of row positions marked for removal. Kept sorted and deduplicated.
class RowMask {
 public:
  RowMask() = default;

  static RowMask of(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (!indices.empty() && indices.front() < 0) {
      throw config_error("row mask indices must be non-negative");
    }
    RowMask m;
    m.indices_ = std::move(indices);
    return m;
  }

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

// Deletes the masked rows; survivors keep their order and labels.
// Removal never empties the system.
inline System remove_rows(const System& sys, const RowMask& mask) {
  const int k = sys.rows();
  if (!mask.empty() && mask.indices().back() >= k) {
    throw config_error("row mask index out of range");
  }
  if (mask.size() > k - 1) throw config_error("row mask would remove every row");
  if (mask.empty()) return sys;

  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(k - mask.size()) * sys.cols());
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(k - mask.size()));
  std::size_t next_removed = 0;
  for (int r = 0; r < k; ++r) {
    if (next_removed < mask.indices().size() && mask.indices()[next_removed] == r) {
      ++next_removed;
      continue;
    }
    const auto row = sys.row(r);
    cells.insert(cells.end(), row.begin(), row.end());
    labels.push_back(sys.row_label(r));
  }
  return System(sys.cols(), sys.alphabet(), std::move(cells), std::move(labels));
}

}  // namespace sitelink
