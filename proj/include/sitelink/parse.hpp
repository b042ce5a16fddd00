#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "system.hpp"

namespace sitelink {

enum class InputFormat { fasta, raw };

// Where the working alphabet came from; recorded in output metadata since
// the alphabet size enters the analysis itself.
enum class AlphabetSource { declared, directive, inferred };

inline const char* alphabet_source_name(AlphabetSource s) {
  switch (s) {
    case AlphabetSource::declared:
      return "declared";
    case AlphabetSource::directive:
      return "directive";
    default:
      return "inferred";
  }
}

struct ParseResult {
  System system;
  AlphabetSource alphabet_source;
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

// `# alphabet: SYMBOLS` comment in raw files.
inline std::optional<std::string> alphabet_directive(std::string_view line) {
  if (line.empty() || line.front() != '#') return std::nullopt;
  line.remove_prefix(1);
  const auto start = line.find_first_not_of(" \t");
  if (start == std::string_view::npos) return std::nullopt;
  line.remove_prefix(start);
  constexpr std::string_view tag = "alphabet:";
  if (line.substr(0, tag.size()) != tag) return std::nullopt;
  line.remove_prefix(tag.size());
  const auto sym_start = line.find_first_not_of(" \t");
  if (sym_start == std::string_view::npos) return std::nullopt;
  const auto sym_end = line.find_last_not_of(" \t");
  return std::string(line.substr(sym_start, sym_end - sym_start + 1));
}

inline Alphabet infer_alphabet(const std::vector<std::string>& rows) {
  std::set<char> seen;
  for (const auto& row : rows) seen.insert(row.begin(), row.end());
  return Alphabet(std::string(seen.begin(), seen.end()));
}

}  // namespace detail

// FASTA: records introduced by '>' header lines, sequence lines of a record
// concatenated; RAW: one row per line, '#' lines are comments. Symbols are
// normalized to upper case before alphabet lookup. Rows are labelled 1..k in
// file order. The alphabet is the declared one when given, else a raw-file
// `# alphabet:` directive, else the sorted set of observed symbols.
inline ParseResult parse_input(std::string_view text, InputFormat format,
                               const std::optional<Alphabet>& declared = {}) {
  const auto lines = detail::split_lines(text);
  std::vector<std::string> rows;
  std::optional<std::string> directive;

  if (format == InputFormat::fasta) {
    bool in_record = false;
    for (const auto& line : lines) {
      if (detail::is_blank(line)) continue;
      if (line.front() == '>') {
        rows.emplace_back();
        in_record = true;
        continue;
      }
      if (!in_record) throw input_error("FASTA input must start with a '>' header line");
      for (char c : line) rows.back().push_back(Alphabet::normalize(c));
    }
  } else {
    for (const auto& line : lines) {
      if (detail::is_blank(line)) continue;
      if (line.front() == '#') {
        if (auto d = detail::alphabet_directive(line); d && !directive) directive = *d;
        continue;
      }
      std::string& row = rows.emplace_back();
      row.reserve(line.size());
      for (char c : line) row.push_back(Alphabet::normalize(c));
    }
  }

  if (rows.empty()) throw input_error("empty input: no rows found");

  AlphabetSource source;
  Alphabet alphabet;
  if (declared) {
    alphabet = *declared;
    source = AlphabetSource::declared;
  } else if (directive) {
    alphabet = Alphabet(*directive);
    source = AlphabetSource::directive;
  } else {
    alphabet = detail::infer_alphabet(rows);
    source = AlphabetSource::inferred;
  }
  return ParseResult{System::from_rows(rows, alphabet), source};
}

}  // namespace sitelink
