#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace sitelink {

// Ordered symbol set. Letters are normalized to upper case; the code of a
// symbol is its position, so symbol<->code is a bijection onto {0,...,a-1}.
// Gap characters ('-', '.') are ordinary symbols.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::string_view symbols) {
    for (char raw : symbols) {
      const char c = normalize(raw);
      if (!std::isprint(static_cast<unsigned char>(c))) {
        throw config_error("alphabet symbols must be printable characters");
      }
      if (codes_[uidx(c)] >= 0) {
        throw config_error(std::string("duplicate alphabet symbol '") + c + "'");
      }
      codes_[uidx(c)] = static_cast<std::int16_t>(symbols_.size());
      symbols_.push_back(c);
    }
    if (symbols_.empty()) throw config_error("alphabet must not be empty");
  }

  static char normalize(char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbols() const { return symbols_; }
  char symbol(int code) const { return symbols_.at(static_cast<std::size_t>(code)); }

  // -1 when the (normalized) symbol is not in the alphabet.
  int code(char c) const { return codes_[uidx(normalize(c))]; }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  static std::size_t uidx(char c) { return static_cast<unsigned char>(c); }

  static constexpr std::array<std::int16_t, 256> empty_codes() {
    std::array<std::int16_t, 256> a{};
    for (auto& v : a) v = -1;
    return a;
  }

  std::string symbols_;
  std::array<std::int16_t, 256> codes_ = empty_codes();
};

}  // namespace sitelink
