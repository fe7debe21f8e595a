#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tasbm {

// Line-oriented key/value text used for model files, generator specs and CLI
// config files:
//
//   # comment
//   key value value ...
//   matrix 2 2
//     1 2
//     3 4
//   [section]
//   key value
//
// Indented lines are rows of the preceding entry's block. Entries before the
// first [section] header belong to an unnamed leading section.
struct TextEntry {
  std::string key;
  std::vector<std::string> values;
  std::vector<std::vector<std::string>> rows;
  std::size_t line = 0;

  // Throws ParseError (with this entry's line) unless exactly `n` values.
  const TextEntry& expect_values(std::size_t n) const;
  std::int64_t int_value(std::size_t i = 0) const;
  double real_value(std::size_t i = 0) const;
  std::vector<double> real_values() const;
  std::vector<std::int64_t> int_values() const;
};

struct TextSection {
  std::string name;
  std::size_t line = 0;
  std::vector<TextEntry> entries;

  const TextEntry* find(std::string_view key) const;
  // Throws ParseError naming the missing key.
  const TextEntry& at(std::string_view key) const;
};

struct TextDocument {
  std::vector<TextSection> sections;

  // Sections with the given name, in order.
  std::vector<const TextSection*> named(std::string_view name) const;
};

TextDocument parse_text(std::istream& in);

// Shortest round-trippable decimal form (%.17g, trimmed to %.15g when that
// already round-trips). Infinities print as inf / -inf.
std::string format_real(double value);

// Parses a real; accepts inf, -inf, nan. Throws ParseError tagged with `line`.
double parse_real(std::string_view text, std::size_t line);
std::int64_t parse_int(std::string_view text, std::size_t line);

}  // namespace tasbm
