#include "tasbm/text_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <sstream>

#include "tasbm/error.hpp"

namespace tasbm {

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

}  // namespace

const TextEntry& TextEntry::expect_values(std::size_t n) const {
  if (values.size() != n) {
    throw ParseError(line, "\"" + key + "\" expects " + std::to_string(n) + " value(s), got " +
                               std::to_string(values.size()));
  }
  return *this;
}

std::int64_t TextEntry::int_value(std::size_t i) const {
  if (i >= values.size()) throw ParseError(line, "\"" + key + "\" is missing a value");
  return parse_int(values[i], line);
}

double TextEntry::real_value(std::size_t i) const {
  if (i >= values.size()) throw ParseError(line, "\"" + key + "\" is missing a value");
  return parse_real(values[i], line);
}

std::vector<double> TextEntry::real_values() const {
  std::vector<double> out;
  for (const auto& v : values) out.push_back(parse_real(v, line));
  return out;
}

std::vector<std::int64_t> TextEntry::int_values() const {
  std::vector<std::int64_t> out;
  for (const auto& v : values) out.push_back(parse_int(v, line));
  return out;
}

const TextEntry* TextSection::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const TextEntry& TextSection::at(std::string_view key) const {
  if (const auto* e = find(key)) return *e;
  const std::string where = name.empty() ? "document" : "[" + name + "]";
  throw ParseError(line, where + " lacks \"" + std::string(key) + "\"");
}

std::vector<const TextSection*> TextDocument::named(std::string_view name) const {
  std::vector<const TextSection*> out;
  for (const auto& s : sections) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

TextDocument parse_text(std::istream& in) {
  TextDocument doc;
  doc.sections.push_back({});
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto words = split_words(line);
    if (words.empty()) continue;
    const bool indented = line.front() == ' ' || line.front() == '\t';
    auto& section = doc.sections.back();
    if (indented) {
      if (section.entries.empty()) throw ParseError(line_no, "indented row without an entry");
      section.entries.back().rows.push_back(std::move(words));
      continue;
    }
    if (words.front().front() == '[') {
      const auto& head = words.front();
      if (words.size() != 1 || head.size() < 3 || head.back() != ']') {
        throw ParseError(line_no, "malformed section header");
      }
      doc.sections.push_back({head.substr(1, head.size() - 2), line_no, {}});
      continue;
    }
    TextEntry entry;
    entry.key = std::move(words.front());
    entry.values.assign(std::make_move_iterator(words.begin() + 1),
                        std::make_move_iterator(words.end()));
    entry.line = line_no;
    section.entries.push_back(std::move(entry));
  }
  if (doc.sections.front().entries.empty() && doc.sections.size() > 1) {
    doc.sections.erase(doc.sections.begin());
  }
  return doc;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  if (std::strtod(buf, nullptr) != value) std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_real(std::string_view text, std::size_t line) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "expected a number, got \"" + std::string(text) + "\"");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "expected an integer, got \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace tasbm
