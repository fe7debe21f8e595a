#include <istream>
#include <ostream>

#include "tasbm/error.hpp"
#include "tasbm/model.hpp"
#include "tasbm/text_format.hpp"

namespace tasbm {

namespace {

template <typename Seq>
void write_list(std::ostream& out, const char* key, const Seq& values) {
  out << key;
  for (const auto& v : values) out << ' ' << v;
  out << '\n';
}

void write_reals(std::ostream& out, const char* key, const std::vector<double>& values) {
  out << key;
  for (double v : values) out << ' ' << format_real(v);
  out << '\n';
}

template <typename Matrix, typename Format>
void write_matrix(std::ostream& out, const char* key, const Matrix& m, Format format) {
  out << key << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << ' ';
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << format(m(r, c));
    out << '\n';
  }
}

template <typename Matrix, typename Parse>
Matrix read_matrix(const TextEntry& entry, Parse parse) {
  entry.expect_values(2);
  const auto rows = entry.int_value(0), cols = entry.int_value(1);
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows) != entry.rows.size()) {
    throw ParseError(entry.line, "\"" + entry.key + "\" row count mismatch");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = entry.rows[r];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(entry.line + r + 1, "\"" + entry.key + "\" column count mismatch");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse(row[c], entry.line + r + 1);
  }
  return m;
}

template <typename T>
std::vector<T> non_negative(const TextEntry& entry) {
  std::vector<T> out;
  for (auto v : entry.int_values()) {
    if (v < 0) throw ParseError(entry.line, "\"" + entry.key + "\" must be non-negative");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

}  // namespace

void write_models(std::ostream& out, std::span<const TasbmModel> models, bool with_members) {
  for (const auto& m : models) {
    out << "[model]\n";
    out << "window " << m.window.begin << ' ' << m.window.end << '\n';
    out << "T " << m.T() << '\n';
    out << "nodes " << m.node_count() << '\n';
    write_reals(out, "out_bucket_boundaries", m.out_buckets.boundaries);
    write_reals(out, "in_bucket_boundaries", m.in_buckets.boundaries);
    write_list(out, "out_state_buckets", m.out_state_bucket);
    write_list(out, "in_state_buckets", m.in_state_bucket);
    write_list(out, "out_state_sizes", m.out_counts());
    write_list(out, "in_state_sizes", m.in_counts());
    write_matrix(out, "joint_counts", m.joint_counts, [](std::int64_t v) { return v; });
    write_matrix(out, "theta", m.theta, [](double v) { return format_real(v); });
    const Eigen::VectorXd pi_out = m.pi_out(), pi_in = m.pi_in();
    write_reals(out, "pi_out", {pi_out.begin(), pi_out.end()});
    write_reals(out, "pi_in", {pi_in.begin(), pi_in.end()});
    if (with_members && !m.out_state_of.empty()) {
      write_list(out, "out_members", m.out_state_of);
      write_list(out, "in_members", m.in_state_of);
    }
    out << '\n';
  }
}

std::vector<TasbmModel> read_models(std::istream& in) {
  const TextDocument doc = parse_text(in);
  std::vector<TasbmModel> models;
  for (const auto& section : doc.sections) {
    if (section.name != "model") {
      if (section.entries.empty()) continue;
      throw ParseError(section.line, "unexpected section \"" + section.name + "\" in model file");
    }
    TasbmModel m;
    const auto& window = section.at("window").expect_values(2);
    m.window = {window.int_value(0), window.int_value(1)};
    m.out_buckets.boundaries = section.at("out_bucket_boundaries").real_values();
    m.in_buckets.boundaries = section.at("in_bucket_boundaries").real_values();
    m.out_state_bucket = non_negative<std::size_t>(section.at("out_state_buckets"));
    m.in_state_bucket = non_negative<std::size_t>(section.at("in_state_buckets"));
    m.joint_counts = read_matrix<CountMatrix>(section.at("joint_counts"), parse_int);
    m.theta = read_matrix<RateMatrix>(section.at("theta"), parse_real);
    if (const auto* e = section.find("out_members")) m.out_state_of = non_negative<std::uint32_t>(*e);
    if (const auto* e = section.find("in_members")) m.in_state_of = non_negative<std::uint32_t>(*e);
    try {
      m.out_buckets.validate();
      m.in_buckets.validate();
      m.validate();
    } catch (const ArgumentError& err) {
      throw ParseError(section.line, err.what());
    }
    if (const auto* e = section.find("T"); e && e->int_value() != m.T()) {
      throw ParseError(e->line, "T disagrees with the window");
    }
    models.push_back(std::move(m));
  }
  return models;
}

}  // namespace tasbm
