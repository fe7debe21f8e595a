#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "tables.hpp"
#include "tasbm/analytics.hpp"
#include "tasbm/counter.hpp"
#include "tasbm/error.hpp"
#include "tasbm/fit.hpp"
#include "tasbm/generator.hpp"
#include "tasbm/model.hpp"
#include "tasbm/motif.hpp"
#include "tasbm/temporal_graph.hpp"
#include "tasbm/text_format.hpp"

namespace tasbm::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---- files ---------------------------------------------------------------

void require_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError("cannot read " + path);
}

void require_output(const std::string& path, const std::vector<std::string>& inputs) {
  if (path.empty() || path == "-") return;
  const fs::path p(path);
  const auto dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
  for (const auto& in : inputs) {
    if (in.empty()) continue;
    if (fs::weakly_canonical(in, ec) == fs::weakly_canonical(p, ec)) {
      throw UsageError("output " + path + " would overwrite an input");
    }
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Collects artifacts and writes them only once the command has succeeded.
class Outputs {
 public:
  void add(const std::string& path, std::string content) {
    if (!path.empty()) files_.emplace_back(path, std::move(content));
  }

  void commit(std::ostream& out) {
    std::vector<std::pair<fs::path, fs::path>> staged;
    const auto discard = [&] {
      std::error_code ec;
      for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
    };
    for (const auto& [path, content] : files_) {
      if (path == "-") continue;
      fs::path tmp = path + ".tmp";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << content;
      f.close();
      staged.emplace_back(tmp, path);
      if (!f) {
        discard();
        throw IoError("cannot write " + path);
      }
    }
    for (const auto& [tmp, dst] : staged) {
      std::error_code ec;
      fs::rename(tmp, dst, ec);
      if (ec) {
        discard();
        throw IoError("cannot write " + dst.string());
      }
    }
    for (const auto& [path, content] : files_) {
      if (path == "-") out << content;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// ---- threads ---------------------------------------------------------------

std::size_t thread_count() {
  if (const char* env = std::getenv("TASBM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw UsageError("TASBM_THREADS must be a positive integer");
    }
    return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n); results land in caller-owned slots, so the
// output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  const std::size_t workers = std::min(n, thread_count());
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard guard(lock);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// ---- option values -----------------------------------------------------------

int weekday(std::string_view name) {
  static const char* kDays[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
  for (int d = 0; d < 7; ++d) {
    if (name == kDays[d]) return d;
  }
  if (name.size() == 1 && name[0] >= '0' && name[0] <= '6') return name[0] - '0';
  throw UsageError("unknown weekday \"" + std::string(name) + "\"");
}

std::optional<DayMask> day_mask(const RunConfig& cfg) {
  if (cfg.skip_days.empty()) return std::nullopt;
  if (cfg.day_length <= 0) throw UsageError("--day-length must be positive");
  DayMask mask;
  mask.day_length = cfg.day_length;
  mask.epoch_weekday = weekday(cfg.epoch_weekday);
  std::stringstream list(cfg.skip_days);
  for (std::string day; std::getline(list, day, ',');) mask.skip |= 1u << weekday(day);
  if (mask.skip == 0x7f) throw UsageError("--skip-days cannot remove every day");
  return mask;
}

SliceOptions slicing(const RunConfig& cfg) {
  SliceOptions options;
  options.origin = cfg.origin;
  options.end = cfg.end;
  options.day_mask = day_mask(cfg);
  return options;
}

BucketPolicy bucket_policy(const std::string& text) {
  if (text == "auto") return BucketPolicy::automatic();
  if (text == "single") return BucketPolicy::fixed(BucketConfig::single());
  if (text.rfind("gaps:", 0) == 0) {
    const auto q = std::strtol(text.c_str() + 5, nullptr, 10);
    if (q < 1) throw UsageError("--buckets gaps:Q needs Q >= 1");
    return BucketPolicy::gaps(static_cast<std::size_t>(q));
  }
  BucketConfig config;
  std::stringstream list(text);
  for (std::string item; std::getline(list, item, ',');) {
    try {
      config.boundaries.push_back(parse_real(item, 0));
    } catch (const ParseError&) {
      throw UsageError("--buckets expects auto, single, gaps:Q or a comma list of rates");
    }
  }
  try {
    config.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--buckets: ") + e.what());
  }
  return BucketPolicy::fixed(std::move(config));
}

std::vector<TemporalMotif> motif_selection(const std::vector<std::string>& names) {
  static const std::map<std::string, MotifCategory> kCategories{
      {"triangle", MotifCategory::triangle},
      {"two_node", MotifCategory::two_node},
      {"reciprocated", MotifCategory::reciprocated},
      {"double_edge", MotifCategory::double_edge}};
  std::vector<TemporalMotif> motifs;
  std::set<std::string> seen;
  const auto add = [&](const TemporalMotif& m) {
    if (seen.insert(motif_name(m)).second) motifs.push_back(m);
  };
  const std::vector<std::string> all{"all"};
  for (const auto& name : names.empty() ? all : names) {
    if (name == "all") {
      for (const auto& e : catalog_36()) add(e.motif);
    } else if (auto it = kCategories.find(name); it != kCategories.end()) {
      for (const auto& e : catalog_36()) {
        if (e.category == it->second) add(e.motif);
      }
    } else {
      try {
        add(resolve_motif(name));
      } catch (const ArgumentError& e) {
        throw UsageError("--motif " + name + ": " + e.what());
      }
    }
  }
  return motifs;
}

Timestamp require_delta(const RunConfig& cfg) {
  if (!cfg.delta) throw UsageError("missing --delta");
  if (*cfg.delta <= 0) throw UsageError("--delta must be positive");
  return *cfg.delta;
}

void check_window_options(const RunConfig& cfg) {
  if (cfg.T && *cfg.T <= 0) throw UsageError("--T must be positive");
  if (cfg.end && *cfg.end <= cfg.origin) throw UsageError("--end must exceed --origin");
}

// ---- pipeline stages ---------------------------------------------------------

TemporalGraph load_graph(const std::string& path) {
  std::istringstream in(slurp(path));
  return parse_edge_list(in);
}

std::vector<TasbmModel> load_models(const std::string& path) {
  std::istringstream in(slurp(path));
  return read_models(in);
}

std::vector<WindowView> windows(const TemporalGraph& graph, const RunConfig& cfg) {
  const auto options = slicing(cfg);
  if (cfg.T) return window_slices(graph, *cfg.T, options);
  const TemporalGraph source = options.day_mask ? excise_days(graph, *options.day_mask) : graph;
  return {WindowView::whole(source)};
}

std::vector<TasbmModel> fit_models(const TemporalGraph& graph, const RunConfig& cfg) {
  const auto policy = bucket_policy(cfg.buckets);
  if (cfg.T) return fit_series(graph, *cfg.T, policy, !cfg.approx, slicing(cfg));
  return {fit_window(windows(graph, cfg).front(), policy, !cfg.approx)};
}

std::vector<CountRow> count_rows(const TemporalGraph& graph, const RunConfig& cfg,
                                 const std::vector<TemporalMotif>& motifs) {
  const Timestamp delta = require_delta(cfg);
  const auto views = windows(graph, cfg);
  std::vector<std::vector<CountResult>> slots(views.size());
  parallel_for(views.size(), [&](std::size_t i) { slots[i] = count_all(views[i], motifs, delta); });
  std::vector<CountRow> rows;
  for (const auto& slot : slots) {
    for (const auto& c : slot) rows.push_back({c.window, c.motif, c.count});
  }
  return rows;
}

std::vector<ExpectRow> expect_rows(const std::vector<TasbmModel>& models, const RunConfig& cfg,
                                   const std::vector<TemporalMotif>& motifs, bool with_variance,
                                   bool require_variance) {
  const double delta = static_cast<double>(require_delta(cfg));
  if (require_variance) {
    for (const auto& m : models) {
      if (!variance_supported(AnalysisConfig::for_model(m, delta))) {
        throw UnsupportedError("variance needs T = delta; window [" +
                               std::to_string(m.window.begin) + ", " +
                               std::to_string(m.window.end) + ") has T = " +
                               std::to_string(m.T()) + ", delta = " + format_real(delta));
      }
    }
  }
  std::vector<std::vector<ExpectationResult>> slots(models.size());
  parallel_for(models.size(), [&](std::size_t i) {
    slots[i] = expected_all(models[i], motifs, AnalysisConfig::for_model(models[i], delta),
                            with_variance);
  });
  std::vector<ExpectRow> rows;
  for (const auto& slot : slots) {
    for (const auto& e : slot) rows.push_back({e.window, e.motif, e.expected, e.variance});
  }
  return rows;
}

DetectOutcome detect_and_warn(const std::vector<CountRow>& counts,
                              const std::vector<ExpectRow>& expected, double threshold,
                              std::ostream& err) {
  if (!(threshold >= 0)) throw UsageError("--threshold must be non-negative");
  auto outcome = detect(counts, expected, threshold);
  for (const auto& motif : outcome.skipped) {
    err << "warning motif=" << motif << " message=\"fewer than 5 finite log-ratios; not flagged\"\n";
  }
  return outcome;
}

// ---- subcommands ---------------------------------------------------------------

void cmd_generate(const RunConfig& cfg, Outputs& outputs) {
  require_input(cfg.spec, "spec");
  require_output(cfg.output, {cfg.spec});
  require_output(cfg.audit, {cfg.spec});
  std::istringstream text(slurp(cfg.spec));
  auto spec = read_generator_spec(text);
  if (cfg.seed) spec.seed = *cfg.seed;
  const auto result = generate(spec);
  std::ostringstream edges;
  write_edge_list(result.graph, edges);
  outputs.add(cfg.output, edges.str());
  if (!cfg.audit.empty()) {
    std::ostringstream audit;
    write_audit(audit, result.injected);
    outputs.add(cfg.audit, audit.str());
  }
}

void cmd_preprocess(const RunConfig& cfg, Outputs& outputs) {
  require_input(cfg.input, "in");
  require_output(cfg.output, {cfg.input});
  if (!(cfg.degree_fraction >= 0 && cfg.degree_fraction <= 1)) {
    throw UsageError("--degree-fraction must lie in [0, 1]");
  }
  const auto mask = day_mask(cfg);
  auto graph = load_graph(cfg.input);
  if (mask) graph = excise_days(graph, *mask);
  std::ostringstream out;
  write_edge_list(preprocess(graph, cfg.degree_fraction, cfg.largest_component), out);
  outputs.add(cfg.output, out.str());
}

void cmd_fit(const RunConfig& cfg, Outputs& outputs) {
  require_input(cfg.input, "in");
  require_output(cfg.output, {cfg.input});
  check_window_options(cfg);
  bucket_policy(cfg.buckets);
  const auto models = fit_models(load_graph(cfg.input), cfg);
  std::ostringstream out;
  write_models(out, models);
  outputs.add(cfg.output, out.str());
}

void cmd_count(const RunConfig& cfg, Outputs& outputs) {
  require_input(cfg.input, "in");
  require_output(cfg.output, {cfg.input});
  check_window_options(cfg);
  require_delta(cfg);
  const auto motifs = motif_selection(cfg.motifs);
  outputs.add(cfg.output, write_counts(count_rows(load_graph(cfg.input), cfg, motifs)));
}

void cmd_expect(const RunConfig& cfg, Outputs& outputs, bool variance_only) {
  require_input(cfg.models, "model");
  require_output(cfg.output, {cfg.models});
  require_delta(cfg);
  const auto motifs = motif_selection(cfg.motifs);
  const auto models = load_models(cfg.models);
  outputs.add(cfg.output,
              write_expectations(expect_rows(models, cfg, motifs, variance_only || cfg.with_variance,
                                             variance_only)));
}

void cmd_detect(const RunConfig& cfg, Outputs& outputs, std::ostream& err) {
  require_input(cfg.counts, "counts");
  require_input(cfg.expected, "expected");
  require_output(cfg.output, {cfg.counts, cfg.expected});
  const auto counts = read_counts(slurp(cfg.counts));
  const auto expected = read_expectations(slurp(cfg.expected));
  outputs.add(cfg.output, write_detections(detect_and_warn(counts, expected, cfg.threshold, err).rows));
}

void cmd_report(const RunConfig& cfg, Outputs& outputs) {
  if (cfg.counts.empty() && cfg.expected.empty() && cfg.detections.empty()) {
    throw UsageError("report needs at least one of --counts, --expected, --detect");
  }
  for (const auto& [path, name] : {std::pair{cfg.counts, "counts"}, {cfg.expected, "expected"},
                                   {cfg.detections, "detect"}}) {
    if (!path.empty()) require_input(path, name);
  }
  require_output(cfg.output, {cfg.counts, cfg.expected, cfg.detections});
  const auto counts = cfg.counts.empty() ? std::vector<CountRow>{} : read_counts(slurp(cfg.counts));
  const auto expected =
      cfg.expected.empty() ? std::vector<ExpectRow>{} : read_expectations(slurp(cfg.expected));
  const auto detections =
      cfg.detections.empty() ? std::vector<DetectRow>{} : read_detections(slurp(cfg.detections));
  outputs.add(cfg.output, write_report(counts, expected, detections));
}

void cmd_pipeline(const RunConfig& cfg, Outputs& outputs, std::ostream& err) {
  require_input(cfg.input, "in");
  for (const auto& path :
       {cfg.output, cfg.models_out, cfg.counts_out, cfg.expected_out, cfg.detect_out}) {
    require_output(path, {cfg.input});
  }
  if (!cfg.T) throw UsageError("pipeline needs --T");
  check_window_options(cfg);
  require_delta(cfg);
  bucket_policy(cfg.buckets);
  const auto motifs = motif_selection(cfg.motifs);

  const auto graph = load_graph(cfg.input);
  const auto models = fit_models(graph, cfg);
  const auto counts = count_rows(graph, cfg, motifs);
  const auto expected = expect_rows(models, cfg, motifs, cfg.with_variance, false);
  const auto outcome = detect_and_warn(counts, expected, cfg.threshold, err);

  if (!cfg.models_out.empty()) {
    std::ostringstream out;
    write_models(out, models);
    outputs.add(cfg.models_out, out.str());
  }
  outputs.add(cfg.counts_out, write_counts(counts));
  outputs.add(cfg.expected_out, write_expectations(expected));
  outputs.add(cfg.detect_out, write_detections(outcome.rows));
  outputs.add(cfg.output, write_report(counts, expected, outcome.rows));
}

// ---- argument handling ---------------------------------------------------------

struct Parser {
  CLI::App app{"Temporal motif statistics under the temporal activity state block model."};
  std::string config_path;
  std::map<std::string, CLI::App*> commands;
  std::map<std::string, std::set<std::string>> flags;  // per subcommand

  explicit Parser(RunConfig& cfg) {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", config_path,
                   "Key/value file supplying any flag; the command line overrides it");

    auto* generate = command("generate", "Sample a network (and planted anomalies) from a spec");
    generate->add_option("--spec", cfg.spec, "Generator spec file")->required();
    generate->add_option("--out", cfg.output, "Edge list output (- for stdout)");
    generate->add_option("--audit", cfg.audit, "Injected-edge sidecar output");
    generate->add_option("--seed", cfg.seed, "Override the spec's seed");

    auto* pre = command("preprocess", "Drop self-loops, low-degree nodes, small components");
    pre->add_option("--in", cfg.input, "Edge list")->required();
    pre->add_option("--out", cfg.output, "Edge list output");
    pre->add_option("--degree-fraction", cfg.degree_fraction,
                    "Keep nodes with degree >= fraction * max degree");
    flag(pre, "--largest-component", cfg.largest_component,
         "Keep only the largest weakly connected component");
    day_options(pre, cfg);

    auto* fit = command("fit", "Fit one model per window");
    fit->add_option("--in", cfg.input, "Edge list")->required();
    fit->add_option("--out", cfg.output, "Model file output");
    window_options(fit, cfg);
    fit_options(fit, cfg);

    auto* count = command("count", "Count delta-instances per window");
    count->add_option("--in", cfg.input, "Edge list")->required();
    count->add_option("--out", cfg.output, "CSV output");
    count->add_option("--delta", cfg.delta, "Motif time span delta")->required();
    window_options(count, cfg);
    motif_option(count, cfg);

    auto* expect = command("expect", "Expected counts from fitted models");
    expect->add_option("--model", cfg.models, "Model file")->required();
    expect->add_option("--out", cfg.output, "CSV output");
    expect->add_option("--delta", cfg.delta, "Motif time span delta")->required();
    flag(expect, "--variance", cfg.with_variance, "Add variances where T = delta");
    motif_option(expect, cfg);

    auto* variance = command("variance", "Expected counts and variances (needs T = delta)");
    variance->add_option("--model", cfg.models, "Model file")->required();
    variance->add_option("--out", cfg.output, "CSV output");
    variance->add_option("--delta", cfg.delta, "Motif time span delta")->required();
    motif_option(variance, cfg);

    auto* detect = command("detect", "Flag windows whose log-ratio is a MAD outlier");
    detect->add_option("--counts", cfg.counts, "Count CSV")->required();
    detect->add_option("--expected", cfg.expected, "Expectation CSV")->required();
    detect->add_option("--out", cfg.output, "CSV output");
    detect->add_option("--threshold", cfg.threshold, "MAD units (default 3)");

    auto* report = command("report", "Join CSVs into a long-format table");
    report->add_option("--counts", cfg.counts, "Count CSV");
    report->add_option("--expected", cfg.expected, "Expectation CSV");
    report->add_option("--detect", cfg.detections, "Detection CSV");
    report->add_option("--out", cfg.output, "CSV output");

    auto* pipeline = command("pipeline", "fit, count, expect and detect in one run");
    pipeline->add_option("--in", cfg.input, "Edge list")->required();
    pipeline->add_option("--out", cfg.output, "Report CSV output");
    pipeline->add_option("--delta", cfg.delta, "Motif time span delta")->required();
    pipeline->add_option("--threshold", cfg.threshold, "MAD units (default 3)");
    flag(pipeline, "--variance", cfg.with_variance, "Add variances where T = delta");
    pipeline->add_option("--models-out", cfg.models_out, "Also write the fitted models");
    pipeline->add_option("--counts-out", cfg.counts_out, "Also write the count CSV");
    pipeline->add_option("--expected-out", cfg.expected_out, "Also write the expectation CSV");
    pipeline->add_option("--detect-out", cfg.detect_out, "Also write the detection CSV");
    window_options(pipeline, cfg);
    fit_options(pipeline, cfg);
    motif_option(pipeline, cfg);
  }

  CLI::App* command(const std::string& name, const std::string& description) {
    auto* sub = app.add_subcommand(name, description);
    commands[name] = sub;
    return sub;
  }

  void flag(CLI::App* sub, const std::string& name, bool& target, const std::string& help) {
    sub->add_flag(name, target, help);
    flags[sub->get_name()].insert(name);
  }

  void window_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--T", cfg.T, "Window length; omitted means one window over the whole graph");
    sub->add_option("--origin", cfg.origin, "Start of the first window (default 0)");
    sub->add_option("--end", cfg.end, "Exclusive end of the windowed range");
    day_options(sub, cfg);
  }

  void day_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--skip-days", cfg.skip_days, "Weekdays to remove, e.g. sat,sun");
    sub->add_option("--day-length", cfg.day_length, "Ticks per day (default 86400)");
    sub->add_option("--epoch-weekday", cfg.epoch_weekday, "Weekday of t = 0 (default thu)");
  }

  void fit_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--buckets", cfg.buckets,
                    "auto, single, gaps:Q, or comma-separated rate boundaries");
    flag(sub, "--approx", cfg.approx, "Approximate theta (one edge pass) instead of exact");
  }

  void motif_option(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--motif", cfg.motifs,
                    "Catalog label, motif literal, category name or all (default all)");
  }
};

bool given(const std::vector<std::string>& args, const std::string& name) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == name || a.rfind(name + "=", 0) == 0;
  });
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

// Appends config-file entries for flags not on the command line. Leading
// entries apply to every subcommand; a [name] section only to that one.
std::vector<std::string> merge_config(const Parser& parser, std::vector<std::string> args) {
  const auto path = config_path(args);
  if (path.empty()) return args;
  std::string name;
  for (const auto& a : args) {
    if (parser.commands.count(a)) {
      name = a;
      break;
    }
  }
  if (name.empty()) return args;
  require_input(path, "config");
  std::istringstream text(slurp(path));
  const auto doc = parse_text(text);
  const auto* sub = parser.commands.at(name);
  const auto& sub_flags = parser.flags.count(name) ? parser.flags.at(name) : std::set<std::string>{};

  std::map<std::string, const TextEntry*> chosen;
  for (const auto& section : doc.sections) {
    if (!section.name.empty() && !parser.commands.count(section.name)) {
      throw ParseError(section.line, "unknown section [" + section.name + "]");
    }
    if (!section.name.empty() && section.name != name) continue;
    for (const auto& entry : section.entries) {
      const std::string option = "--" + entry.key;
      // Shared entries may name options other subcommands do not have.
      if (!sub->get_option_no_throw(option)) {
        if (section.name.empty()) continue;
        throw ParseError(entry.line, "unknown option " + entry.key + " for " + name);
      }
      chosen[option] = &entry;
    }
  }
  for (const auto& [option, entry] : chosen) {
    if (given(args, option) || option == "--config") continue;
    if (sub_flags.count(option)) {
      const auto& v = entry->values;
      if (v.empty() || (v.size() == 1 && (v[0] == "true" || v[0] == "1"))) {
        args.push_back(option);
      } else if (!(v.size() == 1 && (v[0] == "false" || v[0] == "0"))) {
        throw ParseError(entry->line, entry->key + " takes true or false");
      }
      continue;
    }
    if (entry->values.empty()) throw ParseError(entry->line, entry->key + " needs a value");
    args.push_back(option);
    args.insert(args.end(), entry->values.begin(), entry->values.end());
  }
  return args;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

int fail(std::ostream& err, const char* kind, std::string_view message, int code) {
  err << "error kind=" << kind << " message=\"" << escape(message) << "\"\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Parser parser(cfg);
  try {
    auto merged = merge_config(parser, args);
    std::reverse(merged.begin(), merged.end());
    parser.app.parse(merged);
    for (const auto& [name, sub] : parser.commands) {
      if (sub->parsed()) cfg.subcommand = name;
    }

    Outputs outputs;
    const auto& s = cfg.subcommand;
    if (s == "generate") cmd_generate(cfg, outputs);
    else if (s == "preprocess") cmd_preprocess(cfg, outputs);
    else if (s == "fit") cmd_fit(cfg, outputs);
    else if (s == "count") cmd_count(cfg, outputs);
    else if (s == "expect") cmd_expect(cfg, outputs, false);
    else if (s == "variance") cmd_expect(cfg, outputs, true);
    else if (s == "detect") cmd_detect(cfg, outputs, err);
    else if (s == "report") cmd_report(cfg, outputs);
    else if (s == "pipeline") cmd_pipeline(cfg, outputs, err);
    outputs.commit(out);
    return ExitCode::ok;
  } catch (const CLI::CallForHelp&) {
    out << parser.app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << parser.app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    return fail(err, "usage", e.what(), ExitCode::usage);
  } catch (const UsageError& e) {
    return fail(err, "usage", e.what(), ExitCode::usage);
  } catch (const UnsupportedError& e) {
    return fail(err, "unsupported", e.what(), ExitCode::unsupported);
  } catch (const ParseError& e) {
    return fail(err, "parse", e.what(), ExitCode::data);
  } catch (const IoError& e) {
    return fail(err, "io", e.what(), ExitCode::data);
  } catch (const OverflowError& e) {
    return fail(err, "overflow", e.what(), ExitCode::data);
  } catch (const UndefinedResultError& e) {
    return fail(err, "undefined", e.what(), ExitCode::data);
  } catch (const Error& e) {
    return fail(err, "data", e.what(), ExitCode::data);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), ExitCode::data);
  }
}

}  // namespace tasbm::cli
