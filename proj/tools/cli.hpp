#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tasbm::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2, unsupported = 3 };

// Everything a subcommand may read. Paths are empty when not given; "-" as an
// output path means standard output.
struct RunConfig {
  std::string subcommand;

  std::string input;  // edge list
  std::string spec;
  std::string models;
  std::string counts;
  std::string expected;
  std::string detections;

  std::string output = "-";
  std::string audit;
  std::string models_out;
  std::string counts_out;
  std::string expected_out;
  std::string detect_out;

  std::optional<std::int64_t> T;
  std::optional<std::int64_t> delta;
  std::int64_t origin = 0;
  std::optional<std::int64_t> end;

  std::string buckets = "auto";
  bool approx = false;
  std::vector<std::string> motifs;
  std::optional<std::uint64_t> seed;
  bool with_variance = false;
  double threshold = 3.0;

  double degree_fraction = 0.0;
  bool largest_component = false;

  std::string skip_days;
  std::int64_t day_length = 86400;
  std::string epoch_weekday = "thu";
};

// Runs one invocation; args exclude the program name. Diagnostics go to
// `err` as `error kind=<kind> message="<text>"`. Files are written only after
// the whole subcommand succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tasbm::cli
