#pragma once

// Benchmark harness: seeded inputs, oracle verification, and report
// emission. Reports are pure data; all printing happens in the CLI.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "procnet/designs.hpp"

namespace procnet::bench {

enum class Format { Json, Csv, Table };

std::optional<Format> parse_format(std::string_view s);
const char* to_string(Format f);

/// Invalid configuration or command usage; maps to exit code 3.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  int width = Word::kDefaultWidth;
  std::uint64_t max_cycles = 1'000'000;
  std::uint64_t seed = 42;
  std::vector<Dims> dims;
  std::vector<DesignId> designs;
  Format format = Format::Table;
  /// Draw matrix entries from [-8, 8] instead of the whole word range.
  bool small_values = false;
  /// k values for sweep-k; the k of each dims entry is ignored there.
  std::vector<std::size_t> k_values;
};

/// Throws UsageError naming the offending field.
void validate(const Config& c);

/// Parses "n,m,k"; throws UsageError.
Dims parse_dims(std::string_view s);
/// Parses "d1,d3,..."; throws UsageError.
std::vector<DesignId> parse_designs(std::string_view s);

std::optional<RunStatus> parse_status(std::string_view s);

struct RunReport {
  DesignId design{};
  Dims dims;
  std::uint64_t cycles = 0;
  std::uint64_t communications = 0;
  std::size_t process_count = 0;
  std::size_t channel_count = 0;
  std::uint64_t items_out = 0;
  double throughput_items_per_cycle = 0.0;
  /// css matched the oracle exactly; false for any run that did not complete.
  bool verified = false;
  std::vector<std::string> warnings;
  /// Anything but Completed counts as non-termination.
  RunStatus status = RunStatus::Completed;
  /// Failure text of a run that did not complete; empty otherwise.
  std::string diagnostic;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// The input pair for (seed, dims, width); identical for every design.
struct Inputs {
  Matrix ass;
  Matrix bss;
};
Inputs make_inputs(std::uint64_t seed, const Dims& d, int width, bool small_values);

/// Runs one design on the seeded inputs. Never throws for run failures; they
/// are recorded in the report.
RunReport run_one(DesignId id, const Dims& d, const Config& c);

/// Every (design, dims) pair, in (design, dims) key order.
std::vector<RunReport> cmd_run(const Config& c);

/// Needs at least two designs. Rows sorted by throughput, highest first.
std::vector<RunReport> cmd_compare(const Config& c);

struct SweepSeries {
  DesignId design{};
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<RunReport> points;
  /// Least-squares fit cycles = slope * k + intercept over every point.
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  bool affine = false;
};

inline constexpr double kAffineTolerance = 1.0;

/// Fits cycles against k. Needs at least two distinct k.
void fit_affine(SweepSeries& s);

/// Pipelined designs only; k = 1 is always part of the series.
std::vector<SweepSeries> cmd_sweep_k(const Config& c);

/// 0 ok, 1 verification failure, 2 deadlock or budget.
int exit_code(const std::vector<RunReport>& reports);
int exit_code(const std::vector<SweepSeries>& series);

std::string to_json(const std::vector<RunReport>& reports);
std::string to_csv(const std::vector<RunReport>& reports);
std::string to_table(const std::vector<RunReport>& reports);
std::string to_table(const std::vector<SweepSeries>& series);

/// Inverse of to_json / to_csv; throws std::invalid_argument on bad input.
std::vector<RunReport> parse_json(std::string_view text);
std::vector<RunReport> parse_csv(std::string_view text);

}  // namespace procnet::bench
