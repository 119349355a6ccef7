#include "cli.hpp"

#include <CLI11.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "procnet/bench.hpp"

namespace procnet::cli {

namespace {

constexpr int kUsage = 3;

struct Raw {
  std::string designs;
  std::vector<std::string> dims;
  std::uint64_t seed = 42;
  int width = Word::kDefaultWidth;
  std::uint64_t max_cycles = 1'000'000;
  std::string format = "table";
  bool small_values = false;
  std::string k_values;
};

void add_common(CLI::App* sub, Raw& raw, const std::string& default_designs) {
  raw.designs = default_designs;
  sub->add_option("--designs", raw.designs, "comma-separated designs, d1..d5")
      ->capture_default_str();
  sub->add_option("--dims", raw.dims, "n,m,k (repeatable)")->allow_extra_args(false);
  sub->add_option("--seed", raw.seed, "seed for the input matrices")->capture_default_str();
  sub->add_option("--width", raw.width, "word width in bits, 4..64")->capture_default_str();
  sub->add_option("--max-cycles", raw.max_cycles, "cycle budget per run")
      ->capture_default_str();
  sub->add_option("--format", raw.format, "json, csv or table")->capture_default_str();
  sub->add_flag("--small-values", raw.small_values, "draw entries from [-8, 8]");
}

bench::Config to_config(const Raw& raw) {
  bench::Config c;
  c.designs = bench::parse_designs(raw.designs);
  for (const auto& d : raw.dims) c.dims.push_back(bench::parse_dims(d));
  if (c.dims.empty()) c.dims.push_back({3, 3, 3});
  c.seed = raw.seed;
  c.width = raw.width;
  c.max_cycles = raw.max_cycles;
  const auto f = bench::parse_format(raw.format);
  if (!f) throw bench::UsageError("format: expected json, csv or table, got '" + raw.format + "'");
  c.format = *f;
  c.small_values = raw.small_values;
  if (!raw.k_values.empty()) {
    std::size_t start = 0;
    while (start <= raw.k_values.size()) {
      const std::size_t at = raw.k_values.find(',', start);
      const std::string part = raw.k_values.substr(start, at == std::string::npos ? at : at - start);
      try {
        std::size_t used = 0;
        const unsigned long long k = std::stoull(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        c.k_values.push_back(static_cast<std::size_t>(k));
      } catch (const std::exception&) {
        throw bench::UsageError("k_values: not a non-negative integer: '" + part + "'");
      }
      if (at == std::string::npos) break;
      start = at + 1;
    }
  }
  bench::validate(c);
  return c;
}

void emit(const std::vector<bench::RunReport>& reports, bench::Format f, std::ostream& out) {
  switch (f) {
    case bench::Format::Json: out << bench::to_json(reports); break;
    case bench::Format::Csv: out << bench::to_csv(reports); break;
    case bench::Format::Table: out << bench::to_table(reports); break;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate the matrix-multiplication process networks and report cost metrics."};
  app.name("procnet-bench");
  app.require_subcommand(1);
  Raw run_raw, compare_raw, sweep_raw;
  CLI::App* run_cmd = app.add_subcommand("run", "run each design on each dims and verify");
  add_common(run_cmd, run_raw, "d1,d2,d3,d4,d5");
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "one row per design, sorted by throughput");
  add_common(compare_cmd, compare_raw, "d1,d2,d3,d4,d5");
  CLI::App* sweep_cmd = app.add_subcommand("sweep-k", "cycles against k for pipelined designs");
  add_common(sweep_cmd, sweep_raw, "d3,d4,d5");
  sweep_cmd->add_option("--k-values", sweep_raw.k_values, "comma-separated k; 1 is always added");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const bench::Config c = to_config(run_raw);
      const auto reports = bench::cmd_run(c);
      emit(reports, c.format, out);
      return bench::exit_code(reports);
    }
    if (compare_cmd->parsed()) {
      const bench::Config c = to_config(compare_raw);
      const auto reports = bench::cmd_compare(c);
      emit(reports, c.format, out);
      return bench::exit_code(reports);
    }
    const bench::Config c = to_config(sweep_raw);
    const auto series = bench::cmd_sweep_k(c);
    if (c.format == bench::Format::Table) {
      out << bench::to_table(series);
    } else {
      std::vector<bench::RunReport> points;
      for (const auto& s : series) {
        points.insert(points.end(), s.points.begin(), s.points.end());
        err << to_string(s.design) << " n=" << s.n << " m=" << s.m << ": slope " << s.slope
            << ", intercept " << s.intercept << ", max residual " << s.max_residual
            << (s.affine ? " (affine)" : " (not affine)") << "\n";
      }
      emit(points, c.format, out);
    }
    return bench::exit_code(series);
  } catch (const bench::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace procnet::cli
