#include "procnet/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "procnet/errors.hpp"

namespace procnet::bench {

using Json = nlohmann::ordered_json;

std::optional<Format> parse_format(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table") return Format::Table;
  return std::nullopt;
}

const char* to_string(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Table: return "table";
  }
  return "?";
}

std::optional<RunStatus> parse_status(std::string_view s) {
  for (RunStatus st : {RunStatus::Completed, RunStatus::Deadlock, RunStatus::CycleBudgetExceeded,
                       RunStatus::ProtocolError}) {
    if (s == procnet::to_string(st)) return st;
  }
  return std::nullopt;
}

void validate(const Config& c) {
  if (c.width < 4 || c.width > 64) {
    throw UsageError("width: must be in [4, 64], got " + std::to_string(c.width));
  }
  if (c.max_cycles < 1) throw UsageError("max_cycles: must be at least 1");
  if (c.dims.empty()) throw UsageError("dims: at least one n,m,k triple is needed");
  for (const Dims& d : c.dims) {
    if (d.n == 0 || d.m == 0 || d.k == 0) {
      throw UsageError("dims: every dimension must be at least 1, got " + to_string(d));
    }
  }
  if (c.designs.empty()) throw UsageError("designs: at least one design is needed");
  for (std::size_t k : c.k_values) {
    if (k == 0) throw UsageError("k_values: every k must be at least 1");
  }
}

namespace {

std::size_t parse_size(std::string_view s, const char* field) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw UsageError(std::string(field) + ": not a non-negative integer: '" + std::string(s) +
                     "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos
                                                              : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

}  // namespace

Dims parse_dims(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("dims: expected n,m,k, got '" + std::string(s) + "'");
  return {parse_size(parts[0], "dims"), parse_size(parts[1], "dims"),
          parse_size(parts[2], "dims")};
}

std::vector<DesignId> parse_designs(std::string_view s) {
  std::vector<DesignId> out;
  for (std::string_view part : split(s, ',')) {
    const auto id = parse_design(part);
    if (!id) throw UsageError("designs: unknown design '" + std::string(part) + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  return out;
}

Inputs make_inputs(std::uint64_t seed, const Dims& d, int width, bool small_values) {
  // seed_seq and mt19937_64 are fully specified, so inputs are portable.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d.n), static_cast<std::uint32_t>(d.m),
                    static_cast<std::uint32_t>(d.k), static_cast<std::uint32_t>(width)};
  std::mt19937_64 rng(seq);
  const auto draw = [&]() {
    const std::uint64_t r = rng();
    if (small_values) return Word::wrap(static_cast<std::int64_t>(r % 17) - 8, width);
    return Word::wrap(static_cast<std::int64_t>(r), width);
  };
  Inputs in{Matrix(d.n, d.m, Orientation::ByRows, width),
            Matrix(d.m, d.k, Orientation::ByCols, width)};
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.m; ++j) in.ass.set(i, j, draw());
  }
  for (std::size_t j = 0; j < d.k; ++j) {
    for (std::size_t i = 0; i < d.m; ++i) in.bss.set(i, j, draw());
  }
  return in;
}

RunReport run_one(DesignId id, const Dims& d, const Config& c) {
  const Inputs in = make_inputs(c.seed, d, c.width, c.small_values);
  BuiltDesign b = build_design(id, in.ass, in.bss);
  const RunResult r = b.network.run_to_completion(c.max_cycles);
  RunReport rep;
  rep.design = id;
  rep.dims = d;
  rep.cycles = r.metrics.cycles;
  rep.communications = r.metrics.communications;
  rep.process_count = r.metrics.process_count;
  rep.channel_count = r.metrics.channel_count;
  rep.items_out = r.metrics.items_out;
  rep.throughput_items_per_cycle = r.metrics.throughput().value_or(0.0);
  rep.warnings = b.network.warnings();
  rep.status = r.status;
  if (r.ok()) {
    rep.verified = b.collect() == mmult_ref(in.ass, in.bss);
  } else {
    rep.diagnostic = r.diagnostic;
  }
  return rep;
}

namespace {

bool key_less(const RunReport& a, const RunReport& b) {
  if (a.design != b.design) return a.design < b.design;
  return a.dims < b.dims;
}

}  // namespace

std::vector<RunReport> cmd_run(const Config& c) {
  validate(c);
  std::vector<RunReport> out;
  for (DesignId id : c.designs) {
    for (const Dims& d : c.dims) out.push_back(run_one(id, d, c));
  }
  std::stable_sort(out.begin(), out.end(), key_less);
  return out;
}

std::vector<RunReport> cmd_compare(const Config& c) {
  if (c.designs.size() < 2) {
    throw UsageError("designs: compare needs at least two designs, got " +
                     std::to_string(c.designs.size()));
  }
  std::vector<RunReport> out = cmd_run(c);
  std::stable_sort(out.begin(), out.end(), [](const RunReport& a, const RunReport& b) {
    return a.throughput_items_per_cycle > b.throughput_items_per_cycle;
  });
  return out;
}

void fit_affine(SweepSeries& s) {
  std::vector<std::pair<double, double>> pts;
  std::set<std::size_t> ks;
  bool all_completed = true;
  for (const RunReport& r : s.points) {
    if (r.status != RunStatus::Completed) {
      all_completed = false;
      continue;
    }
    pts.emplace_back(static_cast<double>(r.dims.k), static_cast<double>(r.cycles));
    ks.insert(r.dims.k);
  }
  s.slope = s.intercept = s.max_residual = 0.0;
  s.affine = false;
  if (ks.size() < 2) return;
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  s.slope = sxy / sxx;
  s.intercept = my - s.slope * mx;
  for (const auto& [x, y] : pts) {
    s.max_residual = std::max(s.max_residual, std::abs(y - (s.slope * x + s.intercept)));
  }
  s.affine = all_completed && s.max_residual < kAffineTolerance;
}

std::vector<SweepSeries> cmd_sweep_k(const Config& c) {
  validate(c);
  for (DesignId id : c.designs) {
    if (!is_pipelined(id)) {
      throw UsageError(std::string("designs: sweep-k needs a pipelined design (d3, d4, d5), got ") +
                       to_string(id) + "; use compare for the others");
    }
  }
  std::set<std::size_t> ks(c.k_values.begin(), c.k_values.end());
  if (ks.empty()) ks = {2, 4, 8, 16, 32};
  ks.insert(1);
  std::set<std::pair<std::size_t, std::size_t>> planes;
  for (const Dims& d : c.dims) planes.emplace(d.n, d.m);

  std::vector<DesignId> designs = c.designs;
  std::sort(designs.begin(), designs.end());
  std::vector<SweepSeries> out;
  for (DesignId id : designs) {
    for (const auto& [n, m] : planes) {
      SweepSeries s;
      s.design = id;
      s.n = n;
      s.m = m;
      for (std::size_t k : ks) s.points.push_back(run_one(id, {n, m, k}, c));
      fit_affine(s);
      out.push_back(std::move(s));
    }
  }
  return out;
}

int exit_code(const std::vector<RunReport>& reports) {
  int code = 0;
  for (const RunReport& r : reports) {
    if (r.status != RunStatus::Completed) return 2;
    if (!r.verified) code = 1;
  }
  return code;
}

int exit_code(const std::vector<SweepSeries>& series) {
  int code = 0;
  for (const SweepSeries& s : series) {
    const int c = exit_code(s.points);
    if (c == 2) return 2;
    if (c == 1 || !s.affine) code = 1;
  }
  return code;
}

// ---- JSON ----

namespace {

Json report_json(const RunReport& r) {
  Json j;
  j["design"] = to_string(r.design);
  j["dims"] = {{"n", r.dims.n}, {"m", r.dims.m}, {"k", r.dims.k}};
  j["cycles"] = r.cycles;
  j["communications"] = r.communications;
  j["process_count"] = r.process_count;
  j["channel_count"] = r.channel_count;
  j["items_out"] = r.items_out;
  j["throughput_items_per_cycle"] = r.throughput_items_per_cycle;
  j["verified"] = r.verified;
  j["warnings"] = r.warnings;
  j["status"] = procnet::to_string(r.status);
  j["diagnostic"] = r.diagnostic;
  return j;
}

DesignId design_field(const std::string& s) {
  const auto id = parse_design(s);
  if (!id) throw std::invalid_argument("unknown design '" + s + "'");
  return *id;
}

RunStatus status_field(const std::string& s) {
  const auto st = parse_status(s);
  if (!st) throw std::invalid_argument("unknown status '" + s + "'");
  return *st;
}

}  // namespace

std::string to_json(const std::vector<RunReport>& reports) {
  Json arr = Json::array();
  for (const RunReport& r : reports) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

std::vector<RunReport> parse_json(std::string_view text) {
  std::vector<RunReport> out;
  try {
    const Json arr = Json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("report JSON must be an array");
    for (const Json& j : arr) {
      RunReport r;
      r.design = design_field(j.at("design").get<std::string>());
      r.dims = {j.at("dims").at("n").get<std::size_t>(), j.at("dims").at("m").get<std::size_t>(),
                j.at("dims").at("k").get<std::size_t>()};
      r.cycles = j.at("cycles").get<std::uint64_t>();
      r.communications = j.at("communications").get<std::uint64_t>();
      r.process_count = j.at("process_count").get<std::size_t>();
      r.channel_count = j.at("channel_count").get<std::size_t>();
      r.items_out = j.at("items_out").get<std::uint64_t>();
      r.throughput_items_per_cycle = j.at("throughput_items_per_cycle").get<double>();
      r.verified = j.at("verified").get<bool>();
      r.warnings = j.at("warnings").get<std::vector<std::string>>();
      r.status = status_field(j.at("status").get<std::string>());
      r.diagnostic = j.at("diagnostic").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad report JSON: ") + e.what());
  }
  return out;
}

// ---- CSV ----

namespace {

constexpr const char* kCsvHeader =
    "design,dims,cycles,communications,process_count,channel_count,items_out,"
    "throughput_items_per_cycle,verified,warnings,status,diagnostic";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string dims_cell(const Dims& d) {
  return std::to_string(d.n) + "x" + std::to_string(d.m) + "x" + std::to_string(d.k);
}

/// RFC 4180 records: quoted fields may hold separators and doubled quotes.
std::vector<std::vector<std::string>> csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
      continue;
    }
    any = true;
    if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw std::invalid_argument("bad report CSV: unterminated quote");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
T number_cell(const std::string& s, const char* name) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string("bad report CSV: field ") + name + " = '" + s + "'");
  }
  return v;
}

}  // namespace

std::string to_csv(const std::vector<RunReport>& reports) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const RunReport& r : reports) {
    out += csv_field(to_string(r.design)) + ",";
    out += dims_cell(r.dims) + ",";
    out += std::to_string(r.cycles) + ",";
    out += std::to_string(r.communications) + ",";
    out += std::to_string(r.process_count) + ",";
    out += std::to_string(r.channel_count) + ",";
    out += std::to_string(r.items_out) + ",";
    out += shortest(r.throughput_items_per_cycle) + ",";
    out += std::string(r.verified ? "true" : "false") + ",";
    out += csv_field(Json(r.warnings).dump()) + ",";
    out += csv_field(procnet::to_string(r.status)) + ",";
    out += csv_field(r.diagnostic) + "\n";
  }
  return out;
}

std::vector<RunReport> parse_csv(std::string_view text) {
  const auto rows = csv_records(text);
  if (rows.empty()) throw std::invalid_argument("bad report CSV: missing header");
  const auto header = split(kCsvHeader, ',');
  if (rows[0].size() != header.size() ||
      !std::equal(header.begin(), header.end(), rows[0].begin())) {
    throw std::invalid_argument("bad report CSV: unexpected header");
  }
  std::vector<RunReport> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != header.size()) {
      throw std::invalid_argument("bad report CSV: row " + std::to_string(i) + " has " +
                                  std::to_string(f.size()) + " fields");
    }
    RunReport r;
    r.design = design_field(f[0]);
    const auto d = split(f[1], 'x');
    if (d.size() != 3) throw std::invalid_argument("bad report CSV: dims '" + f[1] + "'");
    r.dims = {number_cell<std::size_t>(std::string(d[0]), "dims"),
              number_cell<std::size_t>(std::string(d[1]), "dims"),
              number_cell<std::size_t>(std::string(d[2]), "dims")};
    r.cycles = number_cell<std::uint64_t>(f[2], "cycles");
    r.communications = number_cell<std::uint64_t>(f[3], "communications");
    r.process_count = number_cell<std::size_t>(f[4], "process_count");
    r.channel_count = number_cell<std::size_t>(f[5], "channel_count");
    r.items_out = number_cell<std::uint64_t>(f[6], "items_out");
    r.throughput_items_per_cycle = number_cell<double>(f[7], "throughput_items_per_cycle");
    if (f[8] != "true" && f[8] != "false") {
      throw std::invalid_argument("bad report CSV: verified = '" + f[8] + "'");
    }
    r.verified = f[8] == "true";
    try {
      r.warnings = Json::parse(f[9]).get<std::vector<std::string>>();
    } catch (const Json::exception& e) {
      throw std::invalid_argument(std::string("bad report CSV: warnings: ") + e.what());
    }
    r.status = status_field(f[10]);
    r.diagnostic = f[11];
    out.push_back(std::move(r));
  }
  return out;
}

// ---- tables ----

namespace {

std::string fixed(double x, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t w, bool right) {
  if (s.size() >= w) return s;
  const std::string fill(w - s.size(), ' ');
  return right ? fill + s : s + fill;
}

std::string render(const std::vector<std::vector<std::string>>& rows,
                   const std::vector<bool>& right) {
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += pad(row[c], widths[c], right[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string notes(const std::vector<RunReport>& reports) {
  std::string out;
  for (const RunReport& r : reports) {
    const std::string tag = std::string(to_string(r.design)) + " " + to_string(r.dims);
    for (const auto& w : r.warnings) out += "warning: " + tag + ": " + w + "\n";
    if (!r.diagnostic.empty()) out += "failure: " + tag + ": " + r.diagnostic + "\n";
  }
  return out;
}

}  // namespace

std::string to_table(const std::vector<RunReport>& reports) {
  std::vector<std::vector<std::string>> rows = {{"design", "dims", "processes", "channels",
                                                 "cycles", "comms", "items", "items/cycle",
                                                 "verified", "status"}};
  for (const RunReport& r : reports) {
    rows.push_back({to_string(r.design), to_string(r.dims), std::to_string(r.process_count),
                    std::to_string(r.channel_count), std::to_string(r.cycles),
                    std::to_string(r.communications), std::to_string(r.items_out),
                    fixed(r.throughput_items_per_cycle, 4), r.verified ? "yes" : "no",
                    procnet::to_string(r.status)});
  }
  return render(rows, {false, false, true, true, true, true, true, true, false, false}) +
         notes(reports);
}

std::string to_table(const std::vector<SweepSeries>& series) {
  std::string out;
  for (const SweepSeries& s : series) {
    if (!out.empty()) out += "\n";
    out += std::string(to_string(s.design)) + " n=" + std::to_string(s.n) +
           " m=" + std::to_string(s.m) + ": cycles = " + fixed(s.slope, 3) + " * k + " +
           fixed(s.intercept, 3) + ", max residual " + fixed(s.max_residual, 3) +
           (s.affine ? " (affine)" : " (not affine)") + "\n";
    std::vector<std::vector<std::string>> rows = {
        {"k", "cycles", "processes", "channels", "items/cycle", "verified"}};
    for (const RunReport& r : s.points) {
      rows.push_back({std::to_string(r.dims.k), std::to_string(r.cycles),
                      std::to_string(r.process_count), std::to_string(r.channel_count),
                      fixed(r.throughput_items_per_cycle, 4), r.verified ? "yes" : "no"});
    }
    out += render(rows, {true, true, true, true, true, false}) + notes(s.points);
  }
  return out;
}

}  // namespace procnet::bench
