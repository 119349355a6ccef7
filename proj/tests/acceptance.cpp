// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "procnet/bench.hpp"
#include "procnet/combinators.hpp"
#include "procnet/constructs.hpp"
#include "procnet/designs.hpp"
#include "procnet/oracle.hpp"
#include "support/gen.hpp"

using namespace procnet;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Instance {
  Matrix ass;
  Matrix bss;
};

Instance random_instance(gen::Rng& rng, Dims d) {
  return {gen::matrix(rng, d.n, d.m, Orientation::ByRows),
          gen::matrix(rng, d.m, d.k, Orientation::ByCols)};
}

// ---- 1: every design equals the oracle ----

Verdict oracle_equivalence() {
  const auto t0 = Clock::now();
  gen::Rng rng(1001);
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  std::string first;
  for (int t = 0; t < 100; ++t) {
    const Dims d{gen::count(rng, 1, 6), gen::count(rng, 1, 6), gen::count(rng, 1, 6)};
    const Instance x = random_instance(rng, d);
    const Matrix expected = mmult_ref(x.ass, x.bss);
    for (DesignId id : kAllDesigns) {
      ++runs;
      const DesignRun r = run_design(id, x.ass, x.bss, 1'000'000);
      if (!(r.css == expected)) {
        if (mismatches++ == 0) first = std::string(to_string(id)) + " at " + to_string(d);
      }
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = mismatches == 0 && secs < 60.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu runs, %zu mismatches, %.2f s", runs, mismatches, secs);
  v.detail = buf;
  if (!first.empty()) v.detail += ", first mismatch " + first;
  return v;
}

// ---- 2: combinators refine their list functions ----

Value map_ref(const std::function<Value(const Value&)>& f, const Value& xs) {
  Value::List out;
  for (const auto& x : xs.items()) out.push_back(f(x));
  return Value::list(std::move(out));
}

Value zipwith_ref(const std::function<Value(const Value&, const Value&)>& f, const Value& xs,
                  const Value& ys) {
  Value::List out;
  for (std::size_t i = 0; i < xs.items().size(); ++i) {
    out.push_back(f(xs.items()[i], ys.items()[i]));
  }
  return Value::list(std::move(out));
}

Value foldr_ref(const std::function<Value(const Value&, const Value&)>& f, const Value& e,
                const Value& xs) {
  Value acc = e;
  for (auto it = xs.items().rbegin(); it != xs.items().rend(); ++it) acc = f(*it, acc);
  return acc;
}

struct UnaryFn {
  Unary proc;
  std::function<Value(const Value&)> ref;
};

UnaryFn random_unary(gen::Rng& rng) {
  const Word c = gen::word(rng);
  switch (gen::integer(rng, 0, 2)) {
    case 0:
      return {feed_second(produce(Shape::item(), Value(c)), adder()),
              [c](const Value& x) { return Value(x.word() + c); }};
    case 1:
      return {feed_second(produce(Shape::item(), Value(c)), multiplier()),
              [c](const Value& x) { return Value(x.word() * c); }};
    default:
      return {lifted("square", Shape::item(), Shape::item(),
                     [](const Value& x) { return Value(x.word() * x.word()); }),
              [](const Value& x) { return Value(x.word() * x.word()); }};
  }
}

struct BinaryFn {
  Binary proc;
  std::function<Value(const Value&, const Value&)> ref;
};

BinaryFn random_binary(gen::Rng& rng) {
  if (gen::integer(rng, 0, 1) == 0) {
    return {adder(), [](const Value& x, const Value& y) { return Value(x.word() + y.word()); }};
  }
  return {multiplier(), [](const Value& x, const Value& y) { return Value(x.word() * y.word()); }};
}

Value stream_of(gen::Rng& rng, std::size_t n) { return Value::words(gen::words(rng, n)); }

Verdict refinement_soundness() {
  struct Tally {
    const char* name;
    int agree = 0;
  };
  std::vector<Tally> tally = {{"smap"},    {"vmap"},  {"szipwith"},
                              {"vzipwith"}, {"vfoldr"}, {"decompose_map"}};
  constexpr int kCases = 50;
  const auto ok = [](const Evaluation& e, const Value& expected) {
    return e.run.ok() && e.value == expected;
  };
  gen::Rng rng(2002);
  for (int t = 0; t < kCases; ++t) {
    {
      const UnaryFn f = random_unary(rng);
      const Value xs = stream_of(rng, gen::count(rng, 0, 8));
      tally[0].agree += ok(evaluate(smap(f.proc), xs), map_ref(f.ref, xs));
    }
    {
      const UnaryFn f = random_unary(rng);
      const std::size_t n = gen::count(rng, 1, 8);
      const Value xs = stream_of(rng, n);
      tally[1].agree += ok(evaluate(vmap(n, f.proc), xs), map_ref(f.ref, xs));
    }
    {
      const BinaryFn f = random_binary(rng);
      const std::size_t n = gen::count(rng, 0, 8);
      const Value xs = stream_of(rng, n);
      const Value ys = stream_of(rng, n);
      tally[2].agree += ok(evaluate(szipwith(f.proc), xs, ys), zipwith_ref(f.ref, xs, ys));
    }
    {
      const BinaryFn f = random_binary(rng);
      const std::size_t n = gen::count(rng, 1, 8);
      const Value xs = stream_of(rng, n);
      const Value ys = stream_of(rng, n);
      tally[3].agree += ok(evaluate(vzipwith(n, f.proc), xs, ys), zipwith_ref(f.ref, xs, ys));
    }
    {
      const BinaryFn f = random_binary(rng);
      const std::size_t n = gen::count(rng, 1, 8);
      const Value xs = stream_of(rng, n);
      const Value e(gen::word(rng));
      tally[4].agree += ok(evaluate(vfoldr(n, f.proc, e), xs), foldr_ref(f.ref, e, xs));
    }
    {
      // h m x = foldr (\a y -> y + a*x) e m, decomposed into one stage per a.
      const auto step = [](const Value& a, const Value& x, const Value& y) {
        return Value(y.word() + a.word() * x.word());
      };
      PipelineSpecArgs args{Shape::item(), Shape::item(), step, Value(gen::word(rng)), {}};
      for (Word a : gen::words(rng, gen::count(rng, 1, 8))) args.m.emplace_back(a);
      const Value xs = stream_of(rng, gen::count(rng, 0, 8));
      const auto h = [&](const Value& x) {
        Value y = args.e;
        for (auto it = args.m.rbegin(); it != args.m.rend(); ++it) y = step(*it, x, y);
        return y;
      };
      tally[5].agree += ok(evaluate(decompose_map(args), xs), map_ref(h, xs));
    }
  }
  Verdict v;
  for (const auto& t : tally) {
    if (!v.detail.empty()) v.detail += ", ";
    v.detail += std::string(t.name) + " " + std::to_string(t.agree) + "/" + std::to_string(kCases);
    v.pass = v.pass && t.agree == kCases;
  }
  return v;
}

// ---- 3: shared broadcast versus per-column producers ----

Verdict broadcast_equivalence() {
  gen::Rng rng(3003);
  int agree = 0;
  constexpr int kCases = 20;
  for (int t = 0; t < kCases; ++t) {
    const Instance x = random_instance(rng, {3, 3, 3});
    BuiltDesign shared = build_d1(x.ass, x.bss);
    BuiltDesign per_column = build_d1_unfactored(x.ass, x.bss);
    if (!shared.network.run_to_completion(100'000).ok()) continue;
    if (!per_column.network.run_to_completion(100'000).ok()) continue;
    bool same = shared.collect() == per_column.collect() &&
                shared.collect() == mmult_ref(x.ass, x.bss);
    const auto a = column_subnetworks(shared.network);
    const auto b = column_subnetworks(per_column.network);
    same = same && a.size() == 3 && b.size() == 3;
    for (std::size_t j = 0; same && j < a.size(); ++j) {
      same = shared.network.received_within(a[j]) == per_column.network.received_within(b[j]);
    }
    agree += same;
  }
  return {agree == kCases,
          std::to_string(agree) + "/" + std::to_string(kCases) +
              " instances with equal css and equal per-column communications"};
}

// ---- 4: structure independent of k, cycles affine in k ----

struct Fit {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;
};

Fit least_squares(const std::vector<std::pair<double, double>>& pts) {
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (const auto& [x, y] : pts) {
    f.max_residual = std::max(f.max_residual, std::abs(y - (f.slope * x + f.intercept)));
  }
  return f;
}

Verdict k_independence() {
  gen::Rng rng(4004);
  Verdict v;
  for (DesignId id : {DesignId::D3_Pipeline, DesignId::D4_TurnoutPipeline,
                      DesignId::D5_MultilevelSystolic}) {
    for (auto [n, m] : {std::pair<std::size_t, std::size_t>{3, 3}, {5, 4}}) {
      bool counts_equal = true;
      for (std::size_t k : {1u, 2u, 4u, 8u, 16u}) {
        const Instance a = random_instance(rng, {n, m, k});
        const Instance b = random_instance(rng, {n, m, 2 * k});
        const TraceMetrics ma = run_design(id, a.ass, a.bss, 1'000'000).metrics;
        const TraceMetrics mb = run_design(id, b.ass, b.bss, 1'000'000).metrics;
        counts_equal = counts_equal && ma.process_count == mb.process_count &&
                       ma.channel_count == mb.channel_count;
      }
      std::vector<std::pair<double, double>> pts;
      for (std::size_t k : {4u, 8u, 16u, 32u}) {
        const Instance x = random_instance(rng, {n, m, k});
        pts.emplace_back(static_cast<double>(k), static_cast<double>(
                                                     run_design(id, x.ass, x.bss, 1'000'000)
                                                         .metrics.cycles));
      }
      const Fit f = least_squares(pts);
      const bool ok = counts_equal && f.max_residual < 1.0;
      v.pass = v.pass && ok;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s(%zu,%zu) counts %s, slope %.2f, residual %.3f",
                    to_string(id), n, m, counts_equal ? "fixed" : "vary", f.slope,
                    f.max_residual);
      if (!v.detail.empty()) v.detail += "; ";
      v.detail += buf;
    }
  }
  return v;
}

// ---- 5: area and speed orderings ----

Verdict orderings() {
  gen::Rng rng(5005);
  const Instance x = random_instance(rng, {3, 3, 16});
  const auto metrics = [&](DesignId id) { return run_design(id, x.ass, x.bss, 1'000'000).metrics; };
  const TraceMetrics d1 = metrics(DesignId::D1_DataParallel);
  const TraceMetrics d2 = metrics(DesignId::D2_Stream);
  const TraceMetrics d3 = metrics(DesignId::D3_Pipeline);
  const TraceMetrics d5 = metrics(DesignId::D5_MultilevelSystolic);
  const double t2 = d2.throughput().value_or(0);
  const double t3 = d3.throughput().value_or(0);
  const double t5 = d5.throughput().value_or(0);
  Verdict v;
  v.pass = d2.process_count < d1.process_count && t3 > t2 && t5 >= t3;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "processes d2 %zu < d1 %zu; items/cycle d3 %.4f > d2 %.4f; d5 %.4f >= d3 %.4f",
                d2.process_count, d1.process_count, t3, t2, t5, t3);
  v.detail = buf;
  return v;
}

// ---- 6: termination, EOT discipline, determinism ----

Verdict protocol_and_termination() {
  gen::Rng rng(6006);
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::size_t monitors = 0;
  std::size_t bad_monitors = 0;
  std::string first;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t m = 1; m <= 6; ++m) {
      for (std::size_t k = 1; k <= 6; ++k) {
        const Instance x = random_instance(rng, {n, m, k});
        for (DesignId id : kAllDesigns) {
          ++runs;
          BuiltDesign b = build_design(id, x.ass, x.bss);
          const RunResult r = b.network.run_to_completion(1'000'000);
          if (!r.ok()) {
            if (failures++ == 0) first = std::string(to_string(id)) + ": " + r.diagnostic;
            continue;
          }
          const StreamAudit a = b.network.audit_streams();
          monitors += a.monitored;
          bad_monitors += (a.monitored - a.terminated_once) + a.violations.size();
        }
      }
    }
  }

  bench::Config c;
  c.designs.assign(kAllDesigns.begin(), kAllDesigns.end());
  c.dims = {{3, 3, 3}, {4, 2, 5}, {6, 6, 6}};
  c.seed = 20240601;
  const std::string json_a = bench::to_json(bench::cmd_run(c));
  const std::string json_b = bench::to_json(bench::cmd_run(c));
  const bool identical = json_a == json_b;

  Verdict v;
  v.pass = failures == 0 && bad_monitors == 0 && monitors > 0 && identical;
  v.detail = std::to_string(runs) + " runs, " + std::to_string(failures) +
             " did not complete, " + std::to_string(monitors) + " stream monitors with " +
             std::to_string(bad_monitors) + " not ending in exactly one EOT, JSON reports " +
             (identical ? "byte-identical" : "differ");
  if (!first.empty()) v.detail += ", first failure " + first;
  return v;
}

// ---- 7: one cell and one systolic row ----

Verdict systolic_micro() {
  const auto w = [](std::int64_t x) { return Word::wrap(x); };
  Verdict v;
  {
    Network net;
    Port up = net.make_port(Shape::item(), "up");
    Port left = net.make_port(Shape::item(), "left");
    Port right = net.make_port(Shape::item(), "right");
    Port down = net.make_port(Shape::item(), "down");
    Stored r;
    Stored d;
    net.add(prd(up, Value(w(3))));
    net.add(prd(left, Value(w(4))));
    net.add(cell(w(2), up, left, right, down));
    net.add(store(right, r));
    net.add(store(down, d));
    const bool ok = net.run_to_completion(100).ok() && r.value() == Value(w(10)) &&
                    d.value() == Value(w(3));
    v.pass = v.pass && ok;
    v.detail = std::string("cell(a=2,u=3,l=4) ") +
               (ok ? "right=10 down=3" : "wrong: right=" + r.value().to_string() +
                                             " down=" + d.value().to_string());
  }
  {
    Network net;
    const Shape vec3 = Shape::vector(3, Shape::item());
    Port left = net.make_port(Shape::item(), "left");
    Port up = net.make_port(vec3, "up");
    Port right = net.make_port(Shape::item(), "right");
    Port down = net.make_port(vec3, "down");
    Stored r;
    Stored d;
    net.add(prd(left, Value(w(0))));
    net.add(prd(up, Value::ints({4, 5, 6})));
    net.add(systolic_pipe(3, {w(1), w(2), w(3)}, left, up, right, down));
    net.add(store(right, r));
    net.add(store(down, d));
    const bool ok = net.run_to_completion(100).ok() && r.value() == Value(w(32)) &&
                    d.value() == Value::ints({4, 5, 6});
    v.pass = v.pass && ok;
    v.detail += std::string("; row [1,2,3] x [4,5,6] ") + (ok ? "= 32" : "wrong");
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*check)();
  };
  const Criterion criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"refinement soundness", refinement_soundness},
      {"broadcast factorization", broadcast_equivalence},
      {"k-independence", k_independence},
      {"area and speed ordering", orderings},
      {"protocol and termination", protocol_and_termination},
      {"systolic micro-check", systolic_micro},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %d %-26s %s  %s\n", index, c.name, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
