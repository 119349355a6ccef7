#include "procnet/designs.hpp"

#include <algorithm>

#include "procnet/constructs.hpp"
#include "procnet/errors.hpp"

namespace procnet {

const char* to_string(DesignId id) {
  switch (id) {
    case DesignId::D1_DataParallel: return "d1";
    case DesignId::D2_Stream: return "d2";
    case DesignId::D3_Pipeline: return "d3";
    case DesignId::D4_TurnoutPipeline: return "d4";
    case DesignId::D5_MultilevelSystolic: return "d5";
  }
  return "?";
}

std::optional<DesignId> parse_design(std::string_view s) {
  static constexpr std::array<std::string_view, 5> kLong = {
      "D1_DataParallel", "D2_Stream", "D3_Pipeline", "D4_TurnoutPipeline",
      "D5_MultilevelSystolic"};
  for (std::size_t i = 0; i < kAllDesigns.size(); ++i) {
    if (s == to_string(kAllDesigns[i]) || s == kLong[i]) return kAllDesigns[i];
  }
  return std::nullopt;
}

bool is_pipelined(DesignId id) {
  return id == DesignId::D3_Pipeline || id == DesignId::D4_TurnoutPipeline ||
         id == DesignId::D5_MultilevelSystolic;
}

std::string to_string(const Dims& d) {
  return "(" + std::to_string(d.n) + "," + std::to_string(d.m) + "," + std::to_string(d.k) + ")";
}

DesignFailure::DesignFailure(DesignId id, RunStatus status, const std::string& diagnostic)
    : std::runtime_error(std::string(to_string(id)) + ": " + to_string(status) + ": " +
                         diagnostic),
      design_(id),
      status_(status) {}

namespace {

const Shape kItem = Shape::item();

Dims check_inputs(const Matrix& ass, const Matrix& bss) {
  if (ass.orientation() != Orientation::ByRows) throw ConstructionError("ass must be by rows");
  if (bss.orientation() != Orientation::ByCols) throw ConstructionError("bss must be by columns");
  if (ass.cols() != bss.rows()) {
    throw ConstructionError("inner dimensions disagree: ass has " + std::to_string(ass.cols()) +
                            " columns, bss has " + std::to_string(bss.rows()) + " rows");
  }
  if (ass.width() != bss.width()) throw ConstructionError("ass and bss differ in word width");
  const Dims d{ass.rows(), ass.cols(), bss.cols()};
  if (d.n == 0 || d.m == 0 || d.k == 0) {
    throw ConstructionError("designs need n, m, k >= 1, got " + to_string(d));
  }
  return d;
}

Shape vec(std::size_t n) { return Shape::vector(n, kItem); }

Value words_value(const std::vector<Word>& ws) { return Value::words(ws); }

std::vector<std::vector<Word>> to_lists(const Value& v) {
  std::vector<std::vector<Word>> out;
  for (const auto& l : v.items()) out.push_back(l.as_words());
  return out;
}

/// `PRD(as) ▷ VSCALARP`: scalar product with a fixed row, Vector(m) -> Item.
Unary scalarp_with(const std::vector<Word>& as, int width) {
  const std::size_t m = as.size();
  Unary u = feed_second(produce(vec(m), words_value(as)), vscalarp(m, width));
  u.name = "vscalarp_row";
  return u;
}

// ---- D1 -----------------------------------------------------------------

Process vmmult_body(std::size_t n, std::size_t m, int width, Port ass, Port bs, Port out) {
  Context ctx = co_await context();
  Port copies = ctx.alloc(Shape::vector(n, vec(m)));
  std::vector<Process> parts;
  parts.push_back(broadcast(bs, copies.children()));
  parts.push_back(vzipwith(n, vscalarp(m, width))(ass, copies, out));
  co_await par(std::move(parts));
}

/// VMMULT: Vector(n, Vector(m)) x Vector(m) -> Vector(n).
Binary vmmult(std::size_t n, std::size_t m, int width) {
  return Binary{"vmmult", Shape::vector(n, vec(m)), vec(m), vec(n),
                [n, m, width](const Port& ass, const Port& bs, const Port& out) {
                  return vmmult_body(n, m, width, ass, bs, out);
                }};
}

BuiltDesign build_d1_variant(const Matrix& ass, const Matrix& bss, bool factored) {
  const Dims d = check_inputs(ass, bss);
  const int width = ass.width();
  BuiltDesign b{DesignId::D1_DataParallel, d, Network(width), {}, "css by columns", {}, std::nullopt};
  Network& net = b.network;
  const Shape ass_shape = Shape::vector(d.n, vec(d.m));
  Port copies = net.make_port(Shape::vector(d.k, ass_shape), "ass_copies");
  Port bss_port = net.make_port(Shape::vector(d.k, vec(d.m)), "bss");
  Port css_port = net.make_port(Shape::vector(d.k, vec(d.n)), "css");
  if (factored) {
    Port ass_port = net.make_port(ass_shape, "ass");
    net.add(prd(ass_port, ass.as_value()));
    net.add(broadcast(ass_port, copies.children()));
  } else {
    for (std::size_t j = 0; j < d.k; ++j) net.add(prd(copies[j], ass.as_value()));
  }
  net.add(prd(bss_port, bss.as_value()));
  Binary mmult = vzipwith(d.k, vmmult(d.n, d.m, width));
  mmult.name = "mmult";
  net.add(mmult(copies, bss_port, css_port));
  Stored css;
  net.add(store(css_port, css));
  b.css = css_port;
  b.collect = [css, width] { return Matrix::from_cols(to_lists(css.value()), width); };
  return b;
}

// ---- D2 -----------------------------------------------------------------

Process vmmult_stream_body(Matrix ass, Port bs_port, Port out) {
  Stored bs;
  co_await par(capture(bs_port, bs));
  const std::size_t m = ass.cols();
  const Source rows = produce(Shape::stream(vec(m)), ass.as_value());
  Unary per_row = feed_second(produce(vec(m), bs.value()), vscalarp(m, ass.width()));
  per_row.name = "vscalarp_col";
  const Source column = feed(rows, smap(per_row));
  co_await par(column(out));
}

/// VMMULT(ass) with a streamed result: Vector(m) -> Stream(Item).
Unary vmmult_stream(const Matrix& ass) {
  return Unary{"vmmult", vec(ass.cols()), Shape::stream(kItem),
               [ass](const Port& bs, const Port& out) { return vmmult_stream_body(ass, bs, out); }};
}

// ---- D3 -----------------------------------------------------------------

Process row_stage_body(std::vector<Word> as, int width, Port in, Port out) {
  Context ctx = co_await context();
  Stored pair;
  co_await par(capture(in, pair));
  const Value bs = pair.value().items()[0];
  Value::List ys = pair.value().items()[1].items();

  Port result = ctx.alloc(kItem);
  Stored c;
  const Source product = feed(produce(vec(as.size()), bs), scalarp_with(as, width));
  std::vector<Process> compute;
  compute.push_back(product(result));
  compute.push_back(capture(result, c));
  co_await par(std::move(compute));

  ys.push_back(c.value());
  Process emit = prd(out, Value::list({bs, Value::list(std::move(ys))}));
  co_await par(std::move(emit));
}

/// MAP(f' as): ⟨bs, y⟩ -> ⟨bs, y ⧺ [vscalarp as bs]⟩.
Unary row_stage(const std::vector<Word>& as, int width) {
  const Shape pair = Shape::tuple({vec(as.size()), Shape::stream(kItem)});
  return Unary{"map_stage", pair, pair, [as, width](const Port& in, const Port& out) {
                 return row_stage_body(as, width, in, out);
               }};
}

// ---- D4 -----------------------------------------------------------------

Process turnout_step_body(std::vector<Word> as, int width, Port left, Port right, Port down) {
  Stored bs;
  co_await par(capture(left, bs));
  const Source product = feed(produce(vec(as.size()), bs.value()), scalarp_with(as, width));
  Process compute = product(down);
  co_await par(std::move(compute));
  Process forward = prd(right, bs.value());
  co_await par(std::move(forward));
}

Process turnout_stage_body(std::vector<Word> as, int width, Port left, Port right, Port down) {
  Context ctx = co_await context();
  const std::vector<ChannelId> heads = left.heads();
  for (;;) {
    Selected sel = co_await select(heads);
    if (sel.index == 0) {
      const std::vector<ChannelId> eots{right.eot(), down.eot()};
      co_await send_all_eot(eots);
      co_return;
    }
    ctx.latch(heads[sel.index], sel.value);
    Process step = turnout_step_body(as, width, left.element(), right.element(), down.element());
    step.named("stage_step").reads(left.element()).writes(right.element()).writes(down.element());
    co_await par(std::move(step));
  }
}

// ---- D5 -----------------------------------------------------------------

Process systolic_step_body(std::vector<Word> as, Port ups, Port downs, Port result) {
  Context ctx = co_await context();
  Port seed = ctx.alloc(kItem);
  std::vector<Process> parts;
  parts.push_back(prd(seed, Value(ctx.word(0))));
  parts.push_back(systolic_pipe(as.size(), as, seed, ups, result, downs));
  co_await par(std::move(parts));
}

Process systolic_stage_body(std::vector<Word> as, Port left, Port right, Port result) {
  Context ctx = co_await context();
  const std::vector<ChannelId> heads = left.heads();
  for (;;) {
    Selected sel = co_await select(heads);
    if (sel.index == 0) {
      co_await send_eot(right.eot());
      co_return;
    }
    ctx.latch(heads[sel.index], sel.value);
    Process step = systolic_step_body(as, left.element(), right.element(), result);
    step.named("row_step").reads(left.element()).writes(right.element()).writes(result);
    co_await par(std::move(step));
  }
}

Process systolic_mmult_body(std::size_t n, Stage stage, Port bss, Port through, Port css) {
  co_await par(turnout_pipe(n, stage, bss, through, css.element()));
  co_await send_eot(css.eot());
}

}  // namespace

BuiltDesign build_d1(const Matrix& ass, const Matrix& bss) {
  return build_d1_variant(ass, bss, true);
}

BuiltDesign build_d1_unfactored(const Matrix& ass, const Matrix& bss) {
  return build_d1_variant(ass, bss, false);
}

BuiltDesign build_d2(const Matrix& ass, const Matrix& bss) {
  const Dims d = check_inputs(ass, bss);
  const int width = ass.width();
  BuiltDesign b{DesignId::D2_Stream, d, Network(width), {}, "css as a stream of column streams", {}, std::nullopt};
  Network& net = b.network;
  Port bss_port = net.make_port(Shape::stream(vec(d.m)), "bss");
  Port css_port = net.make_port(Shape::stream(Shape::stream(kItem)), "css");
  net.add(prd(bss_port, bss.as_value()));
  Unary mmult = smap(vmmult_stream(ass));
  mmult.name = "mmult";
  net.add(mmult(bss_port, css_port));
  Stored css;
  net.add(store(css_port, css));
  b.css = css_port;
  b.collect = [css, width] { return Matrix::from_cols(to_lists(css.value()), width); };
  return b;
}

BuiltDesign build_d3(const Matrix& ass, const Matrix& bss) {
  const Dims d = check_inputs(ass, bss);
  const int width = ass.width();
  BuiltDesign b{DesignId::D3_Pipeline, d, Network(width), {},
                "columns bs_k..bs_1, each with rows n..1", {}, std::nullopt};
  Network& net = b.network;
  Port bss_port = net.make_port(Shape::stream(vec(d.m)), "bss");
  Port css_port = net.make_port(Shape::stream(Shape::stream(kItem)), "css");

  // Columns enter last first, so the first result belongs to bs_k.
  Value::List columns = bss.as_value().items();
  std::reverse(columns.begin(), columns.end());
  net.add(prd(bss_port, Value::list(std::move(columns))));

  std::vector<Value> rows;
  for (std::size_t i = 0; i < d.n; ++i) rows.push_back(Value::words(ass.row(i)));
  Unary mmult = decompose_map(vec(d.m), Shape::stream(kItem), Value::list({}), rows,
                              [width](const Value& as) { return row_stage(as.as_words(), width); });
  mmult.name = "mmult";
  net.add(mmult(bss_port, css_port));
  Stored css;
  net.add(store(css_port, css));
  b.css = css_port;
  b.collect = [css, width] {
    auto cols = to_lists(css.value());
    std::reverse(cols.begin(), cols.end());
    for (auto& c : cols) std::reverse(c.begin(), c.end());
    return Matrix::from_cols(cols, width);
  };
  return b;
}

BuiltDesign build_d4(const Matrix& ass, const Matrix& bss) {
  const Dims d = check_inputs(ass, bss);
  const int width = ass.width();
  BuiltDesign b{DesignId::D4_TurnoutPipeline, d, Network(width), {},
                "css by rows, one turnout stream per row", {}, std::nullopt};
  Network& net = b.network;
  const Shape column_stream = Shape::stream(vec(d.m));
  Port bss_port = net.make_port(column_stream, "bss");
  Port through = net.make_port(column_stream, "bss_out");
  Port css_port = net.make_port(Shape::vector(d.n, Shape::stream(kItem)), "css");
  net.add(prd(bss_port, bss.as_value()));

  std::vector<std::vector<Word>> rows;
  for (std::size_t i = 0; i < d.n; ++i) rows.push_back(ass.row(i));
  const Stage stage{"stage", column_stream,
                    [rows, width](const Port& left, const Port& right, const Port* down,
                                  std::size_t i) {
                      return turnout_stage_body(rows[i], width, left, right, *down);
                    }};
  Process mmult = turnout_pipe(d.n, stage, bss_port, through, css_port);
  mmult.named("mmult");
  net.add(std::move(mmult));
  net.add(sink(through));
  Stored css;
  net.add(bank_sink(css_port, css));
  b.css = css_port;
  b.through = through;
  b.collect = [css, width] {
    return Matrix::from_rows(to_lists(css.value()), width).reoriented(Orientation::ByCols);
  };
  return b;
}

BuiltDesign build_d5(const Matrix& ass, const Matrix& bss) {
  const Dims d = check_inputs(ass, bss);
  const int width = ass.width();
  BuiltDesign b{DesignId::D5_MultilevelSystolic, d, Network(width), {},
                "css as a stream of columns", {}, std::nullopt};
  Network& net = b.network;
  const Shape column_stream = Shape::stream(vec(d.m));
  Port bss_port = net.make_port(column_stream, "bss");
  Port through = net.make_port(column_stream, "bss_out");
  Port css_port = net.make_port(Shape::stream(vec(d.n)), "css");
  net.add(prd(bss_port, bss.as_value()));

  std::vector<std::vector<Word>> rows;
  for (std::size_t i = 0; i < d.n; ++i) rows.push_back(ass.row(i));
  const Stage stage{"stage", column_stream,
                    [rows](const Port& left, const Port& right, const Port* result,
                           std::size_t i) {
                      return systolic_stage_body(rows[i], left, right, *result);
                    }};
  Process mmult = systolic_mmult_body(d.n, stage, bss_port, through, css_port);
  mmult.named("mmult").reads(bss_port).writes(through).writes(css_port);
  net.add(std::move(mmult));
  net.add(sink(through));
  Stored css;
  net.add(store(css_port, css));
  b.css = css_port;
  b.through = through;
  b.collect = [css, width] { return Matrix::from_cols(to_lists(css.value()), width); };
  return b;
}

BuiltDesign build_design(DesignId id, const Matrix& ass, const Matrix& bss) {
  switch (id) {
    case DesignId::D1_DataParallel: return build_d1(ass, bss);
    case DesignId::D2_Stream: return build_d2(ass, bss);
    case DesignId::D3_Pipeline: return build_d3(ass, bss);
    case DesignId::D4_TurnoutPipeline: return build_d4(ass, bss);
    case DesignId::D5_MultilevelSystolic: return build_d5(ass, bss);
  }
  throw ConstructionError("unknown design");
}

DesignRun run_design(DesignId id, const Matrix& ass, const Matrix& bss,
                     std::uint64_t max_cycles) {
  BuiltDesign b = build_design(id, ass, bss);
  const RunResult r = b.network.run_to_completion(max_cycles);
  if (!r.ok()) throw DesignFailure(id, r.status, r.diagnostic);
  DesignRun run;
  run.design = id;
  run.dims = b.dims;
  run.css = b.collect();
  run.metrics = r.metrics;
  run.raw_order = b.raw_order;
  run.warnings = b.network.warnings();
  if (run.css.rows() != b.dims.n || run.css.cols() != b.dims.k) {
    throw DesignFailure(id, RunStatus::ProtocolError,
                        "css has dimensions " + std::to_string(run.css.rows()) + "x" +
                            std::to_string(run.css.cols()));
  }
  return run;
}

std::vector<ProcessId> column_subnetworks(const Network& net) { return net.find("vmmult"); }

}  // namespace procnet
