#include "procnet/combinators.hpp"

#include <algorithm>
#include <optional>

#include "procnet/errors.hpp"

namespace procnet {

namespace {

void expect_shape(const std::string& who, const char* role, const Shape& want, const Port& got) {
  if (!(got.shape() == want)) {
    throw ConstructionError(who + ": " + role + " port has shape " + got.shape().to_string() +
                            ", expected " + want.to_string());
  }
}

void expect_positive(const char* who, std::size_t n) {
  if (n == 0) throw ConstructionError(std::string(who) + " needs n >= 1");
}

std::vector<Process> both(Process a, Process b) {
  std::vector<Process> v;
  v.push_back(std::move(a));
  v.push_back(std::move(b));
  return v;
}

Process feed_source_body(Source p, Unary q, Port out) {
  Context ctx = co_await context();
  Port mid = ctx.alloc(p.out);
  std::vector<Process> parts = both(p(mid), q(mid, out));
  co_await par(std::move(parts));
}

Process feed_unary_body(Unary p, Unary q, Port in, Port out) {
  Context ctx = co_await context();
  Port mid = ctx.alloc(p.out);
  std::vector<Process> parts = both(p(in, mid), q(mid, out));
  co_await par(std::move(parts));
}

Process feed_binary_body(Binary p, Unary q, Port in1, Port in2, Port out) {
  Context ctx = co_await context();
  Port mid = ctx.alloc(p.out);
  std::vector<Process> parts = both(p(in1, in2, mid), q(mid, out));
  co_await par(std::move(parts));
}

Process feed_into_body(Source p, Binary q, bool first, Port in, Port out) {
  Context ctx = co_await context();
  Port mid = ctx.alloc(p.out);
  Process consumer = first ? q(mid, in, out) : q(in, mid, out);
  std::vector<Process> parts = both(p(mid), std::move(consumer));
  co_await par(std::move(parts));
}

Process add_body(Port in1, Port in2, Port out) {
  std::vector<Word> xs = co_await recv_all({in1.data(), in2.data()});
  co_await send(out.data(), xs[0] + xs[1]);
}

Process mul_body(Port in1, Port in2, Port out) {
  std::vector<Word> xs = co_await recv_all({in1.data(), in2.data()});
  co_await send(out.data(), xs[0] * xs[1]);
}

Process smap_body(Unary f, Port in, Port out) {
  Context ctx = co_await context();
  const std::vector<ChannelId> heads = in.heads();
  for (;;) {
    Selected sel = co_await select(heads);
    if (sel.index == 0) {
      co_await send_eot(out.eot());
      co_return;
    }
    ctx.latch(heads[sel.index], sel.value);
    co_await par(f(in.element(), out.element()));
  }
}

Process vmap_body(Unary f, Port in, Port out) {
  std::vector<Process> parts;
  for (std::size_t i = 0; i < in.size(); ++i) parts.push_back(f(in[i], out[i]));
  co_await par(std::move(parts));
}

Process szipwith_body(Binary f, Port in1, Port in2, Port out) {
  Context ctx = co_await context();
  const std::vector<ChannelId> h1 = in1.heads();
  const std::vector<ChannelId> h2 = in2.heads();
  for (;;) {
    Selected a = co_await select(h1);
    Selected b = co_await select(h2);
    if (a.index == 0 && b.index == 0) {
      co_await send_eot(out.eot());
      co_return;
    }
    if (a.index == 0 || b.index == 0) {
      throw ProtocolError(std::string("szipwith: stream length mismatch, ") +
                          (a.index == 0 ? "first" : "second") + " stream ended early");
    }
    ctx.latch(h1[a.index], a.value);
    ctx.latch(h2[b.index], b.value);
    co_await par(f(in1.element(), in2.element(), out.element()));
  }
}

Process vzipwith_body(Binary f, Port in1, Port in2, Port out) {
  std::vector<Process> parts;
  for (std::size_t i = 0; i < in1.size(); ++i) parts.push_back(f(in1[i], in2[i], out[i]));
  co_await par(std::move(parts));
}

Process vfoldr_body(Binary f, Value e, Port in, Port out) {
  Context ctx = co_await context();
  const std::size_t n = in.size();
  // acc[n-1] carries the seed; F_i reads acc[i] and writes acc[i-1] (out for i = 0).
  Port acc = ctx.alloc(Shape::vector(n, f.out));
  std::vector<Process> parts;
  parts.push_back(prd(acc[n - 1], e));
  for (std::size_t i = n; i-- > 0;) parts.push_back(f(in[i], acc[i], i == 0 ? out : acc[i - 1]));
  co_await par(std::move(parts));
}

Process pipe_body(std::size_t n, Stage stage, Port in, Port out, std::optional<Port> turnouts) {
  Context ctx = co_await context();
  std::optional<Port> mids;
  if (n > 1) mids = ctx.alloc(Shape::vector(n - 1, stage.link));
  std::vector<Process> stages;
  for (std::size_t i = 0; i < n; ++i) {
    const Port& left = i == 0 ? in : (*mids)[i - 1];
    const Port& right = i + 1 == n ? out : (*mids)[i];
    const Port* turnout = turnouts ? &(*turnouts)[i] : nullptr;
    Process p = stage.body(left, right, turnout, i);
    p.named(stage.name).reads(left).writes(right);
    if (turnout) p.writes(*turnout);
    stages.push_back(std::move(p));
  }
  co_await par(std::move(stages));
}

Process cell_body(Word a, Port up, Port left, Port right, Port down) {
  Word u = co_await recv(up.data());
  Word l = co_await recv(left.data());
  co_await send(right.data(), u * a + l);
  co_await send(down.data(), u);
}

Process systolic_body(std::vector<Word> row, Port left_in, Port up_in, Port right_out,
                      Port down_out) {
  Context ctx = co_await context();
  const std::size_t m = row.size();
  std::optional<Port> mids;
  if (m > 1) mids = ctx.alloc(Shape::vector(m - 1, Shape::item()));
  std::vector<Process> cells;
  for (std::size_t i = 0; i < m; ++i) {
    const Port& left = i == 0 ? left_in : (*mids)[i - 1];
    const Port& right = i + 1 == m ? right_out : (*mids)[i];
    cells.push_back(cell(row[i], up_in[i], left, right, down_out[i]));
  }
  co_await par(std::move(cells));
}

}  // namespace

Process Source::operator()(const Port& out_port) const {
  expect_shape(name, "output", out, out_port);
  Process p = body(out_port);
  p.named(name).writes(out_port);
  return p;
}

Process Unary::operator()(const Port& in_port, const Port& out_port) const {
  expect_shape(name, "input", in, in_port);
  expect_shape(name, "output", out, out_port);
  Process p = body(in_port, out_port);
  p.named(name).reads(in_port).writes(out_port);
  return p;
}

Process Binary::operator()(const Port& in1_port, const Port& in2_port,
                           const Port& out_port) const {
  expect_shape(name, "first input", in1, in1_port);
  expect_shape(name, "second input", in2, in2_port);
  expect_shape(name, "output", out, out_port);
  Process p = body(in1_port, in2_port, out_port);
  p.named(name).reads(in1_port).reads(in2_port).writes(out_port);
  return p;
}

Source produce(Shape shape, Value data) {
  if (!data.conforms_to(shape)) {
    throw ConstructionError("produce: value " + data.to_string() + " does not fit shape " +
                            shape.to_string());
  }
  return Source{"prd", shape, [data](const Port& out) { return prd(out, data); }};
}

Unary lifted(std::string name, Shape in, Shape out, std::function<Value(const Value&)> fn) {
  return Unary{name, std::move(in), std::move(out),
               [name, fn](const Port& i, const Port& o) { return lift(name, i, o, fn); }};
}

Source feed(const Source& p, const Unary& q) {
  if (!(p.out == q.in)) {
    throw ConstructionError("feed: " + p.name + " produces " + p.out.to_string() + " but " +
                            q.name + " consumes " + q.in.to_string());
  }
  return Source{"feed", q.out,
                [p, q](const Port& out) { return feed_source_body(p, q, out); }};
}

Unary feed(const Unary& p, const Unary& q) {
  if (!(p.out == q.in)) {
    throw ConstructionError("feed: " + p.name + " produces " + p.out.to_string() + " but " +
                            q.name + " consumes " + q.in.to_string());
  }
  return Unary{"feed", p.in, q.out,
               [p, q](const Port& in, const Port& out) { return feed_unary_body(p, q, in, out); }};
}

Binary feed(const Binary& p, const Unary& q) {
  if (!(p.out == q.in)) {
    throw ConstructionError("feed: " + p.name + " produces " + p.out.to_string() + " but " +
                            q.name + " consumes " + q.in.to_string());
  }
  return Binary{"feed", p.in1, p.in2, q.out,
                [p, q](const Port& a, const Port& b, const Port& out) {
                  return feed_binary_body(p, q, a, b, out);
                }};
}

Unary feed_first(const Source& p, const Binary& q) {
  if (!(p.out == q.in1)) {
    throw ConstructionError("feed: " + p.name + " produces " + p.out.to_string() + " but " +
                            q.name + " consumes " + q.in1.to_string());
  }
  return Unary{"feed", q.in2, q.out, [p, q](const Port& in, const Port& out) {
                 return feed_into_body(p, q, true, in, out);
               }};
}

Unary feed_second(const Source& p, const Binary& q) {
  if (!(p.out == q.in2)) {
    throw ConstructionError("feed: " + p.name + " produces " + p.out.to_string() + " but " +
                            q.name + " consumes " + q.in2.to_string());
  }
  return Unary{"feed", q.in1, q.out, [p, q](const Port& in, const Port& out) {
                 return feed_into_body(p, q, false, in, out);
               }};
}

Process add_proc(const Port& in1, const Port& in2, const Port& out) {
  return adder()(in1, in2, out);
}

Process mul_proc(const Port& in1, const Port& in2, const Port& out) {
  return multiplier()(in1, in2, out);
}

Binary adder() {
  return Binary{"add", Shape::item(), Shape::item(), Shape::item(),
                [](const Port& a, const Port& b, const Port& o) { return add_body(a, b, o); }};
}

Binary multiplier() {
  return Binary{"mul", Shape::item(), Shape::item(), Shape::item(),
                [](const Port& a, const Port& b, const Port& o) { return mul_body(a, b, o); }};
}

Unary smap(const Unary& f) {
  return Unary{"smap", Shape::stream(f.in), Shape::stream(f.out),
               [f](const Port& in, const Port& out) { return smap_body(f, in, out); }};
}

Unary vmap(std::size_t n, const Unary& f) {
  expect_positive("vmap", n);
  return Unary{"vmap", Shape::vector(n, f.in), Shape::vector(n, f.out),
               [f](const Port& in, const Port& out) { return vmap_body(f, in, out); }};
}

Binary szipwith(const Binary& f) {
  return Binary{"szipwith", Shape::stream(f.in1), Shape::stream(f.in2), Shape::stream(f.out),
                [f](const Port& a, const Port& b, const Port& out) {
                  return szipwith_body(f, a, b, out);
                }};
}

Binary vzipwith(std::size_t n, const Binary& f) {
  expect_positive("vzipwith", n);
  return Binary{"vzipwith", Shape::vector(n, f.in1), Shape::vector(n, f.in2),
                Shape::vector(n, f.out), [f](const Port& a, const Port& b, const Port& out) {
                  return vzipwith_body(f, a, b, out);
                }};
}

Unary vfoldr(std::size_t n, const Binary& f, Value e) {
  expect_positive("vfoldr", n);
  if (!(f.in2 == f.out)) {
    throw ConstructionError("vfoldr: accumulator input " + f.in2.to_string() +
                            " must match output " + f.out.to_string());
  }
  if (!e.conforms_to(f.out)) {
    throw ConstructionError("vfoldr: seed " + e.to_string() + " does not fit " +
                            f.out.to_string());
  }
  return Unary{"vfoldr", Shape::vector(n, f.in1), f.out,
               [f, e](const Port& in, const Port& out) { return vfoldr_body(f, e, in, out); }};
}

Binary vscalarp(std::size_t m, int width) {
  Binary b = feed(vzipwith(m, multiplier()), vfoldr(m, adder(), Value(Word::wrap(0, width))));
  b.name = "vscalarp";
  return b;
}

Process pipe(std::size_t n, const Stage& stage, const Port& in, const Port& out) {
  if (n < 2) throw ConstructionError("pipe needs n >= 2 stages");
  Process p = pipe_body(n, stage, in, out, std::nullopt);
  p.named("pipe").reads(in).writes(out);
  return p;
}

Process turnout_pipe(std::size_t n, const Stage& stage, const Port& in, const Port& through,
                     const Port& turnouts) {
  expect_positive("turnout_pipe", n);
  if (turnouts.kind() != Construct::Vector || turnouts.size() != n) {
    throw ConstructionError("turnout_pipe: turnouts must be a vector of " + std::to_string(n) +
                            " ports, got " + turnouts.shape().to_string());
  }
  Process p = pipe_body(n, stage, in, through, turnouts);
  p.named("turnout_pipe").reads(in).writes(through).writes(turnouts);
  return p;
}

Unary decompose_map(Shape x, Shape y, Value e, std::vector<Value> m,
                    std::function<Unary(const Value& a)> step) {
  if (m.empty()) throw ConstructionError("decompose_map needs at least one argument in m");
  if (!e.conforms_to(y)) {
    throw ConstructionError("decompose_map: seed " + e.to_string() + " does not fit " +
                            y.to_string());
  }
  const Shape pair = Shape::tuple({x, y});
  std::reverse(m.begin(), m.end());
  const std::size_t n = m.size() + 2;

  const Unary initial = lifted("map_initial", x, pair, [e](const Value& v) {
    return Value::list({v, e});
  });
  const Unary final_stage = lifted("map_final", pair, y, [](const Value& v) {
    return v.items()[1];
  });
  std::vector<Unary> steps;
  for (const Value& a : m) {
    Unary s = step(a);
    if (!(s.in == pair) || !(s.out == pair)) {
      throw ConstructionError("decompose_map: step " + s.name + " must map " + pair.to_string() +
                              " to itself");
    }
    steps.push_back(std::move(s));
  }

  Stage stage{"stage", Shape::stream(pair),
              [initial, final_stage, steps, n](const Port& left, const Port& right, const Port*,
                                               std::size_t i) {
                if (i == 0) return smap(initial)(left, right);
                if (i + 1 == n) return smap(final_stage)(left, right);
                return smap(steps[i - 1])(left, right);
              }};
  return Unary{"decompose_map", Shape::stream(x), Shape::stream(y),
               [stage, n](const Port& in, const Port& out) { return pipe(n, stage, in, out); }};
}

Unary decompose_map(const PipelineSpecArgs& args) {
  const Shape pair = Shape::tuple({args.x, args.y});
  auto f = args.f;
  return decompose_map(args.x, args.y, args.e, args.m, [pair, f](const Value& a) {
    return lifted("map_step", pair, pair, [f, a](const Value& v) {
      return Value::list({v.items()[0], f(a, v.items()[0], v.items()[1])});
    });
  });
}

Process cell(Word a, const Port& up, const Port& left, const Port& right, const Port& down) {
  for (const Port* p : {&up, &left, &right, &down}) {
    if (p->kind() != Construct::Item) throw ConstructionError("cell ports must be items");
  }
  Process p = cell_body(a, up, left, right, down);
  p.named("cell").reads(up).reads(left).writes(right).writes(down);
  return p;
}

Process systolic_pipe(std::size_t m, const std::vector<Word>& row, const Port& left_in,
                      const Port& up_in, const Port& right_out, const Port& down_out) {
  expect_positive("systolic_pipe", m);
  if (row.size() != m) {
    throw ConstructionError("systolic_pipe: " + std::to_string(row.size()) +
                            " cell arguments for " + std::to_string(m) + " cells");
  }
  const Shape ups = Shape::vector(m, Shape::item());
  expect_shape("systolic_pipe", "up", ups, up_in);
  expect_shape("systolic_pipe", "down", ups, down_out);
  expect_shape("systolic_pipe", "left", Shape::item(), left_in);
  expect_shape("systolic_pipe", "right", Shape::item(), right_out);
  Process p = systolic_body(row, left_in, up_in, right_out, down_out);
  p.named("systolic_pipe").reads(left_in).reads(up_in).writes(right_out).writes(down_out);
  return p;
}

Evaluation evaluate(const Unary& f, const Value& x, int width, std::uint64_t max_cycles) {
  Network net(width);
  Port in = net.make_port(f.in, "in");
  Port out = net.make_port(f.out, "out");
  Stored result;
  net.add(prd(in, x));
  net.add(f(in, out));
  net.add(store(out, result));
  Evaluation e;
  e.run = net.run_to_completion(max_cycles);
  if (e.run.ok()) e.value = result.value();
  return e;
}

Evaluation evaluate(const Binary& f, const Value& x, const Value& y, int width,
                    std::uint64_t max_cycles) {
  Network net(width);
  Port in1 = net.make_port(f.in1, "in1");
  Port in2 = net.make_port(f.in2, "in2");
  Port out = net.make_port(f.out, "out");
  Stored result;
  net.add(prd(in1, x));
  net.add(prd(in2, y));
  net.add(f(in1, in2, out));
  net.add(store(out, result));
  Evaluation e;
  e.run = net.run_to_completion(max_cycles);
  if (e.run.ok()) e.value = result.value();
  return e;
}

}  // namespace procnet
