#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "procnet/constructs.hpp"
#include "procnet/network.hpp"
#include "procnet/process.hpp"
#include "procnet/shape.hpp"

namespace procnet {

// Process builders carry the shapes of their ports so composition can be
// checked before anything runs. Calling a builder binds it to concrete ports,
// checks their shapes and declares the process interface.

/// A process with one output port.
struct Source {
  std::string name;
  Shape out;
  std::function<Process(const Port& out)> body;

  Process operator()(const Port& out_port) const;
};

/// A process with one input and one output port.
struct Unary {
  std::string name;
  Shape in;
  Shape out;
  std::function<Process(const Port& in, const Port& out)> body;

  Process operator()(const Port& in_port, const Port& out_port) const;
};

/// A process with two input ports and one output port.
struct Binary {
  std::string name;
  Shape in1;
  Shape in2;
  Shape out;
  std::function<Process(const Port& in1, const Port& in2, const Port& out)> body;

  Process operator()(const Port& in1_port, const Port& in2_port, const Port& out_port) const;
};

Source produce(Shape shape, Value data);
Unary lifted(std::string name, Shape in, Shape out, std::function<Value(const Value&)> fn);

/// `P ▷ Q`: P and Q in parallel over a fresh hidden channel bundle.
Source feed(const Source& p, const Unary& q);
Unary feed(const Unary& p, const Unary& q);
Binary feed(const Binary& p, const Unary& q);
/// Binds the first (second) input of `q` to the output of `p`.
Unary feed_first(const Source& p, const Binary& q);
Unary feed_second(const Source& p, const Binary& q);

/// Items in, item out; inputs are read interleaved, arithmetic wraps.
Process add_proc(const Port& in1, const Port& in2, const Port& out);
Process mul_proc(const Port& in1, const Port& in2, const Port& out);
Binary adder();
Binary multiplier();

/// Stream(F.in) -> Stream(F.out), one activation of F per element.
Unary smap(const Unary& f);
/// Vector(n, F.in) -> Vector(n, F.out), n parallel instances.
Unary vmap(std::size_t n, const Unary& f);
/// Elementwise F over two streams; mismatched lengths raise a protocol error.
Binary szipwith(const Binary& f);
Binary vzipwith(std::size_t n, const Binary& f);
/// Linear chain folding Vector(n, F.in1) right to left from seed `e`.
/// F's second input is the accumulator and must share F's output shape.
Unary vfoldr(std::size_t n, const Binary& f, Value e);

/// Scalar product of two Vector(m) ports: vzipwith(m, MUL) ▷ vfoldr(m, ADD, 0).
Binary vscalarp(std::size_t m, int width = Word::kDefaultWidth);

/// One pipeline stage. `turnout` is null for plain pipes.
struct Stage {
  std::string name;
  /// Shape of the channels between consecutive stages.
  Shape link;
  std::function<Process(const Port& left, const Port& right, const Port* turnout,
                        std::size_t index)>
      body;
};

/// n >= 2 stages chained over n-1 hidden links.
Process pipe(std::size_t n, const Stage& stage, const Port& in, const Port& out);
/// n >= 1 stages; stage i also writes turnouts[i].
Process turnout_pipe(std::size_t n, const Stage& stage, const Port& in, const Port& through,
                     const Port& turnouts);

/// Arguments of `map (h m)` where `h (a:s) x = f a x (h s x)` and `h [] x = e`.
struct PipelineSpecArgs {
  Shape x;
  Shape y;
  std::function<Value(const Value& a, const Value& x, const Value& y)> f;
  Value e;
  std::vector<Value> m;
};

/// Pipeline MAP(initial) ≫ MAP(f' a) for a in reverse(m) ≫ MAP(final) over
/// a stream of ⟨x, y⟩ tuples. Refines `map (h m)`: Stream(x) -> Stream(y).
Unary decompose_map(const PipelineSpecArgs& args);
/// As above with a process per stage: `step(a)` maps Tuple(x, y) to Tuple(x, y).
Unary decompose_map(Shape x, Shape y, Value e, std::vector<Value> m,
                    std::function<Unary(const Value& a)> step);

/// up?u -> left?l -> right!(u*a + l) -> down!u
Process cell(Word a, const Port& up, const Port& left, const Port& right, const Port& down);
/// Row of m cells; partial sums flow left to right, ups pass straight down.
Process systolic_pipe(std::size_t m, const std::vector<Word>& row, const Port& left_in,
                      const Port& up_in, const Port& right_out, const Port& down_out);

/// Result of running a builder in a closed test network.
struct Evaluation {
  Value value;
  RunResult run;
};

/// Runs prd(x) ▷ F ▷ store in a fresh network of the given width.
Evaluation evaluate(const Unary& f, const Value& x, int width = Word::kDefaultWidth,
                    std::uint64_t max_cycles = 1'000'000);
Evaluation evaluate(const Binary& f, const Value& x, const Value& y,
                    int width = Word::kDefaultWidth, std::uint64_t max_cycles = 1'000'000);

}  // namespace procnet
