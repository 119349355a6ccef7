#include "procnet/constructs.hpp"

#include <stdexcept>

#include "procnet/errors.hpp"

namespace procnet {

const Value& Stored::value() const {
  if (!slot_->has_value()) throw std::logic_error("stored value read before the consumer finished");
  return **slot_;
}

namespace {

std::vector<std::pair<ChannelId, Word>> pair_up(const Port& port, const Value& data) {
  std::vector<std::pair<ChannelId, Word>> sends;
  const auto& items = data.items();
  for (std::size_t i = 0; i < port.size(); ++i) sends.emplace_back(port[i].data(), items[i].word());
  return sends;
}

std::vector<ChannelId> data_channels(const Port& flat) {
  std::vector<ChannelId> cs;
  for (const auto& c : flat.children()) cs.push_back(c.data());
  return cs;
}

Process prd_body(Port out, Value data) {
  switch (out.kind()) {
    case Construct::Item:
      co_await send(out.data(), data.word());
      co_return;
    case Construct::Vector:
    case Construct::Tuple:
      if (out.flat()) {
        co_await send_all(pair_up(out, data));
      } else {
        std::vector<Process> parts;
        for (std::size_t i = 0; i < out.size(); ++i) parts.push_back(prd(out[i], data.items()[i]));
        co_await par(std::move(parts));
      }
      co_return;
    case Construct::Stream:
      for (const Value& v : data.items()) {
        if (out.element().kind() == Construct::Item) {
          co_await send(out.element().data(), v.word());
        } else {
          co_await par(prd(out.element(), v));
        }
      }
      co_await send_eot(out.eot());
      co_return;
  }
}

Process capture_body(Port in, Stored into) {
  switch (in.kind()) {
    case Construct::Item: {
      Word w = co_await recv(in.data());
      into.set(w);
      co_return;
    }
    case Construct::Vector:
    case Construct::Tuple: {
      if (in.flat()) {
        std::vector<Word> ws = co_await recv_all(data_channels(in));
        into.set(Value::words(ws));
        co_return;
      }
      std::vector<Stored> slots(in.size());
      std::vector<Process> parts;
      for (std::size_t i = 0; i < in.size(); ++i) parts.push_back(capture(in[i], slots[i]));
      co_await par(std::move(parts));
      Value::List items;
      for (const auto& s : slots) items.push_back(s.value());
      into.set(Value::list(std::move(items)));
      co_return;
    }
    case Construct::Stream: {
      Context ctx = co_await context();
      const std::vector<ChannelId> heads = in.heads();
      const bool items_only = in.element().kind() == Construct::Item;
      Value::List items;
      for (;;) {
        Selected sel = co_await select(heads);
        if (sel.index == 0) break;
        if (items_only) {
          items.emplace_back(sel.value);
          continue;
        }
        ctx.latch(heads[sel.index], sel.value);
        Stored element;
        co_await par(capture(in.element(), element));
        items.push_back(element.value());
      }
      into.set(Value::list(std::move(items)));
      co_return;
    }
  }
}

Process broadcast_body(Port in, std::vector<Port> outs) {
  switch (in.kind()) {
    case Construct::Item: {
      Word w = co_await recv(in.data());
      std::vector<std::pair<ChannelId, Word>> sends;
      for (const auto& o : outs) sends.emplace_back(o.data(), w);
      co_await send_all(std::move(sends));
      co_return;
    }
    case Construct::Vector:
    case Construct::Tuple: {
      Stored whole;
      co_await par(capture(in, whole));
      std::vector<Process> copies;
      for (const auto& o : outs) copies.push_back(prd(o, whole.value()));
      co_await par(std::move(copies));
      co_return;
    }
    case Construct::Stream: {
      Context ctx = co_await context();
      const std::vector<ChannelId> heads = in.heads();
      for (;;) {
        Selected sel = co_await select(heads);
        if (sel.index == 0) {
          std::vector<ChannelId> eots;
          for (const auto& o : outs) eots.push_back(o.eot());
          co_await send_all_eot(eots);
          co_return;
        }
        if (in.element().kind() == Construct::Item) {
          std::vector<std::pair<ChannelId, Word>> sends;
          for (const auto& o : outs) sends.emplace_back(o.element().data(), sel.value);
          co_await send_all(std::move(sends));
          continue;
        }
        ctx.latch(heads[sel.index], sel.value);
        Stored element;
        co_await par(capture(in.element(), element));
        std::vector<Process> copies;
        for (const auto& o : outs) copies.push_back(prd(o.element(), element.value()));
        co_await par(std::move(copies));
      }
    }
  }
}

Process lift_body(Port in, Port out, std::function<Value(const Value&)> fn) {
  Value x;
  if (in.kind() == Construct::Item) {
    x = co_await recv(in.data());
  } else {
    Stored s;
    co_await par(capture(in, s));
    x = s.value();
  }
  Value y = fn(x);
  if (!y.conforms_to(out.shape())) {
    throw ProtocolError("lifted function produced " + y.to_string() + " for shape " +
                        out.shape().to_string());
  }
  if (out.kind() == Construct::Item) {
    co_await send(out.data(), y.word());
  } else {
    co_await par(prd(out, y));
  }
}

Process sink_body(Port in) {
  Stored discard;
  co_await par(capture(in, discard));
}

}  // namespace

Process prd(const Port& out, Value data) {
  if (!data.conforms_to(out.shape())) {
    throw ConstructionError("prd: value " + data.to_string() + " does not fit shape " +
                            out.shape().to_string());
  }
  Process p = prd_body(out, std::move(data));
  p.named("prd").writes(out);
  return p;
}

Process capture(const Port& in, Stored into) {
  Process p = capture_body(in, std::move(into));
  p.named("store").reads(in);
  return p;
}

Process store(const Port& in, Stored into) {
  Process p = capture(in, std::move(into));
  p.output();
  return p;
}

Process sink(const Port& in) {
  Process p = sink_body(in);
  p.named("sink").reads(in);
  return p;
}

Process broadcast(const Port& in, const std::vector<Port>& outs) {
  if (outs.empty()) throw ConstructionError("broadcast needs at least one output port");
  const Shape shape = in.shape();
  for (const auto& o : outs) {
    if (!(o.shape() == shape)) {
      throw ConstructionError("broadcast: output shape " + o.shape().to_string() +
                              " differs from input shape " + shape.to_string());
    }
  }
  Process p = broadcast_body(in, outs);
  p.named("broadcast").reads(in);
  for (const auto& o : outs) p.writes(o);
  return p;
}

Process bank_source(const Port& out, const std::vector<Word>& data) {
  if (!(out.shape() == Shape::stream(Shape::item()))) {
    throw ConstructionError("bank_source drives a stream of items, got " + out.shape().to_string());
  }
  Process p = prd(out, Value::words(data));
  p.named("bank_source");
  return p;
}

Process bank_sink(const Port& in, Stored into) {
  const Shape bank = Shape::stream(Shape::item());
  const bool single = in.shape() == bank;
  const bool banked = in.kind() == Construct::Vector && in.shape().element() == bank;
  if (!single && !banked) {
    throw ConstructionError("bank_sink accepts streams of items or vectors of them, got " +
                            in.shape().to_string());
  }
  Process p = store(in, std::move(into));
  p.named("bank_sink");
  if (banked && in.size() > kConcurrentBanks) {
    p.warn("bank_sink needs " + std::to_string(in.size()) + " concurrent banks, only " +
           std::to_string(kConcurrentBanks) + " are available");
  }
  return p;
}

Process lift(std::string name, const Port& in, const Port& out,
             std::function<Value(const Value&)> fn) {
  Process p = lift_body(in, out, std::move(fn));
  p.named(std::move(name)).reads(in).writes(out);
  return p;
}

}  // namespace procnet
