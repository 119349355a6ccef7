#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "procnet/process.hpp"
#include "procnet/shape.hpp"

namespace procnet {

/// Handle to the value a consumer received. Copies share one slot, so the
/// caller keeps a copy and reads it after the network finished.
class Stored {
 public:
  Stored() : slot_(std::make_shared<std::optional<Value>>()) {}

  bool has_value() const { return slot_->has_value(); }
  /// Throws std::logic_error while the consumer has not terminated.
  const Value& value() const;
  void set(Value v) const { *slot_ = std::move(v); }

 private:
  std::shared_ptr<std::optional<Value>> slot_;
};

/// Drives one complete construct onto `out`. Items and flat vectors take one
/// cycle; streams send each element in turn and then EOT.
Process prd(const Port& out, Value data);

/// Consumes one complete construct and stores it. Counts towards items_out.
Process store(const Port& in, Stored into);
/// As store, without contributing to items_out. Used inside sub-networks.
Process capture(const Port& in, Stored into);
/// Consumes and discards one complete construct.
Process sink(const Port& in);

/// Replicates every construct on `in` to all `outs`. A stream EOT is
/// replicated after the last element.
Process broadcast(const Port& in, const std::vector<Port>& outs);

/// Single-port memory bank: one Word per cycle onto a Stream(Item) port.
Process bank_source(const Port& out, const std::vector<Word>& data);
/// Collects Stream(Item), or Vector(w, Stream(Item)) with one bank per
/// stream. More than four banks is flagged as a warning, not rejected.
Process bank_sink(const Port& in, Stored into);

inline constexpr std::size_t kConcurrentBanks = 4;

/// Pure computation between two ports: store the input construct, apply
/// `fn`, produce the result.
Process lift(std::string name, const Port& in, const Port& out,
             std::function<Value(const Value&)> fn);

}  // namespace procnet
