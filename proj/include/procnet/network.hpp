#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procnet/process.hpp"
#include "procnet/shape.hpp"
#include "procnet/word.hpp"

namespace procnet {

enum class RunStatus { Completed, Deadlock, CycleBudgetExceeded, ProtocolError };

const char* to_string(RunStatus s);

/// Cost-model counters for one run.
///
/// process_count and channel_count are area proxies: they count distinct
/// instantiation sites, so a sub-network re-spawned for every element of a
/// stream counts once, the way a hardware macro inside a loop is built once.
/// A process counts only if it ever offered a communication; pure
/// containers (feed, par wrappers) are wiring and cost nothing.
struct TraceMetrics {
  std::uint64_t cycles = 0;
  std::uint64_t communications = 0;
  std::uint64_t process_count = 0;
  std::uint64_t channel_count = 0;
  std::uint64_t items_out = 0;

  /// items_out / cycles; undefined for a run that took no cycles.
  std::optional<double> throughput() const;

  friend bool operator==(const TraceMetrics&, const TraceMetrics&) = default;
};

struct BlockedProcess {
  ProcessId id{};
  std::string site;
  /// One entry per pending offer, e.g. "c12?" for an input, "c7!" for output.
  std::vector<std::string> offers;
};

struct RunResult {
  RunStatus status = RunStatus::Completed;
  TraceMetrics metrics;
  std::string diagnostic;
  std::vector<BlockedProcess> blocked;

  bool ok() const { return status == RunStatus::Completed; }
};

struct TransferEvent {
  std::uint64_t cycle = 0;
  ChannelId channel{};
  bool eot = false;
  Word value;
  ProcessId writer{};
  ProcessId reader{};

  friend bool operator==(const TransferEvent&, const TransferEvent&) = default;
};

struct StepOutcome {
  std::size_t transfers = 0;
  bool finished = false;
  bool failed = false;
};

/// Summary of the runtime stream-protocol monitors. One monitor watches every
/// stream port that is not itself nested inside another stream.
struct StreamAudit {
  std::size_t monitored = 0;
  std::size_t terminated_once = 0;
  std::vector<std::string> violations;
};

/// A closed set of processes and rendezvous channels under a deterministic
/// cycle-level scheduler.
///
/// Each cycle runs in two phases: every runnable process first executes up to
/// its next communication (local computation is free); then every channel
/// whose writer and reader are both offering transfers exactly one token, and
/// all matched transfers commit together. A cycle with no possible transfer
/// while processes remain is a deadlock.
class Network {
 public:
  explicit Network(int width = Word::kDefaultWidth);
  ~Network();
  Network(Network&&) noexcept;
  Network& operator=(Network&&) noexcept;
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  int width() const;
  Word word(std::int64_t raw) const { return Word::wrap(raw, width()); }

  /// Allocates the channels of a top-level port. Each channel must end up
  /// with exactly one writer and one reader among the added processes.
  Port make_port(const Shape& shape, std::string_view name = "port");

  /// Adds a top-level process. Throws ConstructionError when the process
  /// claims an endpoint another top-level process already owns.
  ProcessId add(Process process);

  /// Checks closedness; called implicitly by the first step.
  void seal();

  /// Advances one cycle. Returns finished=true (without consuming a cycle)
  /// once every process has terminated.
  StepOutcome step();

  RunResult run_to_completion(std::uint64_t max_cycles);

  std::uint64_t cycle() const;
  TraceMetrics metrics() const;
  const std::vector<TransferEvent>& trace() const;
  const std::vector<std::string>& warnings() const;
  StreamAudit audit_streams() const;

  /// Processes (live or terminated) whose name matches, in id order.
  std::vector<ProcessId> find(std::string_view name) const;
  std::string site_of(ProcessId id) const;
  /// Data and EOT transfers received by `root` or any of its descendants.
  std::uint64_t received_within(ProcessId root) const;

 private:
  std::unique_ptr<detail::Runtime> runtime_;
};

}  // namespace procnet
