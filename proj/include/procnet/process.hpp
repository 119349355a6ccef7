#pragma once

#include <coroutine>
#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "procnet/shape.hpp"
#include "procnet/word.hpp"

namespace procnet {

namespace detail {
struct Runtime;
}

/// Wiring a process declares before it is placed in a network. A process may
/// only read channels in `reads` and write channels in `writes`.
struct Interface {
  std::string name = "process";
  std::vector<ChannelId> reads;
  std::vector<ChannelId> writes;
  /// Data words received by this process (and its children) count towards
  /// the network's items_out metric.
  bool output = false;
  std::vector<std::string> warnings;
};

/// A suspended sequential behaviour. Processes are C++20 coroutines that
/// communicate through the awaitables below; nothing runs until the process is
/// handed to a Network (directly, or as a child through `par`).
class Process {
 public:
  struct promise_type {
    detail::Runtime* runtime = nullptr;
    ProcessId id{};
    std::exception_ptr error;
    std::vector<Word> received;
    std::size_t selected = 0;

    Process get_return_object() noexcept {
      return Process(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() noexcept {}
    void unhandled_exception() noexcept { error = std::current_exception(); }
  };
  using Handle = std::coroutine_handle<promise_type>;

  Process() = default;
  Process(Process&& other) noexcept
      : handle_(std::exchange(other.handle_, {})), iface_(std::move(other.iface_)) {}
  Process& operator=(Process&& other) noexcept;
  Process(const Process&) = delete;
  Process& operator=(const Process&) = delete;
  ~Process();

  Process& named(std::string name) &;
  Process& reads(const Port& port) &;
  Process& writes(const Port& port) &;
  Process& output() &;
  Process& warn(std::string message) &;

  Process&& named(std::string name) && { return std::move(named(std::move(name))); }
  Process&& reads(const Port& port) && { return std::move(reads(port)); }
  Process&& writes(const Port& port) && { return std::move(writes(port)); }
  Process&& output() && { return std::move(output()); }
  Process&& warn(std::string message) && { return std::move(warn(std::move(message))); }

  const Interface& interface() const { return iface_; }
  bool valid() const { return static_cast<bool>(handle_); }

 private:
  friend struct detail::Runtime;
  explicit Process(Handle h) : handle_(h) {}
  Handle release() { return std::exchange(handle_, {}); }

  Handle handle_;
  Interface iface_;
};

/// Outcome of a prioritized choice.
struct Selected {
  std::size_t index = 0;
  Word value;
};

/// Services available to a running process (see `context()`).
class Context {
 public:
  Context(detail::Runtime* runtime, ProcessId id) : runtime_(runtime), id_(id) {}

  /// Allocates fresh hidden channels for a sub-network of this process.
  Port alloc(const Shape& shape);
  /// Hands a word already received on `channel` to the next reader of that
  /// channel without another rendezvous. Used by guards that consume the
  /// first event of a construct before delegating the rest of it.
  void latch(ChannelId channel, Word value);
  int width() const;
  Word word(std::int64_t raw) const;
  ProcessId id() const { return id_; }

 private:
  detail::Runtime* runtime_;
  ProcessId id_;
};

namespace detail {

enum class OfferMode { All, Choice };

struct Op {
  ChannelId channel{};
  bool send = false;
  bool eot = false;
  Word value;
};

/// Base awaiter for communication. In All mode every op must complete
/// (independently, possibly in different cycles); in Choice mode exactly one
/// listed input fires, the earliest ready one in list order.
struct Offer {
  OfferMode mode = OfferMode::All;
  std::vector<Op> ops;
  Process::promise_type* promise = nullptr;

  bool await_ready() const noexcept { return ops.empty(); }
  bool await_suspend(Process::Handle h);
};

struct SendAwaiter : Offer {
  void await_resume() const noexcept {}
};

struct RecvAwaiter : Offer {
  Word await_resume() const { return promise->received.front(); }
};

struct RecvAllAwaiter : Offer {
  std::vector<Word> await_resume() const {
    return promise ? promise->received : std::vector<Word>{};
  }
};

struct SelectAwaiter : Offer {
  Selected await_resume() const {
    return Selected{promise->selected, promise->received.front()};
  }
};

struct ParAwaiter {
  std::vector<Process> children;

  bool await_ready() const noexcept { return children.empty(); }
  bool await_suspend(Process::Handle h);
  void await_resume() const noexcept {}
};

struct ContextAwaiter {
  Process::promise_type* promise = nullptr;

  bool await_ready() const noexcept { return false; }
  bool await_suspend(Process::Handle h) noexcept {
    promise = &h.promise();
    return false;
  }
  Context await_resume() const { return Context(promise->runtime, promise->id); }
};

}  // namespace detail

/// `ch ! value`
detail::SendAwaiter send(ChannelId channel, Word value);
/// `ch ! eot` on a stream's EOT channel.
detail::SendAwaiter send_eot(ChannelId channel);
/// Parallel sends, each completing independently.
detail::SendAwaiter send_all(std::vector<std::pair<ChannelId, Word>> sends);
detail::SendAwaiter send_all_eot(const std::vector<ChannelId>& channels);
/// `ch ? x`
detail::RecvAwaiter recv(ChannelId channel);
/// Interleaved inputs `(c1 ? x1 ||| c2 ? x2 ...)`; results in listed order.
detail::RecvAllAwaiter recv_all(const std::vector<ChannelId>& channels);
/// Prioritized choice over input guards; an empty list is a construction error.
detail::SelectAwaiter select(const std::vector<ChannelId>& alternatives);
/// Runs the children in parallel and resumes when all have terminated.
detail::ParAwaiter par(std::vector<Process> children);
detail::ParAwaiter par(Process child);
detail::ContextAwaiter context();

}  // namespace procnet
