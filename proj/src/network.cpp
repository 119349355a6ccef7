#include "procnet/network.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "procnet/errors.hpp"

namespace procnet {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Deadlock: return "deadlock";
    case RunStatus::CycleBudgetExceeded: return "cycle-budget-exceeded";
    case RunStatus::ProtocolError: return "protocol-error";
  }
  return "?";
}

std::optional<double> TraceMetrics::throughput() const {
  if (cycles == 0) return std::nullopt;
  return static_cast<double>(items_out) / static_cast<double>(cycles);
}

namespace {

enum class ChannelKind { Data, Eot };
enum class ProcState { Runnable, Blocked, Joining, Terminated };

std::string channel_name(ChannelId c) { return "c" + std::to_string(index_of(c)); }

std::vector<ChannelId> sorted_unique(std::vector<ChannelId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const std::vector<ChannelId>& sorted, ChannelId c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

}  // namespace

namespace detail {

struct Runtime {
  struct ChannelRecord {
    ChannelKind kind = ChannelKind::Data;
    std::string site;
    bool root = false;
    std::optional<Word> latched;
    bool has_writer = false;
    ProcessId writer{};
    std::uint32_t writer_op = 0;
    int monitor = -1;
  };

  struct ProcessRecord {
    Process::Handle handle;
    std::string name;
    std::string site;
    std::optional<ProcessId> parent;
    ProcState state = ProcState::Runnable;
    std::vector<ChannelId> reads;
    std::vector<ChannelId> writes;
    std::vector<ChannelId> hidden;
    bool output = false;

    OfferMode mode = OfferMode::All;
    std::vector<Op> ops;
    std::vector<bool> done;
    std::size_t remaining = 0;

    std::size_t pending_children = 0;
    std::uint32_t allocs = 0;
    std::uint64_t received = 0;
  };

  struct Monitor {
    std::string name;
    ChannelId eot{};
    std::uint32_t eots = 0;
  };

  int width = Word::kDefaultWidth;
  std::uint64_t cycle = 0;
  std::uint64_t communications = 0;
  std::uint64_t items_out = 0;

  // Deques keep references stable while coroutines spawn children mid-resume.
  std::deque<ChannelRecord> channels;
  std::deque<ProcessRecord> processes;
  std::set<ProcessId> runnable;
  std::set<ProcessId> readers;
  std::size_t live = 0;

  std::vector<Monitor> monitors;
  std::vector<TransferEvent> trace;
  std::vector<std::string> warnings;
  std::set<std::string> process_sites;
  std::set<std::string> channel_sites;

  std::size_t root_ports = 0;
  std::size_t root_processes = 0;
  std::map<ChannelId, ProcessId> root_writers;
  std::map<ChannelId, ProcessId> root_readers;
  bool sealed = false;
  std::optional<std::string> failure;

  ProcessRecord& proc(ProcessId id) { return processes[index_of(id)]; }
  const ProcessRecord& proc(ProcessId id) const { return processes[index_of(id)]; }
  ChannelRecord& chan(ChannelId id) { return channels.at(index_of(id)); }

  ChannelId new_channel(ChannelKind kind, std::string site, bool root) {
    const auto id = static_cast<ChannelId>(channels.size());
    ChannelRecord rec;
    rec.kind = kind;
    rec.site = site;
    rec.root = root;
    channels.push_back(std::move(rec));
    channel_sites.insert(std::move(site));
    return id;
  }

  Port build_port(const Shape& shape, const std::string& prefix, int& counter, bool root) {
    switch (shape.kind()) {
      case Construct::Item:
        return Port::item(
            new_channel(ChannelKind::Data, prefix + "." + std::to_string(counter++), root));
      case Construct::Stream: {
        Port element = build_port(shape.element(), prefix, counter, root);
        const ChannelId eot =
            new_channel(ChannelKind::Eot, prefix + "." + std::to_string(counter++), root);
        return Port::stream(std::move(element), eot);
      }
      case Construct::Vector: {
        std::vector<Port> elems;
        for (std::size_t i = 0; i < shape.size(); ++i) {
          elems.push_back(build_port(shape.element(), prefix, counter, root));
        }
        return Port::vector(std::move(elems));
      }
      case Construct::Tuple: {
        std::vector<Port> fields;
        for (std::size_t i = 0; i < shape.size(); ++i) {
          fields.push_back(build_port(shape.field(i), prefix, counter, root));
        }
        return Port::tuple(std::move(fields));
      }
    }
    throw ConstructionError("unknown construct");
  }

  void install_monitors(const Port& port, const std::string& name) {
    switch (port.kind()) {
      case Construct::Item: return;
      case Construct::Stream: {
        const int id = static_cast<int>(monitors.size());
        monitors.push_back(Monitor{name, port.eot(), 0});
        for (ChannelId c : port.channels()) chan(c).monitor = id;
        return;
      }
      case Construct::Vector:
      case Construct::Tuple:
        for (std::size_t i = 0; i < port.size(); ++i) {
          install_monitors(port[i], name + "[" + std::to_string(i) + "]");
        }
        return;
    }
  }

  Port allocate(const Shape& shape, const std::string& prefix, bool root) {
    int counter = 0;
    Port port = build_port(shape, prefix, counter, root);
    install_monitors(port, prefix);
    return port;
  }

  void register_process(ProcessId id, Process& p, std::string site,
                        std::optional<ProcessId> parent, bool inherited_output) {
    ProcessRecord rec;
    const Interface& iface = p.interface();
    rec.name = iface.name;
    rec.site = std::move(site);
    rec.parent = parent;
    rec.reads = sorted_unique(iface.reads);
    rec.writes = sorted_unique(iface.writes);
    rec.output = iface.output || inherited_output;
    for (const auto& w : iface.warnings) warnings.push_back(rec.site + ": " + w);
    rec.handle = p.release();
    rec.handle.promise().runtime = this;
    rec.handle.promise().id = id;
    processes.push_back(std::move(rec));
    runnable.insert(id);
    ++live;
  }

  static void check_disjoint(const Interface& iface) {
    auto r = sorted_unique(iface.reads);
    for (ChannelId c : iface.writes) {
      if (contains(r, c)) {
        throw ConstructionError("process '" + iface.name + "' both reads and writes " +
                                channel_name(c));
      }
    }
  }

  // ---- construction ---------------------------------------------------------

  ProcessId add_root(Process p) {
    if (sealed) throw ConstructionError("cannot add processes to a running network");
    if (!p.valid()) throw ConstructionError("cannot add an empty process");
    const Interface& iface = p.interface();
    check_disjoint(iface);
    const auto id = static_cast<ProcessId>(processes.size());
    for (ChannelId c : sorted_unique(iface.writes)) {
      if (index_of(c) >= channels.size() || !chan(c).root) {
        throw ConstructionError("process '" + iface.name + "' writes " + channel_name(c) +
                                " which is not a network port channel");
      }
      if (auto it = root_writers.find(c); it != root_writers.end()) {
        throw ConstructionError("channel " + channel_name(c) + " has two writers: '" +
                                proc(it->second).name + "' and '" + iface.name + "'");
      }
    }
    for (ChannelId c : sorted_unique(iface.reads)) {
      if (index_of(c) >= channels.size() || !chan(c).root) {
        throw ConstructionError("process '" + iface.name + "' reads " + channel_name(c) +
                                " which is not a network port channel");
      }
      if (auto it = root_readers.find(c); it != root_readers.end()) {
        throw ConstructionError("channel " + channel_name(c) + " has two readers: '" +
                                proc(it->second).name + "' and '" + iface.name + "'");
      }
    }
    for (ChannelId c : iface.writes) root_writers[c] = id;
    for (ChannelId c : iface.reads) root_readers[c] = id;
    const std::string site = iface.name + "#" + std::to_string(root_processes++);
    register_process(id, p, site, std::nullopt, false);
    return id;
  }

  void seal() {
    if (sealed) return;
    for (std::size_t i = 0; i < channels.size(); ++i) {
      if (!channels[i].root) continue;
      const auto c = static_cast<ChannelId>(i);
      if (!root_writers.count(c)) {
        throw ConstructionError("network is not closed: channel " + channel_name(c) + " (" +
                                channels[i].site + ") has no writer");
      }
      if (!root_readers.count(c)) {
        throw ConstructionError("network is not closed: channel " + channel_name(c) + " (" +
                                channels[i].site + ") has no reader");
      }
    }
    sealed = true;
  }

  // ---- requests from running processes --------------------------------------

  bool submit(ProcessId id, Offer& offer) {
    ProcessRecord& rec = proc(id);
    auto& promise = rec.handle.promise();
    for (const Op& op : offer.ops) {
      if (index_of(op.channel) >= channels.size()) {
        throw ProtocolError("process '" + rec.site + "' used unknown channel " +
                            channel_name(op.channel));
      }
      const ChannelRecord& c = chan(op.channel);
      if (op.send) {
        if (!contains(rec.writes, op.channel)) {
          throw ProtocolError("process '" + rec.site + "' wrote " + channel_name(op.channel) +
                              " which it does not own");
        }
        if (op.eot != (c.kind == ChannelKind::Eot)) {
          throw ProtocolError("process '" + rec.site + "' sent " +
                              (op.eot ? "EOT on data channel " : "data on EOT channel ") +
                              channel_name(op.channel));
        }
      } else if (!contains(rec.reads, op.channel)) {
        throw ProtocolError("process '" + rec.site + "' read " + channel_name(op.channel) +
                            " which it does not own");
      }
      if (offer.mode == OfferMode::Choice && op.send) {
        throw ConstructionError("prioritized choice accepts input guards only");
      }
    }
    process_sites.insert(rec.site);

    if (offer.mode == OfferMode::Choice) {
      promise.received.assign(1, Word{});
      for (std::size_t i = 0; i < offer.ops.size(); ++i) {
        ChannelRecord& c = chan(offer.ops[i].channel);
        if (c.latched) {
          promise.selected = i;
          promise.received[0] = *c.latched;
          c.latched.reset();
          return false;
        }
      }
      rec.mode = OfferMode::Choice;
      rec.ops = offer.ops;
      rec.done.assign(rec.ops.size(), false);
      rec.remaining = 1;
      rec.state = ProcState::Blocked;
      readers.insert(id);
      return true;
    }

    promise.received.assign(offer.ops.size(), Word{});
    rec.mode = OfferMode::All;
    rec.ops = offer.ops;
    rec.done.assign(rec.ops.size(), false);
    rec.remaining = rec.ops.size();
    bool pending_input = false;
    for (std::size_t i = 0; i < rec.ops.size(); ++i) {
      const Op& op = rec.ops[i];
      ChannelRecord& c = chan(op.channel);
      if (op.send) continue;
      if (c.latched) {
        promise.received[i] = *c.latched;
        c.latched.reset();
        rec.done[i] = true;
        --rec.remaining;
      } else {
        pending_input = true;
      }
    }
    if (rec.remaining == 0) {
      rec.ops.clear();
      return false;
    }
    for (std::size_t i = 0; i < rec.ops.size(); ++i) {
      const Op& op = rec.ops[i];
      if (!op.send) continue;
      ChannelRecord& c = chan(op.channel);
      if (c.has_writer) {
        throw ProtocolError("channel " + channel_name(op.channel) + " already has a pending writer");
      }
      c.has_writer = true;
      c.writer = id;
      c.writer_op = static_cast<std::uint32_t>(i);
    }
    if (pending_input) readers.insert(id);
    rec.state = ProcState::Blocked;
    return true;
  }

  void spawn(ProcessId parent, std::vector<Process>& children) {
    ProcessRecord& prec = proc(parent);
    std::map<ChannelId, std::string> writer_of;
    std::map<ChannelId, std::string> reader_of;
    for (auto& child : children) {
      if (!child.valid()) throw ConstructionError("par: empty child process");
      const Interface& iface = child.interface();
      check_disjoint(iface);
      for (ChannelId c : sorted_unique(iface.reads)) {
        if (!contains(prec.reads, c) && !contains(prec.hidden, c)) {
          throw ConstructionError("child '" + iface.name + "' of '" + prec.site + "' reads " +
                                  channel_name(c) + " which its parent cannot pass down");
        }
        if (!reader_of.emplace(c, iface.name).second) {
          throw ConstructionError("channel " + channel_name(c) + " has two readers: '" +
                                  reader_of[c] + "' and '" + iface.name + "'");
        }
      }
      for (ChannelId c : sorted_unique(iface.writes)) {
        if (!contains(prec.writes, c) && !contains(prec.hidden, c)) {
          throw ConstructionError("child '" + iface.name + "' of '" + prec.site + "' writes " +
                                  channel_name(c) + " which its parent cannot pass down");
        }
        if (!writer_of.emplace(c, iface.name).second) {
          throw ConstructionError("channel " + channel_name(c) + " has two writers: '" +
                                  writer_of[c] + "' and '" + iface.name + "'");
        }
      }
    }
    for (ChannelId c : prec.hidden) {
      const bool r = reader_of.count(c) > 0;
      const bool w = writer_of.count(c) > 0;
      if (r != w) {
        throw ConstructionError("hidden channel " + channel_name(c) + " of '" + prec.site +
                                "' has a " + (r ? "reader" : "writer") + " but no " +
                                (r ? "writer" : "reader"));
      }
    }

    const std::string base = prec.site;
    const bool out = prec.output;
    for (std::size_t i = 0; i < children.size(); ++i) {
      const auto id = static_cast<ProcessId>(processes.size());
      const std::string site = base + "/" + children[i].interface().name + "#" + std::to_string(i);
      register_process(id, children[i], site, parent, out);
    }
    ProcessRecord& p = proc(parent);
    p.pending_children = children.size();
    p.state = ProcState::Joining;
  }

  Port alloc_hidden(ProcessId id, const Shape& shape) {
    ProcessRecord& rec = proc(id);
    const std::string prefix = rec.site + "@" + std::to_string(rec.allocs++);
    Port port = allocate(shape, prefix, false);
    auto chans = port.channels();
    rec.hidden.insert(rec.hidden.end(), chans.begin(), chans.end());
    std::sort(rec.hidden.begin(), rec.hidden.end());
    return port;
  }

  void latch(ProcessId id, ChannelId c, Word value) {
    ProcessRecord& rec = proc(id);
    if (!contains(rec.reads, c)) {
      throw ProtocolError("process '" + rec.site + "' latched " + channel_name(c) +
                          " which it does not read");
    }
    ChannelRecord& ch = chan(c);
    if (ch.latched) throw ProtocolError("channel " + channel_name(c) + " already holds a latched word");
    ch.latched = value;
  }

  // ---- scheduling -----------------------------------------------------------

  void finish(ProcessId id) {
    ProcessRecord& rec = proc(id);
    std::exception_ptr err = rec.handle.promise().error;
    rec.handle.destroy();
    rec.handle = {};
    rec.state = ProcState::Terminated;
    --live;
    if (err) {
      try {
        std::rethrow_exception(err);
      } catch (const ConstructionError& e) {
        failure = "construction error in '" + rec.site + "': " + e.what();
      } catch (const std::exception& e) {
        failure = "protocol error in '" + rec.site + "': " + e.what();
      }
      return;
    }
    if (rec.parent) {
      ProcessRecord& p = proc(*rec.parent);
      if (--p.pending_children == 0) {
        p.state = ProcState::Runnable;
        runnable.insert(*rec.parent);
      }
    }
  }

  void settle() {
    while (!runnable.empty() && !failure) {
      const ProcessId id = *runnable.begin();
      runnable.erase(runnable.begin());
      Process::Handle h = proc(id).handle;
      h.resume();
      if (h.done()) finish(id);
    }
  }

  void note_monitor(ChannelId c, bool eot) {
    const int m = chan(c).monitor;
    if (m < 0) return;
    Monitor& mon = monitors[static_cast<std::size_t>(m)];
    if (mon.eots > 0) {
      failure = "stream protocol violation on '" + mon.name + "': " +
                (eot ? "second EOT" : "data after EOT") + " on " + channel_name(c);
    }
    if (eot && c == mon.eot) ++mon.eots;
  }

  void complete(ProcessId id) {
    ProcessRecord& rec = proc(id);
    rec.ops.clear();
    rec.done.clear();
    rec.state = ProcState::Runnable;
    readers.erase(id);
    runnable.insert(id);
  }

  std::size_t match_commit() {
    struct Match {
      ProcessId reader;
      std::uint32_t op;
      ChannelId channel;
    };
    std::vector<Match> matches;
    for (ProcessId r : readers) {
      const ProcessRecord& rec = proc(r);
      for (std::size_t i = 0; i < rec.ops.size(); ++i) {
        const Op& op = rec.ops[i];
        if (op.send || rec.done[i]) continue;
        if (chan(op.channel).has_writer) {
          matches.push_back(Match{r, static_cast<std::uint32_t>(i), op.channel});
          if (rec.mode == OfferMode::Choice) break;
        }
      }
    }
    if (matches.empty()) return 0;
    ++cycle;

    std::set<ProcessId> touched;
    for (const Match& m : matches) {
      ChannelRecord& c = chan(m.channel);
      const ProcessId w = c.writer;
      ProcessRecord& wrec = proc(w);
      const Op& wop = wrec.ops[c.writer_op];
      const Word value = wop.value;
      const bool eot = wop.eot;
      wrec.done[c.writer_op] = true;
      --wrec.remaining;
      c.has_writer = false;

      ProcessRecord& rrec = proc(m.reader);
      auto& promise = rrec.handle.promise();
      if (rrec.mode == OfferMode::Choice) {
        promise.selected = m.op;
        promise.received[0] = value;
        rrec.remaining = 0;
      } else {
        promise.received[m.op] = value;
        rrec.done[m.op] = true;
        --rrec.remaining;
      }
      ++rrec.received;
      ++communications;
      if (!eot && rrec.output) ++items_out;
      trace.push_back(TransferEvent{cycle, m.channel, eot, value, w, m.reader});
      note_monitor(m.channel, eot);
      touched.insert(w);
      touched.insert(m.reader);
    }
    for (ProcessId id : touched) {
      ProcessRecord& rec = proc(id);
      if (rec.remaining == 0) {
        complete(id);
        continue;
      }
      bool input_left = false;
      for (std::size_t i = 0; i < rec.ops.size(); ++i) {
        if (!rec.ops[i].send && !rec.done[i]) input_left = true;
      }
      if (!input_left) readers.erase(id);
    }
    return matches.size();
  }

  std::vector<BlockedProcess> blocked() const {
    std::vector<BlockedProcess> out;
    for (std::size_t i = 0; i < processes.size(); ++i) {
      const ProcessRecord& rec = processes[i];
      if (rec.state != ProcState::Blocked) continue;
      BlockedProcess b;
      b.id = static_cast<ProcessId>(i);
      b.site = rec.site;
      for (std::size_t k = 0; k < rec.ops.size(); ++k) {
        if (rec.done[k]) continue;
        b.offers.push_back(channel_name(rec.ops[k].channel) + (rec.ops[k].send ? "!" : "?"));
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  TraceMetrics metrics() const {
    TraceMetrics m;
    m.cycles = cycle;
    m.communications = communications;
    m.process_count = process_sites.size();
    m.channel_count = channel_sites.size();
    m.items_out = items_out;
    return m;
  }

  StreamAudit audit() const {
    StreamAudit a;
    a.monitored = monitors.size();
    for (const auto& m : monitors) {
      if (m.eots == 1) {
        ++a.terminated_once;
      } else {
        a.violations.push_back("stream '" + m.name + "' delivered " + std::to_string(m.eots) +
                               " EOTs");
      }
    }
    return a;
  }

  ~Runtime() {
    for (auto& rec : processes) {
      if (rec.handle) rec.handle.destroy();
    }
  }
};

bool Offer::await_suspend(Process::Handle h) {
  promise = &h.promise();
  return promise->runtime->submit(promise->id, *this);
}

bool ParAwaiter::await_suspend(Process::Handle h) {
  auto& promise = h.promise();
  promise.runtime->spawn(promise.id, children);
  return true;
}

}  // namespace detail

// ---- Process ----------------------------------------------------------------

Process& Process::operator=(Process&& other) noexcept {
  if (this != &other) {
    if (handle_) handle_.destroy();
    handle_ = std::exchange(other.handle_, {});
    iface_ = std::move(other.iface_);
  }
  return *this;
}

Process::~Process() {
  if (handle_) handle_.destroy();
}

Process& Process::named(std::string name) & {
  iface_.name = std::move(name);
  return *this;
}

Process& Process::reads(const Port& port) & {
  port.collect_channels(iface_.reads);
  return *this;
}

Process& Process::writes(const Port& port) & {
  port.collect_channels(iface_.writes);
  return *this;
}

Process& Process::output() & {
  iface_.output = true;
  return *this;
}

Process& Process::warn(std::string message) & {
  iface_.warnings.push_back(std::move(message));
  return *this;
}

Port Context::alloc(const Shape& shape) { return runtime_->alloc_hidden(id_, shape); }

void Context::latch(ChannelId channel, Word value) { runtime_->latch(id_, channel, value); }

int Context::width() const { return runtime_->width; }

Word Context::word(std::int64_t raw) const { return Word::wrap(raw, runtime_->width); }

detail::SendAwaiter send(ChannelId channel, Word value) {
  detail::SendAwaiter a;
  a.ops.push_back(detail::Op{channel, true, false, value});
  return a;
}

detail::SendAwaiter send_eot(ChannelId channel) {
  detail::SendAwaiter a;
  a.ops.push_back(detail::Op{channel, true, true, Word{}});
  return a;
}

detail::SendAwaiter send_all(std::vector<std::pair<ChannelId, Word>> sends) {
  detail::SendAwaiter a;
  for (const auto& [c, w] : sends) a.ops.push_back(detail::Op{c, true, false, w});
  return a;
}

detail::SendAwaiter send_all_eot(const std::vector<ChannelId>& channels) {
  detail::SendAwaiter a;
  for (ChannelId c : channels) a.ops.push_back(detail::Op{c, true, true, Word{}});
  return a;
}

detail::RecvAwaiter recv(ChannelId channel) {
  detail::RecvAwaiter a;
  a.ops.push_back(detail::Op{channel, false, false, Word{}});
  return a;
}

detail::RecvAllAwaiter recv_all(const std::vector<ChannelId>& channels) {
  detail::RecvAllAwaiter a;
  for (ChannelId c : channels) a.ops.push_back(detail::Op{c, false, false, Word{}});
  return a;
}

detail::SelectAwaiter select(const std::vector<ChannelId>& alternatives) {
  if (alternatives.empty()) throw ConstructionError("select over an empty alternative list");
  detail::SelectAwaiter a;
  a.mode = detail::OfferMode::Choice;
  for (ChannelId c : alternatives) a.ops.push_back(detail::Op{c, false, false, Word{}});
  return a;
}

detail::ParAwaiter par(std::vector<Process> children) {
  return detail::ParAwaiter{std::move(children)};
}

detail::ParAwaiter par(Process child) {
  detail::ParAwaiter a;
  a.children.push_back(std::move(child));
  return a;
}

detail::ContextAwaiter context() { return {}; }

// ---- Network ----------------------------------------------------------------

Network::Network(int width) : runtime_(std::make_unique<detail::Runtime>()) {
  Word::check_width(width);
  runtime_->width = width;
}

Network::~Network() = default;
Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;

int Network::width() const { return runtime_->width; }

Port Network::make_port(const Shape& shape, std::string_view name) {
  if (runtime_->sealed) throw ConstructionError("cannot add ports to a running network");
  const std::string prefix = std::string(name) + "@" + std::to_string(runtime_->root_ports++);
  return runtime_->allocate(shape, prefix, true);
}

ProcessId Network::add(Process process) { return runtime_->add_root(std::move(process)); }

void Network::seal() { runtime_->seal(); }

StepOutcome Network::step() {
  auto& rt = *runtime_;
  rt.seal();
  StepOutcome out;
  rt.settle();
  if (rt.failure) {
    out.failed = true;
    return out;
  }
  if (rt.live == 0) {
    out.finished = true;
    return out;
  }
  out.transfers = rt.match_commit();
  out.failed = rt.failure.has_value();
  return out;
}

RunResult Network::run_to_completion(std::uint64_t max_cycles) {
  if (max_cycles == 0) throw std::invalid_argument("max_cycles must be positive");
  auto& rt = *runtime_;
  rt.seal();
  RunResult result;
  auto fail = [&](RunStatus status, std::string message) {
    result.status = status;
    result.diagnostic = std::move(message);
    result.blocked = rt.blocked();
    result.metrics = rt.metrics();
    return result;
  };
  for (;;) {
    rt.settle();
    if (rt.failure) return fail(RunStatus::ProtocolError, *rt.failure);
    if (rt.live == 0) {
      const StreamAudit audit = rt.audit();
      if (!audit.violations.empty()) {
        return fail(RunStatus::ProtocolError, audit.violations.front());
      }
      result.status = RunStatus::Completed;
      result.metrics = rt.metrics();
      return result;
    }
    if (rt.cycle >= max_cycles) {
      return fail(RunStatus::CycleBudgetExceeded,
                  "cycle budget of " + std::to_string(max_cycles) + " exhausted with " +
                      std::to_string(rt.live) + " live processes");
    }
    const std::size_t n = rt.match_commit();
    if (rt.failure) return fail(RunStatus::ProtocolError, *rt.failure);
    if (n == 0) {
      auto b = rt.blocked();
      std::ostringstream msg;
      msg << "deadlock at cycle " << rt.cycle << ":";
      for (const auto& p : b) {
        msg << " " << p.site << " {";
        for (std::size_t i = 0; i < p.offers.size(); ++i) msg << (i ? " " : "") << p.offers[i];
        msg << "}";
      }
      return fail(RunStatus::Deadlock, msg.str());
    }
  }
}

std::uint64_t Network::cycle() const { return runtime_->cycle; }

TraceMetrics Network::metrics() const { return runtime_->metrics(); }

const std::vector<TransferEvent>& Network::trace() const { return runtime_->trace; }

const std::vector<std::string>& Network::warnings() const { return runtime_->warnings; }

StreamAudit Network::audit_streams() const { return runtime_->audit(); }

std::vector<ProcessId> Network::find(std::string_view name) const {
  std::vector<ProcessId> out;
  for (std::size_t i = 0; i < runtime_->processes.size(); ++i) {
    if (runtime_->processes[i].name == name) out.push_back(static_cast<ProcessId>(i));
  }
  return out;
}

std::string Network::site_of(ProcessId id) const { return runtime_->proc(id).site; }

std::uint64_t Network::received_within(ProcessId root) const {
  std::uint64_t total = 0;
  const auto& procs = runtime_->processes;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    std::optional<ProcessId> cur = static_cast<ProcessId>(i);
    while (cur && *cur != root) cur = procs[index_of(*cur)].parent;
    if (cur) total += procs[i].received;
  }
  return total;
}

}  // namespace procnet
