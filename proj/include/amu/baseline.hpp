/*
 * Copyright 2026 The amu-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "amu/common.hpp"
#include "amu/engine.hpp"

// Synchronous baselines driven by the same far-memory nodes as the AMU:
// an in-order core that blocks on every load, and an out-of-order core whose
// memory parallelism is bounded by its ROB and MSHRs. No cache sits in
// front of memory.

namespace amu {

struct CoreParams {
  std::uint32_t rob_entries = 128;
  std::uint32_t mshr_entries = 10;
  std::uint32_t issue_width = 4;
  TimeNs cycle_ns = 1;

  void validate() const {
    if (rob_entries == 0 || mshr_entries == 0 || issue_width == 0 || cycle_ns == 0) {
      fail(Errc::BadParams, "core params must all be >= 1");
    }
  }
};

struct TraceOp {
  enum class Kind : std::uint8_t { MemLoad, Compute };
  Kind kind = Kind::MemLoad;
  Addr addr = 0;
  std::uint32_t size = static_cast<std::uint32_t>(kLineBytes);
  std::uint64_t cycles = 0;

  static TraceOp load(Addr a, std::uint32_t size = kLineBytes) { return {Kind::MemLoad, a, size, 0}; }
  // Also a dependency barrier: it starts once every older op has completed
  // and younger ops wait for it.
  static TraceOp compute(std::uint64_t c) { return {Kind::Compute, 0, 0, c}; }

  friend bool operator==(const TraceOp&, const TraceOp&) = default;
};

using Trace = std::vector<TraceOp>;

inline void validate_trace(const Trace& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceOp& op = trace[i];
    if (op.kind == TraceOp::Kind::MemLoad && (op.size == 0 || op.size > kLineBytes)) {
      fail(Errc::BadParams, "trace op " + std::to_string(i) + ": load size must be in [1, 64]");
    }
  }
}

/// Text form, one op per line: `L <addr-hex> <size>` or `C <cycles>`.
/// Blank lines and lines starting with '#' are ignored.
inline Trace parse_trace(std::istream& in) {
  Trace out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto bad = [&] { fail(Errc::ParseError, "trace line " + std::to_string(lineno) + ": '" + line + "'"); };
    if (tag == "L") {
      std::string addr;
      std::uint64_t size = 0;
      if (!(ls >> addr >> size)) bad();
      std::size_t used = 0;
      Addr a = 0;
      try {
        a = std::stoull(addr, &used, 16);
      } catch (const std::exception&) {
        bad();
      }
      if (used != addr.size()) bad();
      out.push_back(TraceOp::load(a, static_cast<std::uint32_t>(size)));
    } else if (tag == "C") {
      std::uint64_t c = 0;
      if (!(ls >> c)) bad();
      out.push_back(TraceOp::compute(c));
    } else {
      bad();
    }
    std::string rest;
    if (ls >> rest) bad();
  }
  validate_trace(out);
  return out;
}

inline void write_trace(std::ostream& os, const Trace& trace) {
  for (const TraceOp& op : trace) {
    if (op.kind == TraceOp::Kind::MemLoad) {
      os << "L " << MemorySystem::hex(op.addr) << ' ' << op.size << '\n';
    } else {
      os << "C " << op.cycles << '\n';
    }
  }
}

/// In-order core: each load stalls the core until memory answers.
class BlockingCore final : public Guest {
 public:
  BlockingCore(Simulator& sim, Trace trace, CoreParams params)
      : sim_(sim), self_(sim.guest_count()), trace_(std::move(trace)), params_(params) {
    params_.validate();
    validate_trace(trace_);
  }

  std::string_view name() const override { return "blocking"; }

  Yield step(GuestApi& api) override {
    if (in_flight_) return Yield::wait();
    while (next_ < trace_.size()) {
      const TraceOp& op = trace_[next_++];
      if (op.kind == TraceOp::Kind::Compute) {
        if (op.cycles > 0) return Yield::after(op.cycles * params_.cycle_ns);
        continue;
      }
      in_flight_ = true;
      sim_.memory_access(api.now(), op.addr, op.size, RequestKind::Load, [this](TimeNs) {
        in_flight_ = false;
        sim_.wake(self_);
      });
      return Yield::wait();
    }
    return Yield::done();
  }

  std::string status() const override {
    const int n = in_flight_ ? 1 : 0;
    return "core=blocking rob=" + std::to_string(n) + "/1 mshr=" + std::to_string(n) + "/1 pc=" + std::to_string(next_);
  }

 private:
  Simulator& sim_;
  std::size_t self_;
  Trace trace_;
  CoreParams params_;
  std::size_t next_ = 0;
  bool in_flight_ = false;
};

/// Out-of-order core. Per cycle: retire up to issue_width completed ops from
/// the ROB head, dispatch up to issue_width ops into the ROB, and issue up to
/// issue_width loads while MSHRs are free. The instruction queue is folded
/// into the ROB window.
class OooCore final : public Guest {
 public:
  OooCore(Simulator& sim, Trace trace, CoreParams params)
      : sim_(sim), self_(sim.guest_count()), trace_(std::move(trace)), params_(params) {
    params_.validate();
    validate_trace(trace_);
  }

  std::string_view name() const override { return "ooo"; }

  Yield step(GuestApi& api) override {
    const TimeNs t = api.now();
    const std::uint32_t width = params_.issue_width;

    for (Entry& e : rob_) {
      if (e.state == State::Executing && e.done_at <= t) e.state = State::Done;
    }

    for (std::uint32_t n = 0; n < width && !rob_.empty() && rob_.front().state == State::Done; ++n) {
      check_invariant(rob_.front().trace_index == retired_, "retirement out of trace order");
      rob_.pop_front();
      ++retired_;
    }

    for (std::uint32_t n = 0; n < width && next_ < trace_.size() && rob_.size() < params_.rob_entries; ++n) {
      rob_.push_back(Entry{next_++, State::Waiting, 0});
    }

    std::uint32_t issued = 0;
    bool older_all_done = true;
    bool barrier = false;
    for (Entry& e : rob_) {
      const TraceOp& op = trace_[e.trace_index];
      if (op.kind == TraceOp::Kind::Compute) {
        if (e.state == State::Waiting && older_all_done) {
          e.done_at = t + op.cycles * params_.cycle_ns;
          e.state = op.cycles == 0 ? State::Done : State::Executing;
        }
        if (e.state != State::Done) barrier = true;
      } else if (e.state == State::Waiting && !barrier && mshr_used_ < params_.mshr_entries && issued < width) {
        e.state = State::Issued;
        ++mshr_used_;
        ++issued;
        const std::size_t idx = e.trace_index;
        sim_.memory_access(t, op.addr, op.size, RequestKind::Load, [this, idx](TimeNs) { on_load_done(idx); });
      }
      if (e.state != State::Done) older_all_done = false;
    }

    check_invariant(mshr_used_ <= params_.mshr_entries, "MSHR bound exceeded");
    check_invariant(rob_.size() <= params_.rob_entries, "ROB bound exceeded");

    if (rob_.empty() && next_ == trace_.size()) return Yield::done();

    bool more_now = (next_ < trace_.size() && rob_.size() < params_.rob_entries) ||
                    (!rob_.empty() && rob_.front().state == State::Done);
    bool executing = false;
    bool issuable = false;
    barrier = false;
    for (const Entry& e : rob_) {
      const TraceOp& op = trace_[e.trace_index];
      if (op.kind == TraceOp::Kind::Compute) {
        executing |= e.state == State::Executing;
        if (e.state != State::Done) barrier = true;
      } else if (e.state == State::Waiting && !barrier && mshr_used_ < params_.mshr_entries) {
        issuable = true;
      }
    }
    if (more_now || issuable || executing) return Yield::after(params_.cycle_ns);
    return Yield::wait();
  }

  std::string status() const override {
    return "core=ooo rob=" + std::to_string(rob_.size()) + "/" + std::to_string(params_.rob_entries) +
           " mshr=" + std::to_string(mshr_used_) + "/" + std::to_string(params_.mshr_entries) +
           " retired=" + std::to_string(retired_);
  }

 private:
  enum class State : std::uint8_t { Waiting, Issued, Executing, Done };

  struct Entry {
    std::size_t trace_index;
    State state;
    TimeNs done_at;
  };

  void on_load_done(std::size_t trace_index) {
    check_invariant(!rob_.empty() && trace_index >= rob_.front().trace_index, "load completed outside the ROB");
    Entry& e = rob_[trace_index - rob_.front().trace_index];
    check_invariant(e.state == State::Issued, "load completed twice");
    e.state = State::Done;
    --mshr_used_;
    sim_.wake(self_);
  }

  Simulator& sim_;
  std::size_t self_;
  Trace trace_;
  CoreParams params_;
  std::deque<Entry> rob_;
  std::size_t next_ = 0;
  std::size_t retired_ = 0;
  std::uint32_t mshr_used_ = 0;
};

template <class Core>
MetricsRecord run_core(const Trace& trace, const std::vector<NodeParams>& nodes, const CoreParams& params,
                       std::uint64_t seed, SimOptions opts = {}, std::optional<TimeNs> stop = std::nullopt,
                       TraceSink* sink = nullptr) {
  Simulator sim(MachineConfig{}, nodes, seed, opts);
  sim.set_trace(sink);
  sim.register_guest(std::make_unique<Core>(sim, trace, params));
  if (stop) {
    sim.run_until(*stop);
  } else {
    sim.run();
  }
  check_invariant(sim.conservation_holds(), "byte conservation violated");
  return sim.finalize();
}

inline MetricsRecord run_blocking(const Trace& trace, const std::vector<NodeParams>& nodes,
                                  const CoreParams& params, std::uint64_t seed = 1, SimOptions opts = {},
                                  std::optional<TimeNs> stop = std::nullopt, TraceSink* sink = nullptr) {
  return run_core<BlockingCore>(trace, nodes, params, seed, opts, stop, sink);
}

inline MetricsRecord run_windowed_ooo(const Trace& trace, const std::vector<NodeParams>& nodes,
                                      const CoreParams& params, std::uint64_t seed = 1, SimOptions opts = {},
                                      std::optional<TimeNs> stop = std::nullopt, TraceSink* sink = nullptr) {
  return run_core<OooCore>(trace, nodes, params, seed, opts, stop, sink);
}

}  // namespace amu
