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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amu/common.hpp"
#include "amu/event_queue.hpp"
#include "amu/far_memory.hpp"
#include "amu/isa.hpp"
#include "amu/machine_state.hpp"
#include "amu/metrics.hpp"
#include "amu/pattern.hpp"

namespace amu {

/// What a guest does after a step.
struct Yield {
  enum class Kind { After, Wait, Done };
  Kind kind = Kind::Done;
  TimeNs delay = 0;

  // Step again `ns` after the instructions of this step retire.
  static Yield after(TimeNs ns) { return {Kind::After, ns}; }
  // Sleep until woken: by any AMU completion, or by Simulator::wake. Stands
  // in for spinning on getfin without simulating each failed poll.
  static Yield wait() { return {Kind::Wait, 0}; }
  static Yield done() { return {Kind::Done, 0}; }
};

/// Guest code run by the event loop. A step may call any GuestApi operation.
class Guest {
 public:
  virtual ~Guest() = default;
  virtual std::string_view name() const = 0;
  virtual Yield step(GuestApi& api) = 0;
  // Extra `key=value` tokens for the GuestStep trace line.
  virtual std::string status() const { return {}; }
};

struct SimOptions {
  TimeNs sample_interval_ns = 0;  // 0 disables Sample events
  TimeNs warmup_ns = 0;
};

/// One simulated core with its AMU, attached far-memory nodes and guests.
///
/// Requests reach the memory system issue_cost_ns after issue, are split into
/// granule sub-requests and routed by address. When the last sub-request of
/// a request completes, its copies are applied in sub-request order and its
/// id joins the completion queue. Store data is read from the scratchpad when
/// each sub-request starts service.
class Simulator final : public RequestSink {
 public:
  Simulator(const MachineConfig& machine, const std::vector<NodeParams>& nodes, std::uint64_t seed,
            SimOptions opts = {})
      : machine_(machine),
        memory_(nodes, seed),
        metrics_(opts.warmup_ns, nodes.size()),
        opts_(opts),
        spm_loaded_(nodes.size(), 0),
        mem_stored_(nodes.size(), 0),
        raw_loaded_(nodes.size(), 0),
        raw_stored_(nodes.size(), 0) {}

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  MachineState& machine() noexcept { return machine_; }
  const MachineState& machine() const noexcept { return machine_; }
  MemorySystem& memory() noexcept { return memory_; }
  const MemorySystem& memory() const noexcept { return memory_; }
  EventQueue& events() noexcept { return events_; }
  TimeNs now() const noexcept { return events_.now(); }

  void set_trace(TraceSink* sink) noexcept { events_.set_trace(sink); }
  void set_observer(EffectObserver* obs) noexcept {
    observer_ = obs;
    machine_.set_observer(obs);
  }

  // Initial memory image, written before or outside timed execution.
  void host_write(Addr addr, std::span<const std::byte> bytes) {
    memory_.write(addr, bytes);
    if (observer_) observer_->on_host_write(addr, bytes);
  }

  std::size_t register_guest(std::unique_ptr<Guest> guest) {
    const std::size_t id = guests_.size();
    guests_.push_back(GuestSlot{std::move(guest)});
    guests_.back().local_end = now();
    schedule_guest(id, now());
    return id;
  }

  std::size_t guest_count() const noexcept { return guests_.size(); }
  Guest& guest(std::size_t id) { return *guests_.at(id).guest; }
  bool guest_done(std::size_t id) const { return guests_.at(id).done; }

  // Resumes a waiting guest no earlier than its last step's end.
  void wake(std::size_t id) {
    GuestSlot& g = guests_.at(id);
    if (!g.waiting) return;
    g.waiting = false;
    schedule_guest(id, std::max(now(), g.local_end));
  }

  void run_until(TimeNs t) {
    arm_sampling();
    events_.run_until(t);
  }

  void run() {
    arm_sampling();
    events_.run();
  }

  // A plain memory access that bypasses the AMU (baseline cores).
  // `on_done` runs at completion time.
  void memory_access(TimeNs at, Addr addr, std::uint32_t size, RequestKind kind,
                     std::function<void(TimeNs)> on_done) {
    const std::size_t node = memory_.route(addr, size);
    const std::uint64_t token = next_token_++;
    raw_[token] = RawAccess{at, std::move(on_done)};
    metrics_.on_issue(at);
    ++raw_outstanding_;
    events_.schedule(at, EventKind::SubReqDispatch, [this, token, node, addr, size, kind](std::string* details) {
      SubRequest sub;
      sub.kind = kind;
      sub.mem_addr = addr;
      sub.size_bytes = size;
      sub.node = node;
      sub.owner = token;
      memory_.node(node).enqueue(sub, now());
      pump(node);
      if (details) {
        *details = "raw=" + std::to_string(token) + " kind=" + std::string(to_string(kind)) +
                   " addr=" + MemorySystem::hex(addr) + " size=" + std::to_string(size) + " " +
                   memory_.node(node).state_token();
      }
    });
  }

  MetricsRecord finalize(TimeNs end) const { return metrics_.finalize(end); }
  MetricsRecord finalize() const { return metrics_.finalize(now()); }

  // Per-node byte conservation between the node side and the data path:
  // bytes finished by a node == bytes applied for completed requests + bytes
  // of sub-requests whose parent is still partially outstanding.
  bool conservation_holds() const {
    for (std::size_t n = 0; n < memory_.size(); ++n) {
      std::uint64_t part_load = 0, part_store = 0;
      for (const auto& [id, p] : active_) {
        for (const SubRequest& s : p.finished) {
          if (s.node != n) continue;
          (s.kind == RequestKind::Load ? part_load : part_store) += s.size_bytes;
        }
      }
      const auto& node = memory_.node(n);
      if (node.bytes_loaded() != spm_loaded_[n] + raw_loaded_[n] + part_load) return false;
      if (node.bytes_stored() != mem_stored_[n] + raw_stored_[n] + part_store) return false;
    }
    return true;
  }

  std::uint64_t spm_bytes_loaded(std::size_t node) const { return spm_loaded_.at(node); }
  std::uint64_t mem_bytes_stored(std::size_t node) const { return mem_stored_.at(node); }

  // RequestSink

  bool routable(Addr addr, std::uint64_t len) const override { return memory_.find(addr, len).has_value(); }

  void submit(RequestId id, TimeNs arrive) override {
    const RequestDescriptor& d = machine_.request(id);
    metrics_.on_issue(d.issue_time);
    events_.schedule(arrive, EventKind::SubReqDispatch, [this, id](std::string* details) { start_request(id, details); });
  }

 private:
  struct GuestSlot {
    std::unique_ptr<Guest> guest;
    TimeNs local_end = 0;
    bool waiting = false;
    bool done = false;
  };

  struct Active {
    std::uint32_t remaining = 0;
    std::vector<SubRequest> finished;
    std::map<std::uint32_t, std::vector<std::byte>> store_data;
  };

  struct RawAccess {
    TimeNs issued;
    std::function<void(TimeNs)> on_done;
  };

  void schedule_guest(std::size_t id, TimeNs at) {
    events_.schedule(at, EventKind::GuestStep, [this, id](std::string* details) { step_guest(id, details); });
  }

  void step_guest(std::size_t id, std::string* details) {
    GuestSlot& g = guests_[id];
    const TimeNs t = now();
    GuestApi api(machine_, *this, t);
    const Yield y = g.guest->step(api);
    g.local_end = api.now();
    switch (y.kind) {
      case Yield::Kind::After:
        schedule_guest(id, std::max(t + 1, g.local_end + y.delay));
        break;
      case Yield::Kind::Wait:
        if (!machine_.completions().empty()) {
          schedule_guest(id, std::max(t + 1, g.local_end));
        } else {
          g.waiting = true;
        }
        break;
      case Yield::Kind::Done:
        g.done = true;
        break;
    }
    if (details) {
      *details = "guest=" + std::to_string(id) + " name=" + std::string(g.guest->name()) +
                 " end=" + std::to_string(g.local_end) + " outstanding=" + std::to_string(machine_.outstanding());
      const std::string extra = g.guest->status();
      if (!extra.empty()) *details += " " + extra;
    }
  }

  static ExpandedPlan plan_of(const RequestDescriptor& d) {
    return d.pattern ? expand_pattern(*d.pattern, d.config) : expand_simple(d.spm_addr, d.mem_addr, d.config);
  }

  void start_request(RequestId id, std::string* details) {
    RequestDescriptor& d = machine_.request(id);
    const ExpandedPlan plan = plan_of(d);
    d.advance(RequestState::InFlight);
    Active& a = active_[id];
    a.remaining = static_cast<std::uint32_t>(plan.size());
    std::vector<std::size_t> touched;
    for (std::uint32_t i = 0; i < plan.size(); ++i) {
      SubRequest sub;
      sub.parent = id;
      sub.index = i;
      sub.kind = d.kind;
      sub.mem_addr = plan[i].mem_addr;
      sub.spm_addr = plan[i].spm_addr;
      sub.size_bytes = plan[i].size_bytes;
      sub.qos = d.config.qos_label;
      sub.node = memory_.route(sub.mem_addr, sub.size_bytes);
      memory_.node(sub.node).enqueue(sub, now());
      if (std::find(touched.begin(), touched.end(), sub.node) == touched.end()) touched.push_back(sub.node);
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t n : touched) pump(n);
    if (details) {
      *details = "req=" + std::to_string(id) + " kind=" + std::string(to_string(d.kind)) +
                 " subs=" + std::to_string(plan.size()) + " qos=" + std::to_string(d.config.qos_label);
      for (std::size_t n : touched) *details += " " + memory_.node(n).state_token();
    }
  }

  // Work conservation: start everything the node has room for.
  void pump(std::size_t n) {
    FarMemoryNode& node = memory_.node(n);
    while (node.can_dispatch()) {
      SubRequest sub = node.dispatch(now());
      metrics_.on_transfer(n, sub.link_start, sub.link_end);
      if (sub.parent != kNoRequest && sub.kind == RequestKind::Store) {
        active_.at(sub.parent).store_data[sub.index] = machine_.spm().read(sub.spm_addr, sub.size_bytes);
        if (observer_) observer_->on_store_snapshot(sub.parent, sub.index, sub.spm_addr, sub.size_bytes);
      }
      events_.schedule(sub.complete_time, EventKind::SubReqComplete,
                       [this, sub](std::string* details) { complete_sub(sub, details); });
    }
  }

  void complete_sub(const SubRequest& sub, std::string* details) {
    FarMemoryNode& node = memory_.node(sub.node);
    node.finish(sub);
    bool request_done = false;
    if (sub.parent != kNoRequest) {
      Active& a = active_.at(sub.parent);
      a.finished.push_back(sub);
      request_done = --a.remaining == 0;
      if (request_done) finish_request(sub.parent);
    } else {
      auto it = raw_.find(sub.owner);
      check_invariant(it != raw_.end(), "completion for unknown raw access");
      RawAccess raw = std::move(it->second);
      raw_.erase(it);
      --raw_outstanding_;
      (sub.kind == RequestKind::Load ? raw_loaded_ : raw_stored_)[sub.node] += sub.size_bytes;
      metrics_.on_complete(raw.issued, now(), sub.size_bytes);
      if (raw.on_done) raw.on_done(now());
    }
    pump(sub.node);
    if (details) {
      *details = (sub.parent != kNoRequest ? "req=" + std::to_string(sub.parent) : "raw=" + std::to_string(sub.owner)) +
                 " sub=" + std::to_string(sub.index) + " " + node.state_token();
      if (request_done) *details += " done=1";
    }
  }

  void finish_request(RequestId id) {
    auto it = active_.find(id);
    Active a = std::move(it->second);
    active_.erase(it);
    std::sort(a.finished.begin(), a.finished.end(),
              [](const SubRequest& x, const SubRequest& y) { return x.index < y.index; });

    RequestDescriptor& d = machine_.request(id);
    std::uint64_t bytes = 0;
    for (const SubRequest& s : a.finished) {
      bytes += s.size_bytes;
      if (s.kind == RequestKind::Load) {
        const auto data = memory_.read(s.mem_addr, s.size_bytes);
        machine_.spm_fill(s.spm_addr, data);
        spm_loaded_[s.node] += s.size_bytes;
        if (observer_) observer_->on_load_apply(id, s.index, s.mem_addr, s.spm_addr, s.size_bytes);
      } else {
        memory_.write(s.mem_addr, a.store_data.at(s.index));
        mem_stored_[s.node] += s.size_bytes;
        if (observer_) observer_->on_store_apply(id, s.index, s.mem_addr, s.size_bytes);
      }
    }
    metrics_.on_complete(d.issue_time, now(), bytes);
    machine_.mark_complete(id, now());
    for (std::size_t g = 0; g < guests_.size(); ++g) wake(g);
  }

  void arm_sampling() {
    if (opts_.sample_interval_ns == 0 || sampling_) return;
    sampling_ = true;
    schedule_sample(now());
  }

  void schedule_sample(TimeNs at) {
    events_.schedule(at, EventKind::Sample, [this](std::string* details) {
      const std::uint64_t outstanding = machine_.outstanding() + raw_outstanding_;
      metrics_.on_sample(now(), outstanding);
      const auto& spm = machine_.spm();
      if (details) {
        *details = "outstanding=" + std::to_string(outstanding) + " spm=" + std::to_string(spm.capacity_bytes()) +
                   " cache=" + std::to_string(spm.cache_bytes()) + " l2=" + std::to_string(spm.l2_total_bytes());
      }
      if (events_.pending() > events_.pending(EventKind::Sample)) {
        schedule_sample(now() + opts_.sample_interval_ns);
      } else {
        sampling_ = false;
      }
    });
  }

  MachineState machine_;
  MemorySystem memory_;
  EventQueue events_;
  MetricsCollector metrics_;
  SimOptions opts_;
  EffectObserver* observer_ = nullptr;
  std::vector<GuestSlot> guests_;
  std::map<RequestId, Active> active_;
  std::unordered_map<std::uint64_t, RawAccess> raw_;
  std::uint64_t next_token_ = 1;
  std::uint64_t raw_outstanding_ = 0;
  bool sampling_ = false;
  std::vector<std::uint64_t> spm_loaded_, mem_stored_, raw_loaded_, raw_stored_;
};

}  // namespace amu
