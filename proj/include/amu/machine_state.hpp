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
#include <cstdlib>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "amu/common.hpp"
#include "amu/registers.hpp"
#include "amu/request.hpp"
#include "amu/spm.hpp"

namespace amu {

inline std::vector<std::uint32_t> default_legal_granularities() {
  std::vector<std::uint32_t> out;
  for (std::uint32_t g = 1; g <= 64 * kKiB; g <<= 1) out.push_back(g);
  return out;
}

struct MachineConfig {
  std::uint64_t l2_total_bytes = 1 * kMiB;
  std::uint64_t spm_bytes = 256 * kKiB;
  std::uint32_t max_outstanding = 64;
  TimeNs issue_cost_ns = 1;
  RegisterFileShape registers{};
  std::vector<std::uint32_t> legal_granularities = default_legal_granularities();
};

// Functional side effects, in the order the simulator applies them. Used to
// drive an independent zero-latency replay of a run.
class EffectObserver {
 public:
  virtual ~EffectObserver() = default;
  virtual void on_host_write(Addr, std::span<const std::byte>) {}
  virtual void on_spm_write(std::uint64_t, std::span<const std::byte>) {}
  virtual void on_repartition(std::uint64_t) {}
  // Store data leaves the scratchpad when its sub-request starts service.
  virtual void on_store_snapshot(RequestId, std::uint32_t /*sub*/, std::uint64_t /*spm*/, std::uint32_t /*size*/) {}
  // Copies land when the owning request completes, in sub-request order.
  virtual void on_load_apply(RequestId, std::uint32_t /*sub*/, Addr, std::uint64_t /*spm*/, std::uint32_t /*size*/) {}
  virtual void on_store_apply(RequestId, std::uint32_t /*sub*/, Addr, std::uint32_t /*size*/) {}
};

/// Architectural state of one core's AMU: scratchpad, registers, request
/// table and completion queue.
class MachineState {
 public:
  explicit MachineState(const MachineConfig& cfg = {})
      : cfg_(cfg), spm_(cfg.l2_total_bytes, cfg.spm_bytes), regs_(cfg.registers) {
    if (cfg.max_outstanding == 0) fail(Errc::BadSize, "max_outstanding must be >= 1");
    std::sort(cfg_.legal_granularities.begin(), cfg_.legal_granularities.end());
    for (std::uint32_t g : cfg_.legal_granularities) {
      if (!is_pow2(g)) fail(Errc::BadConfig, "legal granularity " + std::to_string(g) + " is not a power of two");
    }
    for (std::size_t i = 0; i < regs_.macr_count(); ++i) {
      if (!valid_config(regs_.read_macr(i))) fail(Errc::BadConfig, "default MACR value is not legal");
    }
  }

  const MachineConfig& config() const noexcept { return cfg_; }

  RequestId alloc_request_id() {
    if (next_id_ == std::numeric_limits<RequestId>::max()) std::abort();
    return next_id_++;
  }

  // Scratchpad

  const SpmSpace& spm() const noexcept { return spm_; }
  std::vector<std::byte> spm_read(std::uint64_t addr, std::uint64_t len) const { return spm_.read(addr, len); }
  void spm_write(std::uint64_t addr, std::span<const std::byte> bytes) {
    spm_.write(addr, bytes);
    if (observer_) observer_->on_spm_write(addr, bytes);
  }
  // Data landing from a completed load; not a guest store.
  void spm_fill(std::uint64_t addr, std::span<const std::byte> bytes) { spm_.write(addr, bytes); }

  // Registers

  const AmuRegisterFile& registers() const noexcept { return regs_; }
  const MemAccessConfig& read_macr(std::size_t idx) const { return regs_.read_macr(idx); }
  void write_macr(std::size_t idx, const MemAccessConfig& cfg) {
    if (!valid_config(cfg)) {
      fail(Errc::BadConfig, "granularity " + std::to_string(cfg.granularity_bytes) + " / count " +
                                std::to_string(cfg.count) + " not legal");
    }
    regs_.write_macr(idx, cfg);
  }
  void set_default_config(std::size_t idx) { regs_.set_default_config(idx); }
  const AccessPattern& read_apr(std::size_t idx) const { return regs_.read_apr(idx); }
  void write_apr(std::size_t idx, const AccessPattern& p) { regs_.write_apr(idx, p); }

  bool valid_config(const MemAccessConfig& c) const {
    return c.count >= 1 && std::binary_search(cfg_.legal_granularities.begin(), cfg_.legal_granularities.end(),
                                              c.granularity_bytes);
  }

  // Cache/SPM partition

  void repartition(std::uint64_t new_spm_bytes) {
    if (!requests_.empty()) {
      fail(Errc::Busy, std::to_string(requests_.size()) + " requests outstanding");
    }
    spm_.resize(new_spm_bytes);
    if (observer_) observer_->on_repartition(new_spm_bytes);
  }

  // Request table: every issued, not yet retired request.

  bool table_full() const noexcept { return requests_.size() >= cfg_.max_outstanding; }
  std::size_t outstanding() const noexcept { return requests_.size(); }

  RequestDescriptor& insert(RequestDescriptor d) {
    check_invariant(d.id != kNoRequest && d.state == RequestState::Pending, "new request must be Pending");
    check_invariant(!table_full(), "request table overflow");
    auto [it, inserted] = requests_.emplace(d.id, std::move(d));
    check_invariant(inserted, "duplicate request id");
    return it->second;
  }

  RequestDescriptor& request(RequestId id) {
    auto it = requests_.find(id);
    if (it == requests_.end()) fail(Errc::InvariantViolation, "unknown request id " + std::to_string(id));
    return it->second;
  }

  void mark_complete(RequestId id, TimeNs t) {
    RequestDescriptor& d = request(id);
    d.advance(RequestState::Complete);
    check_invariant(t >= d.issue_time, "completion before issue");
    d.complete_time = t;
    cq_.push(id, t);
  }

  // Pops the oldest completion and retires it; kNoRequest if none.
  RequestId retire_next() {
    RequestId id = cq_.pop();
    if (id == kNoRequest) return id;
    auto it = requests_.find(id);
    check_invariant(it != requests_.end(), "completion for unknown request");
    it->second.advance(RequestState::Retired);
    requests_.erase(it);
    ++retired_;
    return id;
  }

  const CompletionQueue& completions() const noexcept { return cq_; }
  std::uint64_t retired_count() const noexcept { return retired_; }

  void set_observer(EffectObserver* obs) noexcept { observer_ = obs; }
  EffectObserver* observer() const noexcept { return observer_; }

 private:
  MachineConfig cfg_;
  SpmSpace spm_;
  AmuRegisterFile regs_;
  std::map<RequestId, RequestDescriptor> requests_;
  CompletionQueue cq_;
  RequestId next_id_ = 1;
  std::uint64_t retired_ = 0;
  EffectObserver* observer_ = nullptr;
};

}  // namespace amu
