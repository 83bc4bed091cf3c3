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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "amu/common.hpp"
#include "amu/machine_state.hpp"
#include "amu/pattern.hpp"

// Guest-visible asynchronous memory access instructions.
//
//   aload  spm, mem [, macr]   copy granularity*count bytes memory -> SPM
//   astore spm, mem [, macr]   copy granularity*count bytes SPM -> memory
//   apattern apr, kind [, macr]  one request covering an APR's expansion
//   getfin                     oldest finished request id, or 0
//
// Issue never waits on memory. Each of these costs `issue_cost_ns` of guest
// time; when no MACR index is given the default configuration register
// selects one.

namespace amu {

enum class IssueError : std::uint8_t { None, QueueFull, SpmOutOfRange, BadConfig, BadPattern, UnmappedAddress };

constexpr std::string_view to_string(IssueError e) {
  switch (e) {
    case IssueError::None: return "None";
    case IssueError::QueueFull: return "QueueFull";
    case IssueError::SpmOutOfRange: return "SpmOutOfRange";
    case IssueError::BadConfig: return "BadConfig";
    case IssueError::BadPattern: return "BadPattern";
    case IssueError::UnmappedAddress: return "UnmappedAddress";
  }
  return "?";
}

struct IssueResult {
  RequestId id = kNoRequest;
  IssueError error = IssueError::None;

  bool ok() const noexcept { return error == IssueError::None; }
  explicit operator bool() const noexcept { return ok(); }
};

// Where accepted requests go. Implemented by the simulator.
class RequestSink {
 public:
  virtual ~RequestSink() = default;
  // The request was inserted Pending at its issue time; it reaches the
  // memory system at `arrive`.
  virtual void submit(RequestId id, TimeNs arrive) = 0;
  // True when one node owns the whole range.
  virtual bool routable(Addr addr, std::uint64_t len) const = 0;
};

/// The only way guest code touches the machine. Bound to one guest step and
/// carries that step's local clock.
class GuestApi {
 public:
  GuestApi(MachineState& machine, RequestSink& sink, TimeNs now)
      : m_(machine), sink_(sink), start_(now), clock_(now) {}

  TimeNs now() const noexcept { return clock_; }
  TimeNs elapsed() const noexcept { return clock_ - start_; }

  // Models ordinary instructions (processing) taking `ns`.
  void spend(TimeNs ns) noexcept { clock_ += ns; }

  IssueResult aload(std::uint64_t spm_addr, Addr mem_addr, std::optional<std::size_t> macr = std::nullopt) {
    return issue(RequestKind::Load, spm_addr, mem_addr, macr, std::nullopt);
  }

  IssueResult astore(std::uint64_t spm_addr, Addr mem_addr, std::optional<std::size_t> macr = std::nullopt) {
    return issue(RequestKind::Store, spm_addr, mem_addr, macr, std::nullopt);
  }

  IssueResult issue_pattern(std::size_t apr, RequestKind kind, std::optional<std::size_t> macr = std::nullopt) {
    if (apr >= m_.registers().apr_count()) {
      charge();
      return {kNoRequest, IssueError::BadPattern};
    }
    const AccessPattern p = m_.read_apr(apr);
    return issue(kind, p.base_spm_addr, p.base_mem_addr, macr, p);
  }

  RequestId getfin() {
    charge();
    return m_.retire_next();
  }

  // Scratchpad load/store instructions.
  std::vector<std::byte> spm_read(std::uint64_t addr, std::uint64_t len) const { return m_.spm_read(addr, len); }
  void spm_write(std::uint64_t addr, std::span<const std::byte> bytes) { m_.spm_write(addr, bytes); }

  const MemAccessConfig& read_macr(std::size_t idx) const { return m_.read_macr(idx); }
  void write_macr(std::size_t idx, const MemAccessConfig& cfg) { m_.write_macr(idx, cfg); }
  void set_default_config(std::size_t idx) { m_.set_default_config(idx); }
  const AccessPattern& read_apr(std::size_t idx) const { return m_.read_apr(idx); }
  void write_apr(std::size_t idx, const AccessPattern& p) { m_.write_apr(idx, p); }
  void repartition(std::uint64_t new_spm_bytes) { m_.repartition(new_spm_bytes); }
  std::uint64_t spm_capacity() const noexcept { return m_.spm().capacity_bytes(); }

 private:
  TimeNs charge() {
    const TimeNs at = clock_;
    clock_ += m_.config().issue_cost_ns;
    return at;
  }

  IssueResult issue(RequestKind kind, std::uint64_t spm_addr, Addr mem_addr, std::optional<std::size_t> macr,
                    std::optional<AccessPattern> pattern) {
    const TimeNs issued_at = charge();
    const std::size_t idx = macr.value_or(m_.registers().default_config());
    if (idx >= m_.registers().macr_count()) return {kNoRequest, IssueError::BadConfig};
    const MemAccessConfig cfg = m_.read_macr(idx);
    if (!m_.valid_config(cfg)) return {kNoRequest, IssueError::BadConfig};

    ExpandedPlan plan;
    try {
      plan = pattern ? expand_pattern(*pattern, cfg) : expand_simple(spm_addr, mem_addr, cfg);
    } catch (const Error&) {
      return {kNoRequest, IssueError::BadPattern};
    }
    for (const PlanEntry& e : plan) {
      if (!m_.spm().contains(e.spm_addr, e.size_bytes)) return {kNoRequest, IssueError::SpmOutOfRange};
    }
    for (const PlanEntry& e : plan) {
      if (!sink_.routable(e.mem_addr, e.size_bytes)) return {kNoRequest, IssueError::UnmappedAddress};
    }
    if (m_.table_full()) return {kNoRequest, IssueError::QueueFull};

    RequestDescriptor d;
    d.id = m_.alloc_request_id();
    d.kind = kind;
    d.spm_addr = spm_addr;
    d.mem_addr = mem_addr;
    d.config = cfg;
    d.pattern = pattern;
    d.issue_time = issued_at;
    m_.insert(d);
    sink_.submit(d.id, clock_);
    return {d.id, IssueError::None};
  }

  MachineState& m_;
  RequestSink& sink_;
  TimeNs start_;
  TimeNs clock_;
};

}  // namespace amu
