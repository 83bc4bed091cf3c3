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
#include <cstring>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "amu/baseline.hpp"
#include "amu/common.hpp"
#include "amu/engine.hpp"

// Guest workloads for the AMU and the matching baseline traces.
//
//   seq_stream           stream-pattern loads over a footprint, k in flight
//   gather               single-granule loads at random addresses, k in flight
//   pointer_chase        one dependent chain; each address comes from the
//                        previous load's data
//   event_driven         select-style loop: poll getfin, process, reissue
//   coroutine_multiplex  several dependent chains multiplexed by a scheduler
//   vector_kernel        c = a + b over int32 vectors staged through the SPM

namespace amu {

struct WorkloadSpec {
  std::string name;
  std::map<std::string, std::int64_t> params;
};

namespace detail {

struct ParamRule {
  std::int64_t def;
  std::int64_t min;
};

inline const std::map<std::string, std::map<std::string, ParamRule>>& workload_rules() {
  static const std::map<std::string, std::map<std::string, ParamRule>> rules = [] {
    const std::map<std::string, ParamRule> common = {
        {"base", {0, 0}}, {"granularity", {64, 1}}, {"qos", {0, 0}}};
    auto with = [&](std::map<std::string, ParamRule> extra) {
      extra.insert(common.begin(), common.end());
      return extra;
    };
    return std::map<std::string, std::map<std::string, ParamRule>>{
        {"seq_stream", with({{"footprint", {64 * 1024, 1}}, {"k", {16, 1}}, {"chunk", {4, 1}}})},
        {"gather", with({{"footprint", {1 << 20, 1}}, {"count", {1024, 1}}, {"k", {16, 1}}})},
        {"pointer_chase", with({{"footprint", {64 * 1024, 1}}, {"length", {256, 1}}})},
        {"event_driven",
         with({{"footprint", {1 << 20, 1}}, {"k", {16, 1}}, {"requests", {0, 0}}, {"compute_ns", {0, 0}}})},
        {"coroutine_multiplex", with({{"footprint", {64 * 1024, 1}}, {"coroutines", {4, 1}}, {"length", {64, 1}}})},
        {"vector_kernel", with({{"elements", {1024, 1}}})},
    };
  }();
  return rules;
}

inline Rng workload_rng(std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{0x776b6c64}};
  return Rng(seq);
}

inline std::uint64_t read_u64(const std::vector<std::byte>& b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[static_cast<std::size_t>(i)]);
  return v;
}

inline std::vector<std::byte> u64_bytes(std::uint64_t v) {
  std::vector<std::byte> b(8);
  for (auto& x : b) {
    x = static_cast<std::byte>(v & 0xff);
    v >>= 8;
  }
  return b;
}

}  // namespace detail

/// Checked view of a spec's parameters with defaults filled in.
class WorkloadParams {
 public:
  explicit WorkloadParams(const WorkloadSpec& spec) : name_(spec.name) {
    const auto& rules = detail::workload_rules();
    auto it = rules.find(spec.name);
    if (it == rules.end()) fail(Errc::BadSpec, "unknown workload '" + spec.name + "'");
    for (const auto& [key, rule] : it->second) values_[key] = rule.def;
    for (const auto& [key, value] : spec.params) {
      auto r = it->second.find(key);
      if (r == it->second.end()) fail(Errc::BadSpec, "workload " + spec.name + " has no parameter '" + key + "'");
      if (value < r->second.min) {
        fail(Errc::BadSpec, "workload " + spec.name + " parameter '" + key + "' must be >= " +
                                std::to_string(r->second.min));
      }
      values_[key] = value;
    }
    const std::uint64_t g = u("granularity");
    if (!is_pow2(g)) fail(Errc::BadSpec, "granularity must be a power of two");
    if (u("qos") > 255) fail(Errc::BadSpec, "qos must fit in 8 bits");
    if (has("footprint") && (u("footprint") % g != 0)) fail(Errc::BadSpec, "footprint must be a multiple of granularity");
    if (name_ == "event_driven" && u("requests") == 0) values_["requests"] = static_cast<std::int64_t>(u("footprint") / g);
    if ((name_ == "pointer_chase" || name_ == "coroutine_multiplex") && g < 8) {
      fail(Errc::BadSpec, "chasing workloads need granularity >= 8 to hold a pointer");
    }
    if (name_ == "vector_kernel" && g < 4) fail(Errc::BadSpec, "vector_kernel needs granularity >= 4");
  }

  const std::string& name() const noexcept { return name_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::uint64_t u(const std::string& key) const { return static_cast<std::uint64_t>(values_.at(key)); }
  const std::map<std::string, std::int64_t>& values() const noexcept { return values_; }

 private:
  std::string name_;
  std::map<std::string, std::int64_t> values_;
};

inline bool is_workload_name(const std::string& name) { return detail::workload_rules().count(name) != 0; }

/// A guest that also owns its initial memory image.
class Workload : public Guest {
 public:
  explicit Workload(WorkloadParams p) : p_(std::move(p)) {}

  std::string_view name() const override { return p_.name(); }

  // Checks that the workload fits this machine and writes its inputs.
  virtual void prepare(Simulator& sim) = 0;

  const WorkloadParams& params() const noexcept { return p_; }

 protected:
  std::uint64_t g() const { return p_.u("granularity"); }
  Addr base() const { return p_.u("base"); }

  void require(bool ok, const std::string& what) const {
    if (!ok) fail(Errc::BadSpec, p_.name() + ": " + what);
  }

  void require_spm(const Simulator& sim, std::uint64_t bytes) const {
    require(bytes <= sim.machine().spm().capacity_bytes(),
            "needs " + std::to_string(bytes) + " bytes of SPM, have " +
                std::to_string(sim.machine().spm().capacity_bytes()));
  }

  void require_mapped(const Simulator& sim, Addr addr, std::uint64_t len) const {
    require(sim.memory().mapped(addr, len), "footprint [" + MemorySystem::hex(addr) + ", +" + std::to_string(len) +
                                                ") is not fully mapped");
    const std::uint64_t step = g();
    for (std::uint64_t off = 0; off < len; off += step) {
      require(sim.routable(addr + off, std::min(step, len - off)), "a granule straddles two memory nodes");
    }
  }

  // MACR 0 carries this workload's granularity and QoS and is the default.
  void configure(GuestApi& api) {
    if (configured_) return;
    MemAccessConfig cfg;
    cfg.granularity_bytes = static_cast<std::uint32_t>(g());
    cfg.qos_label = static_cast<std::uint8_t>(p_.u("qos"));
    api.write_macr(0, cfg);
    api.set_default_config(0);
    configured_ = true;
  }

  void fill_random(Simulator& sim, Addr addr, std::uint64_t len, Rng& rng) const {
    std::vector<std::byte> buf(len);
    for (std::size_t i = 0; i < len; i += 8) {
      std::uint64_t v = rng();
      for (std::size_t j = 0; j < 8 && i + j < len; ++j, v >>= 8) buf[i + j] = static_cast<std::byte>(v & 0xff);
    }
    sim.host_write(addr, buf);
  }

  WorkloadParams p_;
  bool configured_ = false;
};

// ---------------------------------------------------------------------------
// Address streams shared by the AMU guests and the baseline traces.

inline std::vector<Addr> gather_addresses(const WorkloadParams& p, std::uint64_t seed) {
  Rng rng = detail::workload_rng(seed);
  const std::uint64_t g = p.u("granularity");
  std::uniform_int_distribution<std::uint64_t> pick(0, p.u("footprint") / g - 1);
  std::vector<Addr> out(p.u("count"));
  for (Addr& a : out) a = p.u("base") + pick(rng) * g;
  return out;
}

// `chains` disjoint chains of `length` elements over a shuffled footprint.
inline std::vector<std::vector<Addr>> chase_chains(const WorkloadParams& p, std::uint64_t seed, std::uint64_t chains,
                                                   std::uint64_t length) {
  const std::uint64_t g = p.u("granularity");
  const std::uint64_t slots = p.u("footprint") / g;
  if (chains * length > slots) {
    fail(Errc::BadSpec, p.name() + ": footprint holds " + std::to_string(slots) + " elements, chains need " +
                            std::to_string(chains * length));
  }
  std::vector<std::uint64_t> perm(slots);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = detail::workload_rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Addr>> out(chains);
  for (std::uint64_t c = 0; c < chains; ++c) {
    for (std::uint64_t i = 0; i < length; ++i) out[c].push_back(p.u("base") + perm[c * length + i] * g);
  }
  return out;
}

inline Addr event_driven_address(const WorkloadParams& p, std::uint64_t i) {
  const std::uint64_t g = p.u("granularity");
  return p.u("base") + (i * g) % p.u("footprint");
}

struct VectorLayout {
  Addr a = 0, b = 0, c = 0;
  std::uint64_t elements = 0;
  std::uint64_t padded_bytes = 0;  // each vector, rounded up to the granularity
};

inline VectorLayout vector_layout(const WorkloadParams& p) {
  VectorLayout v;
  v.elements = p.u("elements");
  const std::uint64_t g = p.u("granularity");
  v.padded_bytes = ceil_div(v.elements * 4, g) * g;
  v.a = p.u("base");
  v.b = v.a + v.padded_bytes;
  v.c = v.b + v.padded_bytes;
  return v;
}

// ---------------------------------------------------------------------------

/// Stream-pattern loads, one APR issue per `chunk` granules, up to k in flight.
class SeqStream final : public Workload {
 public:
  SeqStream(WorkloadParams p, std::uint64_t seed) : Workload(std::move(p)), seed_(seed) {}

  void prepare(Simulator& sim) override {
    const std::uint64_t fp = p_.u("footprint");
    require_spm(sim, p_.u("k") * p_.u("chunk") * g());
    require_mapped(sim, base(), fp);
    Rng rng = detail::workload_rng(seed_);
    fill_random(sim, base(), fp, rng);
  }

  Yield step(GuestApi& api) override {
    configure(api);
    for (RequestId id; (id = api.getfin()) != kNoRequest;) {
      free_.push_back(slot_of_.at(id));
      slot_of_.erase(id);
    }
    const std::uint64_t total = p_.u("footprint") / g();
    const std::uint64_t chunk = p_.u("chunk");
    while (next_ < total && slot_of_.size() < p_.u("k")) {
      const std::uint64_t slot = take_slot();
      const auto count = static_cast<std::uint32_t>(std::min(chunk, total - next_));
      api.write_apr(0, AccessPattern{PatternKind::Stream, base() + next_ * g(), slot * chunk * g(), 0, count});
      const IssueResult r = api.issue_pattern(0, RequestKind::Load);
      if (r.error == IssueError::QueueFull) {
        free_.push_back(slot);
        break;
      }
      require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
      slot_of_[r.id] = slot;
      next_ += count;
    }
    if (next_ == total && slot_of_.empty()) return Yield::done();
    return Yield::wait();
  }

  std::string status() const override { return "next=" + std::to_string(next_) + " k=" + std::to_string(slot_of_.size()); }

 private:
  std::uint64_t take_slot() {
    if (!free_.empty()) {
      const std::uint64_t s = free_.back();
      free_.pop_back();
      return s;
    }
    return slots_made_++;
  }

  std::uint64_t seed_;
  std::uint64_t next_ = 0;
  std::uint64_t slots_made_ = 0;
  std::vector<std::uint64_t> free_;
  std::map<RequestId, std::uint64_t> slot_of_;
};

/// Independent single-granule loads at seeded random addresses.
class Gather final : public Workload {
 public:
  Gather(WorkloadParams p, std::uint64_t seed)
      : Workload(std::move(p)), addrs_(gather_addresses(p_, seed)), seed_(seed) {}

  void prepare(Simulator& sim) override {
    require_spm(sim, p_.u("k") * g());
    require_mapped(sim, base(), p_.u("footprint"));
    Rng rng = detail::workload_rng(seed_ + 1);
    fill_random(sim, base(), p_.u("footprint"), rng);
  }

  Yield step(GuestApi& api) override {
    configure(api);
    for (RequestId id; (id = api.getfin()) != kNoRequest;) {
      free_.push_back(slot_of_.at(id));
      slot_of_.erase(id);
    }
    while (next_ < addrs_.size() && slot_of_.size() < p_.u("k")) {
      std::uint64_t slot = slot_of_.size();
      if (!free_.empty()) {
        slot = free_.back();
        free_.pop_back();
      }
      const IssueResult r = api.aload(slot * g(), addrs_[next_]);
      if (r.error == IssueError::QueueFull) {
        free_.push_back(slot);
        break;
      }
      require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
      slot_of_[r.id] = slot;
      ++next_;
    }
    if (next_ == addrs_.size() && slot_of_.empty()) return Yield::done();
    return Yield::wait();
  }

  std::string status() const override { return "next=" + std::to_string(next_) + " k=" + std::to_string(slot_of_.size()); }

 private:
  std::vector<Addr> addrs_;
  std::uint64_t seed_;
  std::size_t next_ = 0;
  std::vector<std::uint64_t> free_;
  std::map<RequestId, std::uint64_t> slot_of_;
};

/// A chain of dependent loads. The next address is the little-endian u64 at
/// the start of the element just loaded into the SPM.
class PointerChase final : public Workload {
 public:
  PointerChase(WorkloadParams p, std::uint64_t seed)
      : Workload(std::move(p)), chain_(chase_chains(p_, seed, 1, p_.u("length")).front()) {}

  void prepare(Simulator& sim) override {
    require_spm(sim, g());
    require_mapped(sim, base(), p_.u("footprint"));
    for (std::size_t i = 0; i < chain_.size(); ++i) {
      const Addr next = i + 1 < chain_.size() ? chain_[i + 1] : 0;
      sim.host_write(chain_[i], detail::u64_bytes(next));
    }
    addr_ = chain_.front();
  }

  Yield step(GuestApi& api) override {
    configure(api);
    if (pending_ != kNoRequest) {
      const RequestId id = api.getfin();
      if (id == kNoRequest) return Yield::wait();
      require(id == pending_, "unexpected completion");
      pending_ = kNoRequest;
      addr_ = detail::read_u64(api.spm_read(0, 8));
      ++hops_;
    }
    if (hops_ == chain_.size()) return Yield::done();
    const IssueResult r = api.aload(0, addr_);
    require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
    pending_ = r.id;
    return Yield::wait();
  }

  std::string status() const override { return "hops=" + std::to_string(hops_); }

  const std::vector<Addr>& chain() const noexcept { return chain_; }
  std::uint64_t hops() const noexcept { return hops_; }

 private:
  std::vector<Addr> chain_;
  Addr addr_ = 0;
  RequestId pending_ = kNoRequest;
  std::uint64_t hops_ = 0;
};

/// Event loop: take one completion, process it, reissue into its slot.
class EventDriven final : public Workload {
 public:
  EventDriven(WorkloadParams p, std::uint64_t seed) : Workload(std::move(p)), seed_(seed) {}

  void prepare(Simulator& sim) override {
    require_spm(sim, p_.u("k") * g());
    require_mapped(sim, base(), p_.u("footprint"));
    Rng rng = detail::workload_rng(seed_);
    fill_random(sim, base(), p_.u("footprint"), rng);
  }

  Yield step(GuestApi& api) override {
    configure(api);
    issue_free_slots(api);
    for (RequestId id; (id = api.getfin()) != kNoRequest;) {
      free_.push_back(slot_of_.at(id));
      slot_of_.erase(id);
      ++handled_;
      api.spend(p_.u("compute_ns"));
      issue_free_slots(api);
    }
    if (next_ == p_.u("requests") && slot_of_.empty()) return Yield::done();
    return Yield::wait();
  }

  std::string status() const override {
    return "issued=" + std::to_string(next_) + " handled=" + std::to_string(handled_);
  }

 private:
  void issue_free_slots(GuestApi& api) {
    while (next_ < p_.u("requests") && slot_of_.size() < p_.u("k")) {
      std::uint64_t slot = slot_of_.size();
      if (!free_.empty()) {
        slot = free_.back();
        free_.pop_back();
      }
      const IssueResult r = api.aload(slot * g(), event_driven_address(p_, next_));
      if (r.error == IssueError::QueueFull) {
        free_.push_back(slot);
        return;
      }
      require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
      slot_of_[r.id] = slot;
      ++next_;
    }
  }

  std::uint64_t seed_;
  std::uint64_t next_ = 0;
  std::uint64_t handled_ = 0;
  std::vector<std::uint64_t> free_;
  std::map<RequestId, std::uint64_t> slot_of_;
};

/// Several pointer chains, each an explicit state machine, resumed by a
/// scheduler when getfin hands back the id it is blocked on.
class CoroutineMultiplex final : public Workload {
 public:
  CoroutineMultiplex(WorkloadParams p, std::uint64_t seed)
      : Workload(std::move(p)), chains_(chase_chains(p_, seed, p_.u("coroutines"), p_.u("length"))) {
    coros_.resize(chains_.size());
    for (std::size_t c = 0; c < chains_.size(); ++c) coros_[c].addr = chains_[c].front();
  }

  void prepare(Simulator& sim) override {
    require_spm(sim, coros_.size() * g());
    require_mapped(sim, base(), p_.u("footprint"));
    for (const auto& chain : chains_) {
      for (std::size_t i = 0; i < chain.size(); ++i) {
        sim.host_write(chain[i], detail::u64_bytes(i + 1 < chain.size() ? chain[i + 1] : 0));
      }
    }
  }

  Yield step(GuestApi& api) override {
    configure(api);
    for (RequestId id; (id = api.getfin()) != kNoRequest;) {
      const std::size_t c = owner_.at(id);
      owner_.erase(id);
      Coro& co = coros_[c];
      co.state = State::Ready;
      co.addr = detail::read_u64(api.spm_read(c * g(), 8));
      ++co.hops;
      if (co.hops == chains_[c].size()) co.state = State::Finished;
    }
    bool any_live = false;
    for (std::size_t c = 0; c < coros_.size(); ++c) {
      Coro& co = coros_[c];
      if (co.state == State::Ready) {
        const IssueResult r = api.aload(c * g(), co.addr);
        if (r.ok()) {
          co.state = State::Blocked;
          owner_[r.id] = c;
        } else {
          require(r.error == IssueError::QueueFull, "issue failed: " + std::string(to_string(r.error)));
        }
      }
      any_live |= co.state != State::Finished;
    }
    return any_live ? Yield::wait() : Yield::done();
  }

  std::string status() const override {
    std::uint64_t hops = 0;
    for (const Coro& c : coros_) hops += c.hops;
    return "hops=" + std::to_string(hops) + " blocked=" + std::to_string(owner_.size());
  }

  const std::vector<std::vector<Addr>>& chains() const noexcept { return chains_; }
  std::uint64_t hops(std::size_t c) const { return coros_.at(c).hops; }

 private:
  enum class State : std::uint8_t { Ready, Blocked, Finished };
  struct Coro {
    State state = State::Ready;
    Addr addr = 0;
    std::uint64_t hops = 0;
  };

  std::vector<std::vector<Addr>> chains_;
  std::vector<Coro> coros_;
  std::unordered_map<RequestId, std::size_t> owner_;
};

/// Pattern-loads a and b into the SPM, adds them elementwise in place and
/// pattern-stores the sum to c.
class VectorKernel final : public Workload {
 public:
  VectorKernel(WorkloadParams p, std::uint64_t seed) : Workload(std::move(p)), layout_(vector_layout(p_)), seed_(seed) {}

  void prepare(Simulator& sim) override {
    require_spm(sim, 2 * layout_.padded_bytes);
    require_mapped(sim, layout_.a, 3 * layout_.padded_bytes);
    require(layout_.padded_bytes / g() <= 0xffffffffull, "too many granules for one pattern");
    Rng rng = detail::workload_rng(seed_);
    fill_random(sim, layout_.a, layout_.padded_bytes, rng);
    fill_random(sim, layout_.b, layout_.padded_bytes, rng);
  }

  Yield step(GuestApi& api) override {
    configure(api);
    const auto granules = static_cast<std::uint32_t>(layout_.padded_bytes / g());
    switch (phase_) {
      case Phase::Load: {
        api.write_apr(0, AccessPattern{PatternKind::Stream, layout_.a, 0, 0, granules});
        api.write_apr(1, AccessPattern{PatternKind::Stream, layout_.b, layout_.padded_bytes, 0, granules});
        for (std::size_t apr : {0u, 1u}) {
          const IssueResult r = api.issue_pattern(apr, RequestKind::Load);
          require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
        }
        phase_ = Phase::Combine;
        return Yield::wait();
      }
      case Phase::Combine: {
        for (RequestId id; (id = api.getfin()) != kNoRequest;) ++loaded_;
        if (loaded_ < 2) return Yield::wait();
        const std::uint64_t bytes = layout_.elements * 4;
        auto a = api.spm_read(0, bytes);
        const auto b = api.spm_read(layout_.padded_bytes, bytes);
        for (std::uint64_t i = 0; i < bytes; i += 4) {
          std::uint32_t x, y;
          std::memcpy(&x, &a[i], 4);
          std::memcpy(&y, &b[i], 4);
          x += y;
          std::memcpy(&a[i], &x, 4);
        }
        api.spm_write(0, a);
        api.spend(layout_.elements);
        api.write_apr(2, AccessPattern{PatternKind::Stream, layout_.c, 0, 0, granules});
        const IssueResult r = api.issue_pattern(2, RequestKind::Store);
        require(r.ok(), "issue failed: " + std::string(to_string(r.error)));
        phase_ = Phase::Store;
        return Yield::wait();
      }
      case Phase::Store:
        if (api.getfin() == kNoRequest) return Yield::wait();
        phase_ = Phase::Finished;
        return Yield::done();
      case Phase::Finished:
        break;
    }
    return Yield::done();
  }

  std::string status() const override { return "phase=" + std::to_string(static_cast<int>(phase_)); }

  const VectorLayout& layout() const noexcept { return layout_; }

 private:
  enum class Phase : std::uint8_t { Load, Combine, Store, Finished };

  VectorLayout layout_;
  std::uint64_t seed_;
  Phase phase_ = Phase::Load;
  int loaded_ = 0;
};

// ---------------------------------------------------------------------------

inline std::unique_ptr<Workload> make_workload(const WorkloadSpec& spec, std::uint64_t seed) {
  WorkloadParams p(spec);
  const std::string& n = p.name();
  if (n == "seq_stream") return std::make_unique<SeqStream>(std::move(p), seed);
  if (n == "gather") return std::make_unique<Gather>(std::move(p), seed);
  if (n == "pointer_chase") return std::make_unique<PointerChase>(std::move(p), seed);
  if (n == "event_driven") return std::make_unique<EventDriven>(std::move(p), seed);
  if (n == "coroutine_multiplex") return std::make_unique<CoroutineMultiplex>(std::move(p), seed);
  if (n == "vector_kernel") return std::make_unique<VectorKernel>(std::move(p), seed);
  fail(Errc::BadSpec, "unknown workload '" + n + "'");
}

inline bool has_trace(const std::string& name) {
  return name == "seq_stream" || name == "gather" || name == "pointer_chase" || name == "event_driven";
}

// 64-byte loads covering [addr, addr + size); one smaller load if size < 64.
inline void append_lines(Trace& out, Addr addr, std::uint64_t size) {
  if (size < kLineBytes) {
    out.push_back(TraceOp::load(addr, static_cast<std::uint32_t>(size)));
    return;
  }
  for (std::uint64_t off = 0; off < size; off += kLineBytes) out.push_back(TraceOp::load(addr + off));
}

/// The baseline-core trace touching the same addresses as the AMU guest.
inline Trace make_trace(const WorkloadSpec& spec, std::uint64_t seed) {
  WorkloadParams p(spec);
  const std::uint64_t g = p.u("granularity");
  Trace t;
  if (p.name() == "seq_stream") {
    append_lines(t, p.u("base"), p.u("footprint"));
  } else if (p.name() == "gather") {
    for (Addr a : gather_addresses(p, seed)) append_lines(t, a, g);
  } else if (p.name() == "pointer_chase") {
    const auto chain = chase_chains(p, seed, 1, p.u("length")).front();
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i > 0) t.push_back(TraceOp::compute(0));
      append_lines(t, chain[i], g);
    }
  } else if (p.name() == "event_driven") {
    for (std::uint64_t i = 0; i < p.u("requests"); ++i) append_lines(t, event_driven_address(p, i), g);
  } else {
    fail(Errc::IncomparableWorkload, p.name() + " has no equivalent baseline trace");
  }
  return t;
}

}  // namespace amu
