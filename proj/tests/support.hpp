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
#include <cstring>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "amu/amu.hpp"

namespace amu::test {

/// Zero-latency functional model of a run. It sees only the effect stream
/// (host writes, guest SPM writes, repartitions and the copies in the order
/// they land) and replays it into flat byte arrays. It never reads simulator
/// state, so comparing its images with the simulator's checks the whole data
/// path: page maps, node routing, SPM partitioning, store snapshots.
class FunctionalOracle final : public EffectObserver {
 public:
  FunctionalOracle(std::uint64_t spm_bytes, std::uint64_t mem_bytes) : spm_(spm_bytes), mem_(mem_bytes) {}

  void on_host_write(Addr addr, std::span<const std::byte> bytes) override { put(mem_, addr, bytes, "host write"); }
  void on_spm_write(std::uint64_t addr, std::span<const std::byte> bytes) override { put(spm_, addr, bytes, "spm write"); }
  void on_repartition(std::uint64_t bytes) override { spm_.resize(bytes, std::byte{0}); }

  void on_store_snapshot(RequestId id, std::uint32_t sub, std::uint64_t spm, std::uint32_t size) override {
    snapshots_[{id, sub}] = get(spm_, spm, size, "store snapshot");
  }

  void on_load_apply(RequestId, std::uint32_t, Addr mem, std::uint64_t spm, std::uint32_t size) override {
    const auto data = get(mem_, mem, size, "load source");
    put(spm_, spm, data, "load target");
    ++copies_;
  }

  void on_store_apply(RequestId id, std::uint32_t sub, Addr mem, std::uint32_t size) override {
    auto it = snapshots_.find({id, sub});
    if (it == snapshots_.end() || it->second.size() != size) throw std::logic_error("store applied without snapshot");
    put(mem_, mem, it->second, "store target");
    snapshots_.erase(it);
    ++copies_;
  }

  const std::vector<std::byte>& spm() const noexcept { return spm_; }
  const std::vector<std::byte>& mem() const noexcept { return mem_; }
  std::uint64_t copies() const noexcept { return copies_; }

 private:
  static void put(std::vector<std::byte>& dst, std::uint64_t at, std::span<const std::byte> src, const char* what) {
    if (at > dst.size() || src.size() > dst.size() - at) throw std::out_of_range(std::string(what) + " outside oracle image");
    std::memcpy(dst.data() + at, src.data(), src.size());
  }

  static std::vector<std::byte> get(const std::vector<std::byte>& src, std::uint64_t at, std::uint64_t n, const char* what) {
    if (at > src.size() || n > src.size() - at) throw std::out_of_range(std::string(what) + " outside oracle image");
    return {src.begin() + static_cast<std::ptrdiff_t>(at), src.begin() + static_cast<std::ptrdiff_t>(at + n)};
  }

  std::vector<std::byte> spm_;
  std::vector<std::byte> mem_;
  std::map<std::pair<RequestId, std::uint32_t>, std::vector<std::byte>> snapshots_;
  std::uint64_t copies_ = 0;
};

struct OracleVerdict {
  bool spm_equal = false;
  bool mem_equal = false;
  std::uint64_t copies = 0;
  bool ok() const noexcept { return spm_equal && mem_equal && copies > 0; }
};

// Runs `cfg` through the simulator with an oracle attached and compares
// final images over [0, mem_extent).
inline OracleVerdict check_against_oracle(const RunConfig& cfg, std::uint64_t mem_extent) {
  FunctionalOracle oracle(cfg.machine.spm_bytes, mem_extent);
  AmuSession s = prepare_amu(cfg, cfg.seed, nullptr, &oracle);
  finish_amu(s, cfg);
  OracleVerdict v;
  const auto& spm = s.sim->machine().spm().bytes();
  v.spm_equal = spm.size() == oracle.spm().size() && std::equal(spm.begin(), spm.end(), oracle.spm().begin());
  v.mem_equal = s.sim->memory().read(0, mem_extent) == oracle.mem();
  v.copies = oracle.copies();
  return v;
}

/// Trace sink that keeps the TSV text in memory.
class StringTrace final : public TraceSink {
 public:
  void record(TimeNs t, std::uint64_t seq, EventKind kind, std::string_view details) override {
    tsv_.record(t, seq, kind, details);
  }
  std::string text() const { return os_.str(); }

 private:
  std::ostringstream os_;
  TsvTrace tsv_{os_};
};

/// Guest driven by a lambda; `step` counts calls from 0.
class ScriptGuest final : public Guest {
 public:
  using Fn = std::function<Yield(GuestApi&, int step)>;
  explicit ScriptGuest(Fn fn, std::string name = "script") : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string_view name() const override { return name_; }
  Yield step(GuestApi& api) override { return fn_(api, steps_++); }
  int steps() const noexcept { return steps_; }

 private:
  Fn fn_;
  std::string name_;
  int steps_ = 0;
};

inline NodeParams constant_node(TimeNs latency, Addr base = 0, std::uint64_t size = 1ull << 30,
                                double bw = 64.0, std::uint32_t max_inflight = 64) {
  NodeParams n;
  n.base = base;
  n.size_bytes = size;
  n.latency = LatencyDistribution::constant(latency);
  n.bandwidth_bytes_per_ns = bw;
  n.max_inflight = max_inflight;
  return n;
}

inline NodeParams uniform_node(TimeNs lo, TimeNs hi, Addr base = 0, std::uint64_t size = 1ull << 30) {
  NodeParams n = constant_node(0, base, size);
  n.latency = LatencyDistribution::uniform(lo, hi);
  return n;
}

inline std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int x : v) out.push_back(static_cast<std::byte>(x));
  return out;
}

inline RunConfig make_config(const std::string& workload, std::map<std::string, std::int64_t> params,
                             std::vector<NodeParams> nodes, std::uint64_t seed = 1) {
  RunConfig c;
  c.seed = seed;
  c.nodes = std::move(nodes);
  c.workload = WorkloadSpec{workload, std::move(params)};
  return c;
}

}  // namespace amu::test
