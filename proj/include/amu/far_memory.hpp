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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "amu/common.hpp"
#include "amu/latency.hpp"
#include "amu/request.hpp"

namespace amu {

struct NodeParams {
  Addr base = 0;
  std::uint64_t size_bytes = 1ull << 30;
  LatencyDistribution latency = LatencyDistribution::constant(1000);
  double bandwidth_bytes_per_ns = 64.0;
  std::uint32_t max_inflight = 64;

  Addr limit() const noexcept { return base + size_bytes; }

  void validate() const {
    if (size_bytes == 0 || base + size_bytes < base) fail(Errc::BadParams, "node range is empty or wraps");
    if (!(bandwidth_bytes_per_ns > 0.0) || !std::isfinite(bandwidth_bytes_per_ns)) {
      fail(Errc::BadParams, "node bandwidth must be a positive number of bytes/ns");
    }
    if (max_inflight == 0) fail(Errc::BadParams, "node max_inflight must be >= 1");
    latency.validate();
  }
};

/// One granule-sized transfer routed to a node.
struct SubRequest {
  RequestId parent = kNoRequest;  // kNoRequest for baseline-core loads
  std::uint32_t index = 0;
  RequestKind kind = RequestKind::Load;
  Addr mem_addr = 0;
  std::uint64_t spm_addr = 0;
  std::uint32_t size_bytes = 0;
  std::uint8_t qos = 0;
  std::size_t node = 0;
  std::uint64_t owner = 0;  // submitter-defined token
  TimeNs enqueue_time = 0;
  TimeNs dispatch_time = 0;
  TimeNs link_start = 0;  // transfer slot on the node link
  TimeNs link_end = 0;
  TimeNs complete_time = 0;
};

/// A far-memory backend: latency model, serialized link, in-flight limit and
/// a strict-priority queue (higher qos first, FIFO within a level).
///
/// Service: a dispatched sub-request takes the next free slot on the link for
/// ceil(size / bandwidth) ns, then its sampled round-trip latency elapses.
/// Latencies of different sub-requests overlap.
class FarMemoryNode {
 public:
  FarMemoryNode(std::size_t id, NodeParams params, std::uint64_t seed) : id_(id), params_(std::move(params)) {
    params_.validate();
    std::seed_seq seq{seed, static_cast<std::uint64_t>(id), std::uint64_t{0x6c6174}};
    rng_.seed(seq);
  }

  std::size_t id() const noexcept { return id_; }
  const NodeParams& params() const noexcept { return params_; }

  bool owns(Addr addr, std::uint64_t len) const noexcept {
    return addr >= params_.base && len <= params_.size_bytes && addr - params_.base <= params_.size_bytes - len;
  }

  TimeNs transfer_ns(std::uint32_t size) const {
    return static_cast<TimeNs>(std::ceil(static_cast<double>(size) / params_.bandwidth_bytes_per_ns));
  }

  void enqueue(SubRequest sub, TimeNs now) {
    sub.enqueue_time = now;
    queue_.push(Queued{std::move(sub), arrivals_++});
  }

  bool can_dispatch() const noexcept { return !queue_.empty() && inflight_ < params_.max_inflight; }

  // Starts service of the best queued sub-request at `now`.
  SubRequest dispatch(TimeNs now) {
    check_invariant(can_dispatch(), "dispatch without a queued request and a free slot");
    SubRequest sub = queue_.top().sub;
    queue_.pop();
    const TimeNs xfer = transfer_ns(sub.size_bytes);
    const TimeNs start = std::max(now, link_free_);
    link_free_ = start + xfer;
    busy_ns_ += xfer;
    sub.dispatch_time = now;
    sub.link_start = start;
    sub.link_end = link_free_;
    sub.complete_time = link_free_ + sample_latency(params_.latency, rng_);
    ++inflight_;
    check_invariant(inflight_ <= params_.max_inflight, "node in-flight limit exceeded");
    return sub;
  }

  void finish(const SubRequest& sub) {
    check_invariant(inflight_ > 0, "completion on an idle node");
    --inflight_;
    (sub.kind == RequestKind::Load ? bytes_loaded_ : bytes_stored_) += sub.size_bytes;
  }

  std::uint32_t inflight() const noexcept { return inflight_; }
  std::size_t queued() const noexcept { return queue_.size(); }
  std::uint64_t bytes_loaded() const noexcept { return bytes_loaded_; }
  std::uint64_t bytes_stored() const noexcept { return bytes_stored_; }
  TimeNs busy_ns() const noexcept { return busy_ns_; }

  // `n<id>=<inflight>/<max>/<queued>`, parsed by the trace audit.
  std::string state_token() const {
    return "n" + std::to_string(id_) + "=" + std::to_string(inflight_) + "/" + std::to_string(params_.max_inflight) +
           "/" + std::to_string(queue_.size());
  }

  // Backing store, zero-filled on first touch.

  void read(Addr addr, std::span<std::byte> out) const {
    for_pages(addr, out.size(), [&](std::uint64_t page, std::uint64_t off, std::uint64_t pos, std::uint64_t n) {
      auto it = pages_.find(page);
      if (it == pages_.end()) {
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), n, std::byte{0});
      } else {
        std::copy_n(it->second->begin() + static_cast<std::ptrdiff_t>(off), n,
                    out.begin() + static_cast<std::ptrdiff_t>(pos));
      }
    });
  }

  void write(Addr addr, std::span<const std::byte> in) {
    for_pages(addr, in.size(), [&](std::uint64_t page, std::uint64_t off, std::uint64_t pos, std::uint64_t n) {
      auto& p = pages_[page];
      if (!p) p = std::make_unique<Page>();
      std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(pos), n, p->begin() + static_cast<std::ptrdiff_t>(off));
    });
  }

 private:
  static constexpr std::uint64_t kPageBytes = 4096;
  using Page = std::array<std::byte, kPageBytes>;

  struct Queued {
    SubRequest sub;
    std::uint64_t arrival;
  };
  struct Lower {
    bool operator()(const Queued& a, const Queued& b) const noexcept {
      return a.sub.qos != b.sub.qos ? a.sub.qos < b.sub.qos : a.arrival > b.arrival;
    }
  };

  template <class Fn>
  static void for_pages(Addr addr, std::uint64_t len, Fn&& fn) {
    std::uint64_t pos = 0;
    while (pos < len) {
      const Addr a = addr + pos;
      const std::uint64_t off = a % kPageBytes;
      const std::uint64_t n = std::min(len - pos, kPageBytes - off);
      fn(a / kPageBytes, off, pos, n);
      pos += n;
    }
  }

  std::size_t id_;
  NodeParams params_;
  Rng rng_;
  std::priority_queue<Queued, std::vector<Queued>, Lower> queue_;
  std::uint64_t arrivals_ = 0;
  std::uint32_t inflight_ = 0;
  TimeNs link_free_ = 0;
  TimeNs busy_ns_ = 0;
  std::uint64_t bytes_loaded_ = 0;
  std::uint64_t bytes_stored_ = 0;
  std::unordered_map<std::uint64_t, std::unique_ptr<Page>> pages_;
};

/// The set of far-memory nodes and the address map over them.
class MemorySystem {
 public:
  MemorySystem(const std::vector<NodeParams>& params, std::uint64_t seed) {
    if (params.empty()) fail(Errc::BadParams, "at least one memory node is required");
    for (std::size_t i = 0; i < params.size(); ++i) nodes_.emplace_back(i, params[i], seed);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
        const auto& a = nodes_[i].params();
        const auto& b = nodes_[j].params();
        if (a.base < b.limit() && b.base < a.limit()) {
          fail(Errc::BadParams, "memory nodes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
      }
    }
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  FarMemoryNode& node(std::size_t i) { return nodes_.at(i); }
  const FarMemoryNode& node(std::size_t i) const { return nodes_.at(i); }

  // Node owning all of [addr, addr + len), if any.
  std::optional<std::size_t> find(Addr addr, std::uint64_t len) const noexcept {
    for (const auto& n : nodes_) {
      if (n.owns(addr, std::max<std::uint64_t>(len, 1))) return n.id();
    }
    return std::nullopt;
  }

  std::size_t route(Addr addr, std::uint64_t len) const {
    if (auto n = find(addr, len)) return *n;
    fail(Errc::UnmappedAddress, "no node owns [" + hex(addr) + ", +" + std::to_string(len) + ")");
  }

  // True when every byte of the range is owned by some node.
  bool mapped(Addr addr, std::uint64_t len) const noexcept {
    while (len > 0) {
      const FarMemoryNode* owner = nullptr;
      for (const auto& n : nodes_) {
        if (n.owns(addr, 1)) owner = &n;
      }
      if (!owner) return false;
      const std::uint64_t room = owner->params().limit() - addr;
      if (room >= len) return true;
      addr += room;
      len -= room;
    }
    return true;
  }

  // Host-side access, spanning nodes as needed. No timing.
  void read(Addr addr, std::span<std::byte> out) const {
    split(addr, out.size(), [&](std::size_t n, Addr a, std::uint64_t pos, std::uint64_t len) {
      nodes_[n].read(a, out.subspan(pos, len));
    });
  }

  std::vector<std::byte> read(Addr addr, std::uint64_t len) const {
    std::vector<std::byte> out(len);
    read(addr, out);
    return out;
  }

  void write(Addr addr, std::span<const std::byte> in) {
    split(addr, in.size(), [&](std::size_t n, Addr a, std::uint64_t pos, std::uint64_t len) {
      nodes_[n].write(a, in.subspan(pos, len));
    });
  }

  static std::string hex(Addr a) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(a));
    return buf;
  }

 private:
  template <class Fn>
  void split(Addr addr, std::uint64_t len, Fn&& fn) const {
    std::uint64_t pos = 0;
    while (pos < len) {
      const Addr a = addr + pos;
      const std::size_t n = route(a, 1);
      const std::uint64_t take = std::min(len - pos, nodes_[n].params().limit() - a);
      fn(n, a, pos, take);
      pos += take;
    }
  }

  std::vector<FarMemoryNode> nodes_;
};

}  // namespace amu
