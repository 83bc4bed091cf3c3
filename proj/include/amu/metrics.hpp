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
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "amu/common.hpp"

namespace amu {

struct InflightSample {
  TimeNs time = 0;
  std::uint64_t outstanding = 0;

  friend bool operator==(const InflightSample&, const InflightSample&) = default;
};

struct MetricsRecord {
  std::uint64_t bytes_moved = 0;
  TimeNs wall_time_ns = 0;
  TimeNs window_ns = 0;
  double achieved_bw_bytes_per_ns = 0.0;
  std::uint64_t requests_completed = 0;
  double throughput_req_per_ns = 0.0;
  double latency_mean_ns = 0.0;
  double latency_p50_ns = 0.0;
  double latency_p99_ns = 0.0;
  double mean_inflight = 0.0;
  double littles_law_residual = 0.0;
  std::vector<double> node_utilization;
  std::vector<InflightSample> inflight_samples;
};

// |N - lambda * W| / N, or 0 for an idle window.
inline double littles_law_residual(double mean_inflight, double throughput, double mean_latency) {
  if (mean_inflight <= 0.0) return 0.0;
  return std::abs(mean_inflight - throughput * mean_latency) / mean_inflight;
}

// Nearest-rank percentile of an ascending sequence.
inline double percentile(const std::vector<TimeNs>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return static_cast<double>(sorted[rank - 1]);
}

/// Accumulates per-request timing and reduces it over the measurement window
/// [warmup, end]. A request is in flight from issue to completion.
class MetricsCollector {
 public:
  explicit MetricsCollector(TimeNs warmup_ns = 0, std::size_t nodes = 0)
      : warmup_(warmup_ns), link_busy_(nodes) {}

  void on_issue(TimeNs t) { deltas_.emplace_back(t, +1); }

  void on_complete(TimeNs issue, TimeNs complete, std::uint64_t bytes) {
    deltas_.emplace_back(complete, -1);
    done_.push_back(Done{issue, complete, bytes});
  }

  void on_transfer(std::size_t node, TimeNs start, TimeNs end) {
    if (node >= link_busy_.size()) link_busy_.resize(node + 1);
    link_busy_[node].emplace_back(start, end);
  }

  void on_sample(TimeNs t, std::uint64_t outstanding) { samples_.push_back({t, outstanding}); }

  MetricsRecord finalize(TimeNs end) const {
    MetricsRecord r;
    r.wall_time_ns = end;
    r.inflight_samples = samples_;
    const TimeNs lo = std::min(warmup_, end);
    const TimeNs window = end - lo;
    r.window_ns = window;
    r.node_utilization.assign(link_busy_.size(), 0.0);
    if (window == 0) return r;
    const double w = static_cast<double>(window);

    std::vector<TimeNs> lat;
    long double lat_sum = 0;
    for (const Done& d : done_) {
      if (d.complete < lo || d.complete > end) continue;
      r.bytes_moved += d.bytes;
      lat.push_back(d.complete - d.issue);
      lat_sum += static_cast<long double>(d.complete - d.issue);
    }
    std::sort(lat.begin(), lat.end());
    r.requests_completed = lat.size();
    r.achieved_bw_bytes_per_ns = static_cast<double>(r.bytes_moved) / w;
    r.throughput_req_per_ns = static_cast<double>(lat.size()) / w;
    if (!lat.empty()) {
      r.latency_mean_ns = static_cast<double>(lat_sum / static_cast<long double>(lat.size()));
      r.latency_p50_ns = percentile(lat, 0.50);
      r.latency_p99_ns = percentile(lat, 0.99);
    }

    // Exact time integral of the in-flight count over the window.
    auto deltas = deltas_;
    std::sort(deltas.begin(), deltas.end());
    long double area = 0;
    std::int64_t level = 0;
    TimeNs prev = lo;
    for (const auto& [t, d] : deltas) {
      if (t > end) break;
      if (t > prev) {
        area += static_cast<long double>(level) * static_cast<long double>(t - prev);
        prev = t;
      }
      level += d;
    }
    if (end > prev) area += static_cast<long double>(level) * static_cast<long double>(end - prev);
    r.mean_inflight = static_cast<double>(area / static_cast<long double>(window));
    r.littles_law_residual = littles_law_residual(r.mean_inflight, r.throughput_req_per_ns, r.latency_mean_ns);

    for (std::size_t n = 0; n < link_busy_.size(); ++n) {
      TimeNs busy = 0;
      for (const auto& [s, e] : link_busy_[n]) {
        const TimeNs a = std::max(s, lo);
        const TimeNs b = std::min(e, end);
        if (b > a) busy += b - a;
      }
      r.node_utilization[n] = static_cast<double>(busy) / w;
    }
    return r;
  }

 private:
  struct Done {
    TimeNs issue;
    TimeNs complete;
    std::uint64_t bytes;
  };

  TimeNs warmup_;
  std::vector<std::pair<TimeNs, int>> deltas_;
  std::vector<Done> done_;
  std::vector<std::vector<std::pair<TimeNs, TimeNs>>> link_busy_;
  std::vector<InflightSample> samples_;
};

}  // namespace amu
