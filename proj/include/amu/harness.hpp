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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "amu/baseline.hpp"
#include "amu/config.hpp"
#include "amu/engine.hpp"
#include "amu/metrics.hpp"
#include "amu/workloads.hpp"

// Experiment drivers behind the CLI: one AMU run, a three-way comparison
// against the baseline cores, and a one-axis sweep.

namespace amu {

inline constexpr const char* kTableHeader = "system,bw,mean_lat,p99_lat,mean_inflight";

/// A prepared AMU simulation: workload inputs written, guest registered.
struct AmuSession {
  std::unique_ptr<Simulator> sim;
  Workload* workload = nullptr;
};

inline AmuSession prepare_amu(const RunConfig& cfg, std::uint64_t seed, TraceSink* trace = nullptr,
                              EffectObserver* observer = nullptr) {
  AmuSession s;
  s.sim = std::make_unique<Simulator>(cfg.machine, cfg.nodes, seed, cfg.sim_options());
  s.sim->set_trace(trace);
  s.sim->set_observer(observer);
  auto w = make_workload(cfg.workload, seed);
  w->prepare(*s.sim);
  s.workload = w.get();
  s.sim->register_guest(std::move(w));
  return s;
}

// Runs to the stop condition and reduces the metrics.
inline MetricsRecord finish_amu(AmuSession& s, const RunConfig& cfg) {
  Simulator& sim = *s.sim;
  if (cfg.duration_ns) {
    sim.run_until(*cfg.duration_ns);
  } else {
    sim.run();
    for (std::size_t g = 0; g < sim.guest_count(); ++g) {
      if (!sim.guest_done(g)) fail(Errc::InvariantViolation, "guest " + std::to_string(g) + " stalled before finishing");
    }
  }
  check_invariant(sim.conservation_holds(), "byte conservation violated");
  return cfg.duration_ns ? sim.finalize(*cfg.duration_ns) : sim.finalize();
}

inline MetricsRecord run_amu(const RunConfig& cfg, std::uint64_t seed, TraceSink* trace = nullptr,
                             EffectObserver* observer = nullptr) {
  AmuSession s = prepare_amu(cfg, seed, trace, observer);
  return finish_amu(s, cfg);
}

inline MetricsRecord run_baseline(const std::string& system, const RunConfig& cfg, std::uint64_t seed,
                                  TraceSink* trace = nullptr) {
  const Trace t = make_trace(cfg.workload, seed);
  if (system == "blocking") {
    return run_blocking(t, cfg.nodes, cfg.baseline, seed, cfg.sim_options(), cfg.duration_ns, trace);
  }
  if (system == "ooo") {
    return run_windowed_ooo(t, cfg.nodes, cfg.baseline, seed, cfg.sim_options(), cfg.duration_ns, trace);
  }
  fail(Errc::BadSpec, "unknown system '" + system + "'");
}

inline MetricsRecord run_system(const std::string& system, const RunConfig& cfg, std::uint64_t seed) {
  return system == "amu" ? run_amu(cfg, seed) : run_baseline(system, cfg, seed);
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::ordered_json metrics_json(const MetricsRecord& m) {
  nlohmann::ordered_json j;
  j["bytes_moved"] = m.bytes_moved;
  j["wall_time_ns"] = m.wall_time_ns;
  j["window_ns"] = m.window_ns;
  j["achieved_bw_bytes_per_ns"] = m.achieved_bw_bytes_per_ns;
  j["requests_completed"] = m.requests_completed;
  j["throughput_req_per_ns"] = m.throughput_req_per_ns;
  j["latency_mean_ns"] = m.latency_mean_ns;
  j["latency_p50_ns"] = m.latency_p50_ns;
  j["latency_p99_ns"] = m.latency_p99_ns;
  j["mean_inflight"] = m.mean_inflight;
  j["littles_law_residual"] = m.littles_law_residual;
  j["node_utilization"] = m.node_utilization;
  auto samples = nlohmann::ordered_json::array();
  for (const InflightSample& s : m.inflight_samples) samples.push_back({{"time", s.time}, {"outstanding", s.outstanding}});
  j["inflight_samples"] = std::move(samples);
  return j;
}

inline std::string metrics_to_string(const MetricsRecord& m) { return metrics_json(m).dump(2) + "\n"; }

struct TableRow {
  std::string system;
  MetricsRecord metrics;
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void write_table(std::ostream& os, const std::vector<TableRow>& rows) {
  os << kTableHeader << '\n';
  for (const TableRow& r : rows) {
    os << r.system << ',' << format_number(r.metrics.achieved_bw_bytes_per_ns) << ','
       << format_number(r.metrics.latency_mean_ns) << ',' << format_number(r.metrics.latency_p99_ns) << ','
       << format_number(r.metrics.mean_inflight) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Commands

/// Writes metrics.json (and trace.tsv when `trace` is set) into `out_dir`.
inline MetricsRecord cmd_run(const RunConfig& cfg, std::uint64_t seed, const std::filesystem::path& out_dir,
                             bool trace) {
  std::filesystem::create_directories(out_dir);
  std::ofstream trace_file;
  std::unique_ptr<TsvTrace> sink;
  if (trace) {
    trace_file.open(out_dir / "trace.tsv", std::ios::binary | std::ios::trunc);
    if (!trace_file) fail(Errc::InvariantViolation, "cannot write " + (out_dir / "trace.tsv").string());
    sink = std::make_unique<TsvTrace>(trace_file);
  }
  const MetricsRecord m = run_amu(cfg, seed, sink.get());
  std::ofstream out(out_dir / "metrics.json", std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::InvariantViolation, "cannot write " + (out_dir / "metrics.json").string());
  out << metrics_to_string(m);
  return m;
}

/// Blocking core, windowed OoO core and AMU on the same addresses and nodes.
inline std::vector<TableRow> cmd_compare(const RunConfig& cfg, std::uint64_t seed) {
  if (!has_trace(cfg.workload.name)) {
    fail(Errc::IncomparableWorkload, cfg.workload.name + " has no equivalent baseline trace");
  }
  std::vector<TableRow> rows;
  for (const char* system : {"blocking", "ooo", "amu"}) rows.push_back({system, run_system(system, cfg, seed)});
  return rows;
}

struct SweepPoint {
  std::string system;
  RunConfig cfg;
};

namespace detail {

inline std::uint64_t integral_axis_value(const std::string& axis, double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 4294967295.0) {
    fail(Errc::BadAxis, axis + " values must be positive integers");
  }
  return static_cast<std::uint64_t>(v);
}

inline std::string axis_label(const std::string& axis, double v) {
  if (axis == "latency_scale") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return axis + "=" + buf;
  }
  return axis + "=" + std::to_string(static_cast<std::uint64_t>(v));
}

}  // namespace detail

// Expands a sweep into independent runs in output order. The axis decides
// which systems it affects: k and granularity the AMU, mshr the OoO core,
// latency_scale every system the workload supports.
inline std::vector<SweepPoint> sweep_points(const RunConfig& base, const SweepSpec& sweep) {
  if (!is_sweep_axis(sweep.axis)) fail(Errc::BadAxis, "unknown axis '" + sweep.axis + "'");
  const WorkloadParams params(base.workload);
  if (sweep.axis == "k" && !params.has("k")) fail(Errc::BadAxis, base.workload.name + " has no k parameter");
  if (sweep.axis == "mshr" && !has_trace(base.workload.name)) {
    fail(Errc::IncomparableWorkload, base.workload.name + " has no equivalent baseline trace");
  }
  std::vector<SweepPoint> out;
  for (double v : sweep.values) {
    RunConfig cfg = base;
    std::vector<std::string> systems{"amu"};
    if (sweep.axis == "k") {
      cfg.workload.params["k"] = static_cast<std::int64_t>(detail::integral_axis_value(sweep.axis, v));
    } else if (sweep.axis == "granularity") {
      cfg.workload.params["granularity"] = static_cast<std::int64_t>(detail::integral_axis_value(sweep.axis, v));
      WorkloadParams check(cfg.workload);
    } else if (sweep.axis == "mshr") {
      cfg.baseline.mshr_entries = static_cast<std::uint32_t>(detail::integral_axis_value(sweep.axis, v));
      systems = {"ooo"};
    } else {
      if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::BadAxis, "latency_scale values must be > 0");
      for (NodeParams& n : cfg.nodes) n.latency = n.latency.scaled(v);
      if (has_trace(cfg.workload.name)) systems = {"blocking", "ooo", "amu"};
    }
    for (const std::string& s : systems) out.push_back({s + "@" + detail::axis_label(sweep.axis, v), cfg});
  }
  return out;
}

/// Runs every sweep point, `threads` at a time; rows keep sweep order.
inline std::vector<TableRow> cmd_sweep(const RunConfig& cfg, const SweepSpec& sweep, std::uint64_t seed,
                                       unsigned threads = std::thread::hardware_concurrency()) {
  const std::vector<SweepPoint> points = sweep_points(cfg, sweep);
  std::vector<TableRow> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      try {
        const std::string& label = points[i].system;
        rows[i] = {label, run_system(label.substr(0, label.find('@')), points[i].cfg, seed)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace amu
