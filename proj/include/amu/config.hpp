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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "amu/baseline.hpp"
#include "amu/common.hpp"
#include "amu/far_memory.hpp"
#include "amu/machine_state.hpp"
#include "amu/workloads.hpp"

// JSON run configuration. Every object rejects keys it does not know, and
// every validation error names the offending key path.
//
// {
//   "seed": 1,
//   "duration_ns": 1000000,          optional; run to completion if absent
//   "warmup_ns": 0,
//   "sample_interval_ns": 0,
//   "machine": {"l2_total_bytes", "spm_bytes", "max_outstanding", "issue_cost_ns",
//               "macr_count", "apr_count", "macr_default": {...}, "legal_granularities": [...]},
//   "nodes": [{"base", "size_bytes", "bandwidth_bytes_per_ns", "max_inflight",
//              "latency": {"kind": "constant", "value"} | {"kind": "uniform", "lo", "hi"} |
//                         {"kind": "bimodal", "p_high", "low", "high"} |
//                         {"kind": "lognormal", "mu", "sigma", "clamp_lo", "clamp_hi"}}],
//   "workload": {"name": "seq_stream", "params": {"footprint": 65536, ...}},
//   "baseline": {"rob_entries", "mshr_entries", "issue_width", "cycle_ns"},
//   "sweep": {"axis": "k" | "granularity" | "mshr" | "latency_scale", "values": [...]}
// }

namespace amu {

struct SweepSpec {
  std::string axis;
  std::vector<double> values;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::optional<TimeNs> duration_ns;
  TimeNs warmup_ns = 0;
  TimeNs sample_interval_ns = 0;
  MachineConfig machine{};
  std::vector<NodeParams> nodes{NodeParams{}};
  WorkloadSpec workload{"seq_stream", {}};
  CoreParams baseline{};
  std::optional<SweepSpec> sweep;

  SimOptions sim_options() const { return SimOptions{sample_interval_ns, warmup_ns}; }
};

inline bool is_sweep_axis(const std::string& axis) {
  return axis == "k" || axis == "granularity" || axis == "mshr" || axis == "latency_scale";
}

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema(const std::string& path, const std::string& what) {
  fail(Errc::SchemaError, path + ": " + what);
}

inline void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) schema(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

template <class T>
T get_uint(const json& obj, const std::string& path, const char* key, T def,
           T max = std::numeric_limits<T>::max()) {
  auto it = obj.find(key);
  if (it == obj.end()) return def;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->template get<std::int64_t>() >= 0)) {
    schema(join(path, key), "expected a non-negative integer");
  }
  const auto v = it->template get<std::uint64_t>();
  if (v > static_cast<std::uint64_t>(max)) schema(join(path, key), "value too large");
  return static_cast<T>(v);
}

inline double get_double(const json& obj, const std::string& path, const char* key, double def) {
  auto it = obj.find(key);
  if (it == obj.end()) return def;
  if (!it->is_number()) schema(join(path, key), "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) schema(join(path, key), "expected a finite number");
  return v;
}

inline LatencyDistribution parse_latency(const json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) schema(join(path, "kind"), "expected a string");
  const std::string kind = kind_it->get<std::string>();
  LatencyDistribution d;
  if (kind == "constant") {
    only_keys(j, path, {"kind", "value"});
    d = LatencyDistribution::constant(get_uint<TimeNs>(j, path, "value", 1000));
  } else if (kind == "uniform") {
    only_keys(j, path, {"kind", "lo", "hi"});
    d = LatencyDistribution::uniform(get_uint<TimeNs>(j, path, "lo", 300), get_uint<TimeNs>(j, path, "hi", 10000));
  } else if (kind == "bimodal") {
    only_keys(j, path, {"kind", "p_high", "low", "high"});
    if (!j.contains("low")) schema(join(path, "low"), "required");
    if (!j.contains("high")) schema(join(path, "high"), "required");
    d = LatencyDistribution::bimodal(get_double(j, path, "p_high", 0.5), parse_latency(j.at("low"), join(path, "low")),
                                     parse_latency(j.at("high"), join(path, "high")));
  } else if (kind == "lognormal") {
    only_keys(j, path, {"kind", "mu", "sigma", "clamp_lo", "clamp_hi"});
    d = LatencyDistribution::lognormal(get_double(j, path, "mu", 7.0), get_double(j, path, "sigma", 0.5),
                                       get_uint<TimeNs>(j, path, "clamp_lo", 0),
                                       get_uint<TimeNs>(j, path, "clamp_hi", std::numeric_limits<std::uint32_t>::max()));
  } else {
    schema(join(path, "kind"), "unknown latency kind '" + kind + "'");
  }
  try {
    d.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return d;
}

inline MemAccessConfig parse_macr(const json& j, const std::string& path) {
  only_keys(j, path, {"granularity_bytes", "qos_label", "count", "tag"});
  MemAccessConfig c;
  c.granularity_bytes = get_uint<std::uint32_t>(j, path, "granularity_bytes", c.granularity_bytes);
  c.qos_label = get_uint<std::uint8_t>(j, path, "qos_label", c.qos_label);
  c.count = get_uint<std::uint32_t>(j, path, "count", c.count);
  c.tag = get_uint<std::uint64_t>(j, path, "tag", c.tag);
  return c;
}

inline MachineConfig parse_machine(const json& j, const std::string& path) {
  only_keys(j, path, {"l2_total_bytes", "spm_bytes", "max_outstanding", "issue_cost_ns", "macr_count", "apr_count",
                      "macr_default", "legal_granularities"});
  MachineConfig m;
  m.l2_total_bytes = get_uint<std::uint64_t>(j, path, "l2_total_bytes", m.l2_total_bytes);
  m.spm_bytes = get_uint<std::uint64_t>(j, path, "spm_bytes", m.spm_bytes);
  m.max_outstanding = get_uint<std::uint32_t>(j, path, "max_outstanding", m.max_outstanding);
  m.issue_cost_ns = get_uint<TimeNs>(j, path, "issue_cost_ns", m.issue_cost_ns);
  m.registers.macr_count = get_uint<std::size_t>(j, path, "macr_count", m.registers.macr_count);
  m.registers.apr_count = get_uint<std::size_t>(j, path, "apr_count", m.registers.apr_count);
  if (j.contains("macr_default")) m.registers.macr_default = parse_macr(j.at("macr_default"), join(path, "macr_default"));
  if (j.contains("legal_granularities")) {
    const json& g = j.at("legal_granularities");
    const std::string gp = join(path, "legal_granularities");
    if (!g.is_array() || g.empty()) schema(gp, "expected a non-empty array");
    m.legal_granularities.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number_unsigned()) schema(gp + "[" + std::to_string(i) + "]", "expected a positive integer");
      m.legal_granularities.push_back(g[i].get<std::uint32_t>());
    }
  }
  if (m.spm_bytes > m.l2_total_bytes) schema(join(path, "spm_bytes"), "exceeds l2_total_bytes");
  if (m.registers.macr_count == 0) schema(join(path, "macr_count"), "must be >= 1");
  if (m.registers.apr_count == 0) schema(join(path, "apr_count"), "must be >= 1");
  try {
    MachineState probe(m);
  } catch (const Error& e) {
    schema(path.empty() ? "machine" : path, e.what());
  }
  return m;
}

inline NodeParams parse_node(const json& j, const std::string& path) {
  only_keys(j, path, {"base", "size_bytes", "latency", "bandwidth_bytes_per_ns", "max_inflight"});
  NodeParams n;
  n.base = get_uint<Addr>(j, path, "base", n.base);
  n.size_bytes = get_uint<std::uint64_t>(j, path, "size_bytes", n.size_bytes);
  n.bandwidth_bytes_per_ns = get_double(j, path, "bandwidth_bytes_per_ns", n.bandwidth_bytes_per_ns);
  n.max_inflight = get_uint<std::uint32_t>(j, path, "max_inflight", n.max_inflight);
  if (j.contains("latency")) n.latency = parse_latency(j.at("latency"), join(path, "latency"));
  try {
    n.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return n;
}

inline CoreParams parse_core(const json& j, const std::string& path) {
  only_keys(j, path, {"rob_entries", "mshr_entries", "issue_width", "cycle_ns"});
  CoreParams c;
  c.rob_entries = get_uint<std::uint32_t>(j, path, "rob_entries", c.rob_entries);
  c.mshr_entries = get_uint<std::uint32_t>(j, path, "mshr_entries", c.mshr_entries);
  c.issue_width = get_uint<std::uint32_t>(j, path, "issue_width", c.issue_width);
  c.cycle_ns = get_uint<TimeNs>(j, path, "cycle_ns", c.cycle_ns);
  try {
    c.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return c;
}

inline WorkloadSpec parse_workload(const json& j, const std::string& path) {
  only_keys(j, path, {"name", "params"});
  WorkloadSpec w;
  auto name = j.find("name");
  if (name == j.end() || !name->is_string()) schema(join(path, "name"), "expected a string");
  w.name = name->get<std::string>();
  if (!is_workload_name(w.name)) schema(join(path, "name"), "unknown workload '" + w.name + "'");
  if (j.contains("params")) {
    const json& p = j.at("params");
    const std::string pp = join(path, "params");
    if (!p.is_object()) schema(pp, "expected an object");
    for (const auto& [key, value] : p.items()) {
      if (!value.is_number_integer()) schema(join(pp, key), "expected an integer");
      w.params[key] = value.get<std::int64_t>();
    }
  }
  try {
    WorkloadParams check(w);
  } catch (const Error& e) {
    schema(join(path, "params"), e.what());
  }
  return w;
}

inline SweepSpec parse_sweep(const json& j, const std::string& path) {
  only_keys(j, path, {"axis", "values"});
  SweepSpec s;
  auto axis = j.find("axis");
  if (axis == j.end() || !axis->is_string()) schema(join(path, "axis"), "expected a string");
  s.axis = axis->get<std::string>();
  if (!is_sweep_axis(s.axis)) schema(join(path, "axis"), "unknown axis '" + s.axis + "'");
  if (j.contains("values")) {
    const json& v = j.at("values");
    if (!v.is_array()) schema(join(path, "values"), "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) schema(join(path, "values") + "[" + std::to_string(i) + "]", "expected a number");
      s.values.push_back(v[i].get<double>());
    }
  }
  return s;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  only_keys(j, "", {"seed", "duration_ns", "warmup_ns", "sample_interval_ns", "machine", "nodes", "workload",
                    "baseline", "sweep"});
  RunConfig c;
  c.seed = get_uint<std::uint64_t>(j, "", "seed", c.seed);
  if (j.contains("duration_ns")) c.duration_ns = get_uint<TimeNs>(j, "", "duration_ns", 0);
  c.warmup_ns = get_uint<TimeNs>(j, "", "warmup_ns", c.warmup_ns);
  c.sample_interval_ns = get_uint<TimeNs>(j, "", "sample_interval_ns", c.sample_interval_ns);
  if (j.contains("machine")) c.machine = parse_machine(j.at("machine"), "machine");
  if (j.contains("nodes")) {
    const json& n = j.at("nodes");
    if (!n.is_array() || n.empty()) schema("nodes", "expected a non-empty array");
    c.nodes.clear();
    for (std::size_t i = 0; i < n.size(); ++i) c.nodes.push_back(parse_node(n[i], "nodes[" + std::to_string(i) + "]"));
    try {
      MemorySystem probe(c.nodes, 0);
    } catch (const Error& e) {
      schema("nodes", e.what());
    }
  }
  if (!j.contains("workload")) schema("workload", "required");
  c.workload = parse_workload(j.at("workload"), "workload");
  if (j.contains("baseline")) c.baseline = parse_core(j.at("baseline"), "baseline");
  if (j.contains("sweep")) c.sweep = parse_sweep(j.at("sweep"), "sweep");
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::ParseError, e.what());
  }
  return parse_config(j);
}

inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace amu
