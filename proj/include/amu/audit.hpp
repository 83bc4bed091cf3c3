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
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "amu/common.hpp"

// Offline checks over an event trace (time, seq, kind, details):
//   - events appear in (time, seq) order
//   - per node: in-flight <= max, and nothing queued while a slot is free
//   - Sample: spm + cache == l2
//   - core steps: ROB and MSHR occupancy within bounds
//   - optionally, guest outstanding requests within a limit

namespace amu {

struct AuditOptions {
  std::optional<std::uint64_t> max_outstanding;
};

struct AuditReport {
  std::uint64_t events = 0;
  std::uint64_t node_states = 0;
  std::uint64_t samples = 0;
  std::uint64_t core_states = 0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

inline bool parse_fraction(const std::string& v, std::uint64_t& a, std::uint64_t& b) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) return false;
  try {
    a = std::stoull(v.substr(0, slash));
    b = std::stoull(v.substr(slash + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace detail

inline AuditReport audit_trace(std::istream& in, const AuditOptions& opts = {}) {
  AuditReport r;
  std::string line;
  std::uint64_t lineno = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> prev;
  auto violation = [&](const std::string& what) {
    r.violations.push_back("line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 4) {
      violation("expected 4 tab-separated fields");
      continue;
    }
    ++r.events;
    std::uint64_t time = 0, seq = 0;
    try {
      time = std::stoull(fields[0]);
      seq = std::stoull(fields[1]);
    } catch (const std::exception&) {
      violation("bad time or seq");
      continue;
    }
    if (prev && std::make_pair(time, seq) <= *prev) violation("events out of (time, seq) order");
    prev = std::make_pair(time, seq);

    std::map<std::string, std::string> kv;
    std::stringstream ds(fields[3]);
    for (std::string tok; ds >> tok;) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }

    for (const auto& [key, value] : kv) {
      if (key.size() < 2 || key[0] != 'n' || key.find_first_not_of("0123456789", 1) != std::string::npos) continue;
      const auto slash2 = value.rfind('/');
      std::uint64_t inflight = 0, max = 0;
      if (slash2 == std::string::npos || !detail::parse_fraction(value.substr(0, slash2), inflight, max)) {
        violation("bad node state " + key + "=" + value);
        continue;
      }
      const std::uint64_t queued = std::stoull(value.substr(slash2 + 1));
      ++r.node_states;
      if (inflight > max) violation("node " + key + " in-flight " + std::to_string(inflight) + " > max");
      if (queued > 0 && inflight < max) violation("node " + key + " idles a slot with work queued");
    }

    if (fields[2] == "Sample") {
      ++r.samples;
      try {
        const std::uint64_t spm = std::stoull(kv.at("spm"));
        const std::uint64_t cache = std::stoull(kv.at("cache"));
        const std::uint64_t l2 = std::stoull(kv.at("l2"));
        if (spm + cache != l2) violation("partition not conserved");
      } catch (const std::exception&) {
        violation("Sample without spm/cache/l2");
      }
    }

    if (fields[2] == "GuestStep") {
      for (const char* key : {"rob", "mshr"}) {
        auto it = kv.find(key);
        if (it == kv.end()) continue;
        std::uint64_t used = 0, cap = 0;
        if (!detail::parse_fraction(it->second, used, cap)) {
          violation(std::string("bad ") + key + " state");
          continue;
        }
        ++r.core_states;
        if (used > cap) violation(std::string(key) + " occupancy " + it->second + " exceeds capacity");
      }
      if (opts.max_outstanding) {
        auto it = kv.find("outstanding");
        if (it != kv.end() && std::stoull(it->second) > *opts.max_outstanding) {
          violation("guest has " + it->second + " outstanding requests");
        }
      }
    }
  }
  return r;
}

inline AuditReport audit_trace(const std::string& text, const AuditOptions& opts = {}) {
  std::istringstream in(text);
  return audit_trace(in, opts);
}

}  // namespace amu
