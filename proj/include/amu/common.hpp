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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amu {

// Simulated time, integer nanoseconds.
using TimeNs = std::uint64_t;
using Addr = std::uint64_t;
using RequestId = std::uint64_t;

// getfin's in-band failure code. Allocated ids start at 1.
inline constexpr RequestId kNoRequest = 0;

inline constexpr std::uint64_t kKiB = 1024;
inline constexpr std::uint64_t kMiB = 1024 * kKiB;
inline constexpr std::uint64_t kLineBytes = 64;

enum class Errc {
  OutOfRange,
  BadIndex,
  Busy,
  BadSize,
  BadConfig,
  BadPattern,
  TimeRegression,
  BadParams,
  UnmappedAddress,
  InvariantViolation,
  BadSpec,
  IncomparableWorkload,
  BadAxis,
  ParseError,
  SchemaError,
};

constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::BadIndex: return "BadIndex";
    case Errc::Busy: return "Busy";
    case Errc::BadSize: return "BadSize";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadPattern: return "BadPattern";
    case Errc::TimeRegression: return "TimeRegression";
    case Errc::BadParams: return "BadParams";
    case Errc::UnmappedAddress: return "UnmappedAddress";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::BadSpec: return "BadSpec";
    case Errc::IncomparableWorkload: return "IncomparableWorkload";
    case Errc::BadAxis: return "BadAxis";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

// Errors that come from a bad run description rather than from simulation.
constexpr bool is_config_error(Errc e) {
  return e == Errc::ParseError || e == Errc::SchemaError || e == Errc::BadSpec ||
         e == Errc::BadAxis || e == Errc::IncomparableWorkload;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void check_invariant(bool ok, const char* what) {
  if (!ok) fail(Errc::InvariantViolation, what);
}

constexpr bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace amu
