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
#include <string>
#include <vector>

#include "amu/common.hpp"

namespace amu {

/// Contents of one memory access configuration register (MACR).
struct MemAccessConfig {
  std::uint32_t granularity_bytes = 64;
  std::uint8_t qos_label = 0;  // 0 is the lowest priority
  std::uint32_t count = 1;     // sub-requests per simple aload/astore
  std::uint64_t tag = 0;       // opaque, software-defined

  std::uint64_t total_bytes() const noexcept {
    return static_cast<std::uint64_t>(granularity_bytes) * count;
  }

  friend bool operator==(const MemAccessConfig&, const MemAccessConfig&) = default;
};

enum class PatternKind : std::uint8_t { Stride, Stream };

/// Contents of one access pattern register (APR). For Stream the stride is
/// implied by the granularity of the configuration used at issue.
struct AccessPattern {
  PatternKind kind = PatternKind::Stream;
  Addr base_mem_addr = 0;
  std::uint64_t base_spm_addr = 0;
  std::int64_t stride_bytes = 0;
  std::uint32_t count = 1;

  friend bool operator==(const AccessPattern&, const AccessPattern&) = default;
};

struct RegisterFileShape {
  std::size_t macr_count = 8;
  std::size_t apr_count = 4;
  MemAccessConfig macr_default{};
};

/// MACRs, the default configuration register and APRs of one core.
class AmuRegisterFile {
 public:
  AmuRegisterFile() : AmuRegisterFile(RegisterFileShape{}) {}

  explicit AmuRegisterFile(const RegisterFileShape& shape)
      : macr_(shape.macr_count, shape.macr_default), apr_(shape.apr_count) {
    if (shape.macr_count == 0 || shape.apr_count == 0) {
      fail(Errc::BadSize, "register file needs at least one MACR and one APR");
    }
  }

  std::size_t macr_count() const noexcept { return macr_.size(); }
  std::size_t apr_count() const noexcept { return apr_.size(); }

  const MemAccessConfig& read_macr(std::size_t idx) const { return macr_.at(checked(idx, macr_.size(), "macr")); }
  void write_macr(std::size_t idx, const MemAccessConfig& cfg) { macr_[checked(idx, macr_.size(), "macr")] = cfg; }

  const AccessPattern& read_apr(std::size_t idx) const { return apr_.at(checked(idx, apr_.size(), "apr")); }
  void write_apr(std::size_t idx, const AccessPattern& p) { apr_[checked(idx, apr_.size(), "apr")] = p; }

  std::size_t default_config() const noexcept { return dcr_; }
  void set_default_config(std::size_t idx) { dcr_ = checked(idx, macr_.size(), "dcr"); }

 private:
  static std::size_t checked(std::size_t idx, std::size_t n, const char* what) {
    if (idx >= n) {
      fail(Errc::BadIndex, std::string(what) + " index " + std::to_string(idx) + " >= " + std::to_string(n));
    }
    return idx;
  }

  std::vector<MemAccessConfig> macr_;
  std::size_t dcr_ = 0;
  std::vector<AccessPattern> apr_;
};

}  // namespace amu
