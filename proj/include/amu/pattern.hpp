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
#include <limits>
#include <optional>
#include <vector>

#include "amu/common.hpp"
#include "amu/registers.hpp"

namespace amu {

struct PlanEntry {
  Addr mem_addr = 0;
  std::uint64_t spm_addr = 0;
  std::uint32_t size_bytes = 0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Sub-transfers of one request, in issue order.
using ExpandedPlan = std::vector<PlanEntry>;

/// Expands an access pattern into granularity-sized transfers. Element i goes
/// to base_mem + i * stride in memory and base_spm + i * granularity in the
/// scratchpad; Stream uses stride == granularity.
///
/// With `spm_capacity` set, every scratchpad range must fit below it.
inline ExpandedPlan expand_pattern(const AccessPattern& p, const MemAccessConfig& cfg,
                                   std::optional<std::uint64_t> spm_capacity = std::nullopt) {
  if (p.count == 0) fail(Errc::BadPattern, "pattern count must be >= 1");
  if (cfg.granularity_bytes == 0) fail(Errc::BadPattern, "granularity must be >= 1");

  const std::uint64_t g = cfg.granularity_bytes;
  const __int128 stride = p.kind == PatternKind::Stream ? static_cast<__int128>(g) : p.stride_bytes;
  const std::uint64_t spm_end = p.base_spm_addr + g * p.count;
  if (spm_end < p.base_spm_addr || (spm_capacity && spm_end > *spm_capacity)) {
    fail(Errc::BadPattern, "pattern overflows the scratchpad");
  }

  ExpandedPlan plan;
  plan.reserve(p.count);
  for (std::uint32_t i = 0; i < p.count; ++i) {
    const __int128 mem = static_cast<__int128>(p.base_mem_addr) + stride * i;
    if (mem < 0 || mem + g - 1 > static_cast<__int128>(std::numeric_limits<Addr>::max())) {
      fail(Errc::BadPattern, "pattern element " + std::to_string(i) + " leaves the address space");
    }
    plan.push_back({static_cast<Addr>(mem), p.base_spm_addr + g * i, static_cast<std::uint32_t>(g)});
  }
  return plan;
}

// A simple aload/astore is a stream of cfg.count granules.
inline ExpandedPlan expand_simple(std::uint64_t spm_addr, Addr mem_addr, const MemAccessConfig& cfg,
                                  std::optional<std::uint64_t> spm_capacity = std::nullopt) {
  AccessPattern p{PatternKind::Stream, mem_addr, spm_addr, 0, cfg.count};
  return expand_pattern(p, cfg, spm_capacity);
}

}  // namespace amu
