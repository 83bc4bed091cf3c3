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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "amu/common.hpp"

namespace amu {

// Scratchpad carved out of a fixed L2 budget. The remainder of the budget is
// the cache partition, tracked as a byte count only.
class SpmSpace {
 public:
  static constexpr std::uint64_t kPartitionQuantum = 4 * kKiB;

  SpmSpace(std::uint64_t l2_total_bytes, std::uint64_t spm_bytes)
      : l2_total_(l2_total_bytes) {
    if (l2_total_bytes % kPartitionQuantum != 0) {
      fail(Errc::BadSize, "l2 total must be a multiple of the 4 KiB partition quantum");
    }
    check_size(spm_bytes);
    data_.assign(spm_bytes, std::byte{0});
  }

  std::uint64_t capacity_bytes() const noexcept { return data_.size(); }
  std::uint64_t cache_bytes() const noexcept { return l2_total_ - data_.size(); }
  std::uint64_t l2_total_bytes() const noexcept { return l2_total_; }

  bool contains(std::uint64_t addr, std::uint64_t len) const noexcept {
    return addr <= data_.size() && len <= data_.size() - addr;
  }

  std::vector<std::byte> read(std::uint64_t addr, std::uint64_t len) const {
    std::vector<std::byte> out(len);
    read_into(addr, out);
    return out;
  }

  void read_into(std::uint64_t addr, std::span<std::byte> out) const {
    check_range(addr, out.size());
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(addr), out.size(), out.begin());
  }

  void write(std::uint64_t addr, std::span<const std::byte> bytes) {
    check_range(addr, bytes.size());
    std::copy(bytes.begin(), bytes.end(), data_.begin() + static_cast<std::ptrdiff_t>(addr));
  }

  // Resizes the scratchpad, keeping the surviving prefix. The caller is
  // responsible for the no-outstanding-requests precondition.
  void resize(std::uint64_t new_spm_bytes) {
    check_size(new_spm_bytes);
    data_.resize(new_spm_bytes, std::byte{0});
  }

  std::span<const std::byte> bytes() const noexcept { return data_; }

 private:
  void check_size(std::uint64_t spm_bytes) const {
    if (spm_bytes > l2_total_ || spm_bytes % kPartitionQuantum != 0) {
      fail(Errc::BadSize, "spm size " + std::to_string(spm_bytes) +
                              " must be a 4 KiB multiple no larger than " + std::to_string(l2_total_));
    }
  }

  void check_range(std::uint64_t addr, std::uint64_t len) const {
    if (!contains(addr, len)) {
      fail(Errc::OutOfRange, "spm range [" + std::to_string(addr) + ", +" + std::to_string(len) +
                                 ") exceeds capacity " + std::to_string(data_.size()));
    }
  }

  std::uint64_t l2_total_;
  std::vector<std::byte> data_;
};

}  // namespace amu
