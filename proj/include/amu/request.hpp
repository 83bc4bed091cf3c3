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
#include <deque>
#include <iterator>
#include <optional>
#include <string_view>
#include <unordered_set>

#include "amu/common.hpp"
#include "amu/registers.hpp"

namespace amu {

enum class RequestKind : std::uint8_t { Load, Store };

constexpr std::string_view to_string(RequestKind k) { return k == RequestKind::Load ? "load" : "store"; }

enum class RequestState : std::uint8_t { Pending, InFlight, Complete, Retired };

struct RequestDescriptor {
  RequestId id = kNoRequest;
  RequestKind kind = RequestKind::Load;
  std::uint64_t spm_addr = 0;
  Addr mem_addr = 0;
  MemAccessConfig config{};
  std::optional<AccessPattern> pattern;
  RequestState state = RequestState::Pending;
  TimeNs issue_time = 0;
  std::optional<TimeNs> complete_time;

  // Moves one step along Pending -> InFlight -> Complete -> Retired.
  void advance(RequestState next) {
    check_invariant(static_cast<int>(next) == static_cast<int>(state) + 1,
                    "request state must advance Pending -> InFlight -> Complete -> Retired");
    state = next;
  }
};

// Completed, not yet retired request ids, ordered by completion time with
// ties broken by id.
class CompletionQueue {
 public:
  void push(RequestId id, TimeNs complete_time) {
    check_invariant(id != kNoRequest, "completion queue cannot hold the failure code");
    check_invariant(ever_pushed_.insert(id).second, "request id completed twice");
    check_invariant(fifo_.empty() || fifo_.back().time <= complete_time, "completions pushed out of time order");
    auto pos = fifo_.end();
    while (pos != fifo_.begin() && std::prev(pos)->time == complete_time && std::prev(pos)->id > id) --pos;
    fifo_.insert(pos, Entry{complete_time, id});
  }

  // kNoRequest when empty.
  RequestId pop() {
    if (fifo_.empty()) return kNoRequest;
    RequestId id = fifo_.front().id;
    fifo_.pop_front();
    return id;
  }

  bool empty() const noexcept { return fifo_.empty(); }
  std::size_t size() const noexcept { return fifo_.size(); }

 private:
  struct Entry {
    TimeNs time;
    RequestId id;
  };

  std::deque<Entry> fifo_;
  std::unordered_set<RequestId> ever_pushed_;
};

}  // namespace amu
