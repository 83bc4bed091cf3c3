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
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amu/common.hpp"

namespace amu {

enum class EventKind : std::uint8_t { SubReqDispatch, SubReqComplete, GuestStep, Sample };

constexpr std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::SubReqDispatch: return "SubReqDispatch";
    case EventKind::SubReqComplete: return "SubReqComplete";
    case EventKind::GuestStep: return "GuestStep";
    case EventKind::Sample: return "Sample";
  }
  return "?";
}

// Receives one record per fired event.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(TimeNs time, std::uint64_t seq, EventKind kind, std::string_view details) = 0;
};

// `time<TAB>seq<TAB>kind<TAB>details`, one line per event.
class TsvTrace final : public TraceSink {
 public:
  explicit TsvTrace(std::ostream& os) : os_(os) {}

  void record(TimeNs time, std::uint64_t seq, EventKind kind, std::string_view details) override {
    os_ << time << '\t' << seq << '\t' << to_string(kind) << '\t' << details << '\n';
  }

 private:
  std::ostream& os_;
};

/// Deterministic event calendar. Events fire in (time, seq) order; seq is
/// assigned at schedule time so equal-time events keep insertion order.
class EventQueue {
 public:
  // The action fills `details` when tracing is on; it is null otherwise.
  using Action = std::function<void(std::string* details)>;

  TimeNs now() const noexcept { return now_; }

  std::uint64_t schedule(TimeNs time, EventKind kind, Action action) {
    if (time < now_) {
      fail(Errc::TimeRegression, "event at " + std::to_string(time) + " < now " + std::to_string(now_));
    }
    const std::uint64_t seq = next_seq_++;
    heap_.push_back(Entry{time, seq, kind, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    ++pending_[static_cast<std::size_t>(kind)];
    return seq;
  }

  bool empty() const noexcept { return heap_.empty(); }
  std::size_t pending() const noexcept { return heap_.size(); }
  std::size_t pending(EventKind k) const noexcept { return pending_[static_cast<std::size_t>(k)]; }
  TimeNs next_time() const noexcept { return heap_.empty() ? now_ : heap_.front().time; }

  // Fires every event with time <= t, then sets now to t.
  void run_until(TimeNs t) {
    if (t < now_) fail(Errc::TimeRegression, "run_until into the past");
    while (!heap_.empty() && heap_.front().time <= t) fire_next();
    now_ = t;
  }

  // Fires events until none remain.
  void run() {
    while (!heap_.empty()) fire_next();
  }

  std::uint64_t fired() const noexcept { return fired_; }

  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }
  bool tracing() const noexcept { return trace_ != nullptr; }

 private:
  struct Entry {
    TimeNs time;
    std::uint64_t seq;
    EventKind kind;
    Action action;
  };

  struct Later {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void fire_next() {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    --pending_[static_cast<std::size_t>(e.kind)];
    now_ = e.time;
    ++fired_;
    if (trace_) {
      std::string details;
      e.action(&details);
      trace_->record(e.time, e.seq, e.kind, details);
    } else {
      e.action(nullptr);
    }
  }

  std::vector<Entry> heap_;
  std::array<std::size_t, 4> pending_{};
  TimeNs now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t fired_ = 0;
  TraceSink* trace_ = nullptr;
};

}  // namespace amu
