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
#include <gtest/gtest.h>

#include <cmath>

#include "amu/event_queue.hpp"
#include "amu/latency.hpp"

namespace amu {
namespace {

TEST(Latency, Constant) {
  Rng rng(1);
  EXPECT_EQ(sample_latency(LatencyDistribution::constant(300), rng), 300u);
}

TEST(Latency, UniformBoundsAndMean) {
  Rng rng(42);
  const auto d = LatencyDistribution::uniform(300, 10000);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const TimeNs s = sample_latency(d, rng);
    ASSERT_GE(s, 300u);
    ASSERT_LE(s, 10000u);
    sum += static_cast<double>(s);
  }
  EXPECT_NEAR(sum / n, 5150.0, 0.02 * 5150.0);
}

TEST(Latency, BadParams) {
  Rng rng(1);
  EXPECT_THROW(sample_latency(LatencyDistribution::uniform(500, 400), rng), Error);
  EXPECT_THROW(sample_latency(LatencyDistribution::lognormal(1.0, -1.0, 0, 10), rng), Error);
  EXPECT_THROW(sample_latency(LatencyDistribution::lognormal(1.0, 1.0, 10, 0), rng), Error);
  auto bad = LatencyDistribution::bimodal(1.5, LatencyDistribution::constant(1), LatencyDistribution::constant(2));
  EXPECT_THROW(sample_latency(bad, rng), Error);
}

TEST(Latency, LogNormalRespectsClamps) {
  Rng rng(3);
  const auto d = LatencyDistribution::lognormal(std::log(1000.0), 1.5, 300, 10000);
  for (int i = 0; i < 20000; ++i) {
    const TimeNs s = sample_latency(d, rng);
    ASSERT_GE(s, 300u);
    ASSERT_LE(s, 10000u);
  }
  EXPECT_EQ(sample_latency(LatencyDistribution::lognormal(std::log(500.0), 0.0, 0, 100000), rng), 500u);
}

TEST(Latency, BimodalMixesModes) {
  Rng rng(9);
  const auto d = LatencyDistribution::bimodal(0.25, LatencyDistribution::constant(100), LatencyDistribution::constant(5000));
  int high = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const TimeNs s = sample_latency(d, rng);
    ASSERT_TRUE(s == 100 || s == 5000);
    high += s == 5000;
  }
  EXPECT_NEAR(static_cast<double>(high) / n, 0.25, 0.01);
  EXPECT_EQ(d.min_value(), 100u);
  EXPECT_EQ(d.max_value(), 5000u);
}

TEST(Latency, PureInRngState) {
  const auto d = LatencyDistribution::uniform(1, 1000000);
  Rng a(77), b(77);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample_latency(d, a), sample_latency(d, b));
}

TEST(Latency, Scaling) {
  const auto d = LatencyDistribution::uniform(300, 10000).scaled(2.0);
  EXPECT_EQ(d.min_value(), 600u);
  EXPECT_EQ(d.max_value(), 20000u);
  EXPECT_THROW(LatencyDistribution::constant(1).scaled(0.0), Error);
}

// ---------------------------------------------------------------------------

TEST(EventQueue, SameTimeFiresInSequenceOrder) {
  EventQueue q;
  std::vector<int> order;
  q.schedule(5, EventKind::Sample, [&](std::string*) { order.push_back(2); });
  q.schedule(3, EventKind::Sample, [&](std::string*) { order.push_back(1); });
  q.schedule(5, EventKind::Sample, [&](std::string*) { order.push_back(3); });
  q.schedule(0, EventKind::Sample, [&](std::string*) { order.push_back(0); });
  q.run();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(q.now(), 5u);
}

TEST(EventQueue, ScheduleAtNowFiresBeforeLater) {
  EventQueue q;
  std::vector<int> order;
  q.schedule(10, EventKind::Sample, [&](std::string*) {
    order.push_back(1);
    q.schedule(q.now(), EventKind::Sample, [&](std::string*) { order.push_back(2); });
  });
  q.schedule(11, EventKind::Sample, [&](std::string*) { order.push_back(3); });
  q.run();
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(EventQueue, TimeRegression) {
  EventQueue q;
  q.run_until(100);
  EXPECT_THROW(q.schedule(99, EventKind::Sample, [](std::string*) {}), Error);
  EXPECT_THROW(q.run_until(50), Error);
}

TEST(EventQueue, RunUntil) {
  EventQueue q;
  q.run_until(0);
  EXPECT_EQ(q.now(), 0u);
  q.run_until(40);
  EXPECT_EQ(q.now(), 40u);
  bool fired = false, late = false;
  q.schedule(99, EventKind::Sample, [&](std::string*) { fired = true; });
  q.schedule(101, EventKind::Sample, [&](std::string*) { late = true; });
  q.run_until(100);
  EXPECT_TRUE(fired);
  EXPECT_FALSE(late);
  EXPECT_EQ(q.now(), 100u);
  EXPECT_EQ(q.pending(), 1u);
}

TEST(EventQueue, TraceLines) {
  std::ostringstream os;
  TsvTrace trace(os);
  EventQueue q;
  q.set_trace(&trace);
  q.schedule(7, EventKind::GuestStep, [](std::string* d) { *d = "a=1"; });
  q.run();
  EXPECT_EQ(os.str(), "7\t0\tGuestStep\ta=1\n");
}

}  // namespace
}  // namespace amu
