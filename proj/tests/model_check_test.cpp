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

#include "model_check.hpp"

namespace amu {
namespace {

TEST(GetfinModel, MachineInterleavingsUpToThree) {
  for (int n = 1; n <= 3; ++n) {
    const test::ModelCheckResult r = test::MachineModelChecker(n, 2, 2).run();
    EXPECT_GT(r.cases, 0u);
    EXPECT_TRUE(r.violations.empty()) << r.violations.front();
  }
}

TEST(GetfinModel, EngineInterleavingsUpToThree) {
  const test::ModelCheckResult r = test::check_engine_interleavings();
  EXPECT_EQ(r.cases, (3u + 9u + 27u) * 3u * 4u);
  EXPECT_TRUE(r.violations.empty()) << r.violations.front();
}

}  // namespace
}  // namespace amu
