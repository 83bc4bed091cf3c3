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

#include "amu/common.hpp"
#include "amu/spm.hpp"
#include "amu/registers.hpp"
#include "amu/request.hpp"
#include "amu/machine_state.hpp"
#include "amu/pattern.hpp"
#include "amu/latency.hpp"
#include "amu/event_queue.hpp"
#include "amu/far_memory.hpp"
#include "amu/metrics.hpp"
#include "amu/isa.hpp"
#include "amu/engine.hpp"
#include "amu/baseline.hpp"
#include "amu/workloads.hpp"
#include "amu/audit.hpp"
#include "amu/config.hpp"
#include "amu/harness.hpp"
