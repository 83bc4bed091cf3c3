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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "model_check.hpp"
#include "support.hpp"

namespace {

using namespace amu;
using test::constant_node;
using test::make_config;
using test::uniform_node;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every audit in the suite goes through here so criterion 7 sees them all.
struct AuditLog {
  std::uint64_t traces = 0;
  std::uint64_t events = 0;
  std::vector<std::string> violations;

  void add(const std::string& label, const std::string& tsv, std::optional<std::uint64_t> max_outstanding = {}) {
    const AuditReport r = audit_trace(tsv, AuditOptions{max_outstanding});
    ++traces;
    events += r.events;
    for (const std::string& v : r.violations) violations.push_back(label + ": " + v);
  }
};

AuditLog g_audits;

// ---------------------------------------------------------------------------
// 1. Functional oracle

std::uint64_t mem_extent(const WorkloadSpec& spec) {
  const WorkloadParams p(spec);
  if (spec.name == "vector_kernel") {
    const VectorLayout v = vector_layout(p);
    return v.c + v.padded_bytes;
  }
  return p.u("base") + p.u("footprint");
}

// Random loads, stores and scratchpad writes over overlapping ranges, with
// the granularity register reprogrammed between issues.
class MixedGuest final : public Guest {
 public:
  MixedGuest(std::uint64_t seed, std::uint64_t mem_bytes, int ops) : rng_(seed), mem_bytes_(mem_bytes), ops_(ops) {}
  std::string_view name() const override { return "mixed"; }

  Yield step(GuestApi& api) override {
    while (api.getfin() != kNoRequest) --live_;
    const std::vector<std::uint32_t> grains = {8, 64, 256, 1024};
    while (issued_ < ops_) {
      const std::uint32_t g = grains[pick(grains.size())];
      const std::uint32_t count = 1 + static_cast<std::uint32_t>(pick(4));
      const std::uint64_t span = std::uint64_t{g} * count;
      api.write_macr(1, MemAccessConfig{g, static_cast<std::uint8_t>(pick(3)), count, 0});
      const std::uint64_t spm = pick(8192 - span + 1);
      // Each request stays inside one of the two equal nodes.
      const std::uint64_t half = mem_bytes_ / 2;
      const Addr mem = pick(2) * half + pick(half - span + 1);
      if (pick(5) == 0) {
        std::vector<std::byte> b(1 + pick(64));
        for (auto& x : b) x = static_cast<std::byte>(pick(256));
        api.spm_write(pick(8192 - b.size()), b);
      }
      const IssueResult r = pick(2) ? api.aload(spm, mem, 1) : api.astore(spm, mem, 1);
      if (r.error == IssueError::QueueFull) break;
      if (!r) throw std::runtime_error("mixed guest issue failed: " + std::string(to_string(r.error)));
      ++issued_;
      ++live_;
      if (pick(4) == 0) return Yield::after(pick(500));
    }
    if (issued_ == ops_ && live_ == 0) return Yield::done();
    return Yield::wait();
  }

 private:
  std::uint64_t pick(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
  std::uint64_t mem_bytes_;
  int ops_;
  int issued_ = 0;
  int live_ = 0;
};

bool mixed_matches_oracle(std::uint64_t seed) {
  const std::uint64_t mem = 64 * kKiB;
  const std::vector<NodeParams> nodes = {uniform_node(300, 3000, 0, 32 * kKiB), constant_node(500, 32 * kKiB, 32 * kKiB)};
  test::FunctionalOracle oracle(MachineConfig{}.spm_bytes, mem);
  Simulator sim(MachineConfig{}, nodes, seed);
  sim.set_observer(&oracle);
  std::mt19937_64 fill(seed);
  std::vector<std::byte> init(mem);
  for (auto& b : init) b = static_cast<std::byte>(fill());
  sim.host_write(0, init);
  sim.register_guest(std::make_unique<MixedGuest>(seed, mem, 400));
  sim.run();
  const auto spm = sim.machine().spm().bytes();
  return sim.guest_done(0) && std::equal(spm.begin(), spm.end(), oracle.spm().begin(), oracle.spm().end()) &&
         sim.memory().read(0, mem) == oracle.mem();
}

Verdict criterion_functional() {
  Verdict v;
  const std::vector<WorkloadSpec> specs = {
      {"seq_stream", {}},
      {"seq_stream", {{"footprint", 1 << 20}, {"granularity", 1024}, {"k", 32}}},
      {"gather", {{"count", 512}}},
      {"gather", {{"count", 256}, {"granularity", 256}, {"k", 64}}},
      {"pointer_chase", {{"length", 128}}},
      {"event_driven", {{"footprint", 1 << 18}, {"k", 16}}},
      {"event_driven", {{"footprint", 1 << 20}, {"granularity", 4096}, {"k", 8}}},
      {"coroutine_multiplex", {{"coroutines", 8}, {"length", 32}}},
      {"vector_kernel", {{"elements", 4096}}},
      {"vector_kernel", {{"elements", 1000}, {"granularity", 256}}},
  };
  int checked = 0;
  for (const WorkloadSpec& spec : specs) {
    for (std::uint64_t seed : {1, 2}) {
      RunConfig cfg;
      cfg.seed = seed;
      cfg.workload = spec;
      cfg.nodes = {uniform_node(300, 10000)};
      const std::uint64_t extent = mem_extent(spec);
      v.require(extent <= kMiB, spec.name + ": footprint above 1 MiB");
      const test::OracleVerdict o = test::check_against_oracle(cfg, extent);
      v.require(o.ok(), spec.name + " seed " + std::to_string(seed) + " differs from the zero-latency replay");
      ++checked;
    }
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    v.require(mixed_matches_oracle(seed), "mixed load/store guest seed " + std::to_string(seed));
    ++checked;
  }
  if (v.pass) v.detail = std::to_string(checked) + " runs byte-identical to the replay";
  return v;
}

// ---------------------------------------------------------------------------
// 2. Determinism

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict criterion_determinism() {
  Verdict v;
  const auto root = std::filesystem::temp_directory_path() / ("amu_accept_" + std::to_string(::getpid()));
  const std::vector<RunConfig> cfgs = {
      make_config("gather", {{"count", 2000}}, {uniform_node(300, 10000)}, 42),
      make_config("coroutine_multiplex", {}, {uniform_node(300, 10000)}, 7),
  };
  int i = 0;
  for (RunConfig cfg : cfgs) {
    cfg.sample_interval_ns = 5000;
    const auto a = root / (std::to_string(i) + "a");
    const auto b = root / (std::to_string(i) + "b");
    cmd_run(cfg, cfg.seed, a, true);
    cmd_run(cfg, cfg.seed, b, true);
    const std::string ma = slurp(a / "metrics.json"), ta = slurp(a / "trace.tsv");
    v.require(!ma.empty() && !ta.empty(), "missing artifacts");
    v.require(ma == slurp(b / "metrics.json"), cfg.workload.name + ": metrics.json differs");
    v.require(ta == slurp(b / "trace.tsv"), cfg.workload.name + ": trace.tsv differs");
    g_audits.add("determinism " + cfg.workload.name, ta);
    ++i;
  }
  std::filesystem::remove_all(root);
  if (v.pass) v.detail = "metrics.json and trace.tsv identical across repeated runs";
  return v;
}

// ---------------------------------------------------------------------------
// 3. getfin

Verdict criterion_getfin() {
  Verdict v;
  const test::ModelCheckResult r = test::check_getfin_exhaustive();
  v.require(r.cases > 0, "no cases explored");
  if (!r.violations.empty()) v.require(false, r.violations.front());
  if (v.pass) v.detail = std::to_string(r.cases) + " interleavings, each id returned once and never early";
  return v;
}

// ---------------------------------------------------------------------------
// 4. Little's law

Verdict criterion_littles_law() {
  Verdict v;
  std::string worst;
  double max_residual = 0;
  for (std::int64_t k : {4, 16, 64}) {
    RunConfig cfg = make_config("event_driven", {{"k", k}, {"footprint", 1 << 20}, {"requests", 40000}},
                                {uniform_node(300, 10000)}, 11);
    cfg.warmup_ns = 200000;
    const MetricsRecord m = run_amu(cfg, cfg.seed);
    const double lhs = m.mean_inflight;
    const double rhs = m.throughput_req_per_ns * m.latency_mean_ns;
    const double residual = std::abs(lhs - rhs) / lhs;
    max_residual = std::max(max_residual, residual);
    v.require(residual <= 0.02, "K=" + std::to_string(k) + " residual " + fmt("%.4f", residual));
    v.require(std::abs(residual - m.littles_law_residual) < 1e-9, "reported residual disagrees");
  }
  if (v.pass) v.detail = "max residual " + fmt("%.4f", max_residual) + " over K in {4, 16, 64}";
  return v;
}

// ---------------------------------------------------------------------------
// 5. Closed-form bandwidth

Verdict criterion_closed_form() {
  Verdict v;
  const TimeNs L = 1000;
  double worst = 0;
  auto check = [&](const std::string& what, double got, double want, double tol) {
    const double err = std::abs(got - want) / want;
    worst = std::max(worst, err / tol);
    v.require(err <= tol, what + ": " + fmt("%.5f", got) + " vs " + fmt("%.5f", want));
  };
  for (std::int64_t g : {64, 1024}) {
    for (std::int64_t k : {4, 16, 64}) {
      if (g * k * 4 > 256 * 1024) continue;
      RunConfig cfg = make_config("event_driven", {{"k", k}, {"granularity", g}, {"requests", 4096},
                                                   {"footprint", 4096 * g}},
                                  {constant_node(L)});
      const double bw_link = cfg.nodes[0].bandwidth_bytes_per_ns;
      const double issue = static_cast<double>(cfg.machine.issue_cost_ns);
      const double want = std::min(static_cast<double>(k * g) / (L + g / bw_link + issue), bw_link);
      check("amu K=" + std::to_string(k) + " g=" + std::to_string(g), run_amu(cfg, 1).achieved_bw_bytes_per_ns, want,
            0.05);
    }
  }
  Trace loads;
  for (Addr i = 0; i < 4000; ++i) loads.push_back(TraceOp::load(i * 64));
  for (std::uint32_t mshr : {1u, 4u, 10u, 32u}) {
    CoreParams p;
    p.mshr_entries = mshr;
    const double x = static_cast<double>(p.cycle_ns);
    check("ooo M=" + std::to_string(mshr), run_windowed_ooo(loads, {constant_node(L)}, p).achieved_bw_bytes_per_ns,
          mshr * 64.0 / (L + x), 0.05);
  }
  for (TimeNs lat : {TimeNs{300}, L, TimeNs{10000}}) {
    CoreParams p;
    check("blocking L=" + std::to_string(lat), run_blocking(loads, {constant_node(lat)}, p).achieved_bw_bytes_per_ns,
          64.0 / (static_cast<double>(lat) + static_cast<double>(p.cycle_ns)), 0.01);
  }
  if (v.pass) v.detail = "worst error at " + fmt("%.1f", 100 * worst) + "% of its tolerance";
  return v;
}

// ---------------------------------------------------------------------------
// 6. System comparison under Uniform(300, 10000)

struct Compared {
  std::map<std::string, double> bw;
  double seconds = 0;
};

Compared compare(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = cmd_compare(cfg, cfg.seed);
  Compared c;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const TableRow& r : rows) c.bw[r.system] = r.metrics.achieved_bw_bytes_per_ns;
  return c;
}

Verdict criterion_compare() {
  Verdict v;
  const std::vector<NodeParams> nodes = {uniform_node(300, 10000)};
  double slowest = 0;

  const Compared g64 = compare(make_config("gather", {{"k", 64}, {"granularity", 64}, {"count", 4096}}, nodes, 3));
  const Compared g1k = compare(make_config("gather", {{"k", 64}, {"granularity", 1024}, {"count", 4096},
                                                      {"footprint", 4 << 20}},
                                           nodes, 3));
  const Compared ev = compare(make_config("event_driven", {{"k", 64}, {"requests", 4096}}, nodes, 3));
  const Compared chase = compare(make_config("pointer_chase", {{"length", 512}}, nodes, 3));
  for (const Compared* c : {&g64, &g1k, &ev, &chase}) slowest = std::max(slowest, c->seconds);

  const double ratio = g64.bw.at("amu") / g64.bw.at("blocking");
  v.require(ratio >= 10.0, "amu/blocking gather ratio " + fmt("%.2f", ratio));
  v.require(ev.bw.at("amu") >= 10.0 * ev.bw.at("blocking"), "amu/blocking event_driven ratio below 10");
  v.require(g1k.bw.at("amu") >= g64.bw.at("amu"), "g=1024 below g=64");
  double lo = chase.bw.begin()->second, hi = lo;
  for (auto [sys, bw] : chase.bw) lo = std::min(lo, bw), hi = std::max(hi, bw);
  const double spread = (hi - lo) / hi;
  v.require(spread < 0.10, "pointer_chase spread " + fmt("%.4f", spread));
  v.require(slowest <= 10.0, "comparison took " + fmt("%.2f", slowest) + " s");
  if (v.pass) {
    v.detail = "amu/blocking " + fmt("%.1f", ratio) + "x, g=1024 " + fmt("%.3f", g1k.bw.at("amu")) + " vs g=64 " +
               fmt("%.3f", g64.bw.at("amu")) + " B/ns, chase spread " + fmt("%.2f", 100 * spread) +
               "%, slowest " + fmt("%.2f", slowest) + " s";
  }
  return v;
}

// ---------------------------------------------------------------------------
// 7. Trace audits

Verdict criterion_audits() {
  Verdict v;
  const std::vector<NodeParams> nodes = {uniform_node(300, 10000, 0, 1 << 20),
                                         constant_node(700, 1 << 20, 1 << 20, 16.0, 8)};
  for (const char* name : {"seq_stream", "gather", "pointer_chase", "event_driven", "coroutine_multiplex",
                           "vector_kernel"}) {
    RunConfig cfg = make_config(name, {}, nodes, 5);
    cfg.sample_interval_ns = 2000;
    test::StringTrace t;
    run_amu(cfg, cfg.seed, &t);
    g_audits.add(std::string("amu ") + name, t.text(), cfg.machine.max_outstanding);
  }
  for (const char* name : {"seq_stream", "gather", "event_driven"}) {
    for (std::int64_t k : {1, 7, 32}) {
      RunConfig cfg = make_config(name, {{"k", k}}, {uniform_node(300, 10000)}, 6);
      test::StringTrace t;
      run_amu(cfg, cfg.seed, &t);
      g_audits.add(std::string("amu ") + name + " k=" + std::to_string(k), t.text(), static_cast<std::uint64_t>(k));
    }
  }
  for (const char* system : {"blocking", "ooo"}) {
    for (const char* name : {"gather", "pointer_chase"}) {
      RunConfig cfg = make_config(name, {}, nodes, 8);
      cfg.baseline.mshr_entries = 6;
      cfg.baseline.rob_entries = 24;
      cfg.sample_interval_ns = 3000;
      test::StringTrace t;
      run_baseline(system, cfg, cfg.seed, &t);
      g_audits.add(std::string(system) + " " + name, t.text());
    }
  }
  v.require(g_audits.events > 0, "no events audited");
  if (!g_audits.violations.empty()) {
    v.require(false, std::to_string(g_audits.violations.size()) + " violations, first: " + g_audits.violations.front());
  }
  if (v.pass) {
    v.detail = std::to_string(g_audits.traces) + " traces, " + std::to_string(g_audits.events) + " events, 0 violations";
  }
  return v;
}

// ---------------------------------------------------------------------------
// 8. Pattern property

Verdict criterion_patterns() {
  Verdict v;
  std::mt19937_64 rng(2026);
  auto draw = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  const std::uint32_t grains[] = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  const int cases = 20000;
  for (int i = 0; i < cases && v.pass; ++i) {
    const std::uint32_t g = grains[draw(0, std::size(grains) - 1)];
    const std::uint32_t count = static_cast<std::uint32_t>(draw(1, 64));
    const Addr mem = draw(0, 1ull << 40);
    const std::uint64_t spm = draw(0, 1 << 20);
    const MemAccessConfig cfg{g, 0, 1, 0};

    const AccessPattern stream{PatternKind::Stream, mem, spm, 0, count};
    const AccessPattern stride{PatternKind::Stride, mem, spm, static_cast<std::int64_t>(g), count};
    const ExpandedPlan a = expand_pattern(stream, cfg);
    const ExpandedPlan b = expand_pattern(stride, cfg);
    bool same = a.size() == count && b.size() == count;
    for (std::uint32_t j = 0; same && j < count; ++j) {
      // Element j covers bytes [mem + j*g, mem + (j+1)*g) and lands at spm + j*g.
      const Addr want_mem = mem + std::uint64_t{j} * g;
      const std::uint64_t want_spm = spm + std::uint64_t{j} * g;
      same = a[j].mem_addr == want_mem && a[j].spm_addr == want_spm && a[j].size_bytes == g && b[j].mem_addr == want_mem &&
             b[j].spm_addr == want_spm && b[j].size_bytes == g;
    }
    v.require(same, "case " + std::to_string(i) + " g=" + std::to_string(g) + " count=" + std::to_string(count));
  }
  if (v.pass) v.detail = std::to_string(cases) + " random cases, Stream == Stride(g) == element-wise oracle";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*run)();
  };
  // Criterion 7 audits every trace gathered so far, so it runs after 2.
  const Criterion criteria[] = {
      {"functional oracle", criterion_functional}, {"determinism", criterion_determinism},
      {"getfin exactly-once", criterion_getfin},   {"little's law", criterion_littles_law},
      {"closed-form bandwidth", criterion_closed_form}, {"system comparison", criterion_compare},
      {"trace audits", criterion_audits},          {"pattern equivalence", criterion_patterns},
  };
  int failed = 0;
  int n = 0;
  for (const Criterion& c : criteria) {
    ++n;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", n, c.name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
