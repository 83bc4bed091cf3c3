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

// amu-sim run|compare|sweep --config <path> [--trace] [--out <dir>] [--seed <u64>]
//
// Exit status: 0 success, 1 configuration error, 2 simulation error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "amu/amu.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSim = 2;

struct Options {
  std::string config;
  bool trace = false;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> axis;
  std::optional<std::vector<double>> values;
};

void write_csv(const std::filesystem::path& path, const std::vector<amu::TableRow>& rows) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) amu::fail(amu::Errc::InvariantViolation, "cannot write " + path.string());
  amu::write_table(out, rows);
  amu::write_table(std::cout, rows);
}

int dispatch(const std::string& command, const Options& o) {
  const amu::RunConfig cfg = amu::load_config(o.config);
  const std::uint64_t seed = o.seed.value_or(cfg.seed);
  const std::filesystem::path out = o.out;
  if (command == "run") {
    amu::cmd_run(cfg, seed, out, o.trace);
    std::cout << "wrote " << (out / "metrics.json").string() << (o.trace ? " and trace.tsv" : "") << '\n';
  } else if (command == "compare") {
    write_csv(out / "compare.csv", amu::cmd_compare(cfg, seed));
  } else {
    amu::SweepSpec sweep = cfg.sweep.value_or(amu::SweepSpec{});
    if (o.axis) sweep.axis = *o.axis;
    if (o.values) sweep.values = *o.values;
    if (sweep.axis.empty()) amu::fail(amu::Errc::BadAxis, "sweep needs an axis (config 'sweep.axis' or --axis)");
    write_csv(out / "sweep.csv", amu::cmd_sweep(cfg, sweep, seed));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous memory access unit simulator"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->required();
    sub->add_flag("--trace", o.trace, "Write trace.tsv (run only)");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "Override the configured seed");
  };
  add_common(app.add_subcommand("run", "Run one AMU simulation"));
  add_common(app.add_subcommand("compare", "Blocking vs OoO vs AMU on one workload"));
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one axis: k, granularity, mshr, latency_scale");
  add_common(sweep);
  sweep->add_option("--axis", o.axis, "Override the sweep axis");
  sweep->add_option("--values", o.values, "Override the sweep values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), o);
  } catch (const amu::Error& e) {
    std::cerr << "amu-sim: " << e.what() << '\n';
    return amu::is_config_error(e.code()) ? kExitConfig : kExitSim;
  } catch (const std::exception& e) {
    std::cerr << "amu-sim: " << e.what() << '\n';
    return kExitSim;
  }
}
