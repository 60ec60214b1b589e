// Copyright 2026 The qmalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmalab command-line driver.
//
//   qmalab run --scenario <name> --config <path> --out <path>
//   qmalab list-scenarios
//   qmalab permver bench [--k K] [--trials N] [--seed S] [--config path]
//
// Exit status: 0 when every asserted tolerance holds, 1 when a tolerance
// fails, 2 on malformed input or an unknown scenario.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmalab/experiments.hpp"

using namespace qmalab;

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw MalformedInput("invalid JSON in " + path);
  return j;
}

// Instance paths inside a config are relative to the config file.
nlohmann::json read_config(const std::string& path) {
  auto j = read_json(path);
  if (!j.is_object()) return j;
  const auto dir = std::filesystem::path(path).parent_path();
  for (const char* key : {"instance", "alt_instance"})
    if (j.contains(key) && j[key].is_string()) {
      const std::filesystem::path p = j[key].get<std::string>();
      if (p.is_relative()) j[key] = (dir / p).string();
    }
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw MalformedInput("cannot write " + path);
  out << j.dump(2) << "\n";
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const MalformedInput*>(&e)) return "MalformedInput";
  if (dynamic_cast<const SizingError*>(&e)) return "SizingError";
  if (dynamic_cast<const IntegrityError*>(&e)) return "IntegrityError";
  if (dynamic_cast<const ExtractionError*>(&e)) return "ExtractionError";
  if (dynamic_cast<const UnsupportedMode*>(&e)) return "UnsupportedMode";
  if (dynamic_cast<const NotAWitness*>(&e)) return "NotAWitness";
  return "Error";
}

int fail(const std::exception& e, const std::string& out) {
  const nlohmann::json err{{"error", {{"type", error_type(e)}, {"message", e.what()}}}, {"passed", false}};
  std::cerr << err.dump() << "\n";
  if (!out.empty() && out != "-") {
    try {
      write_json(out, err);
    } catch (...) {
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmalab: NIZK arguments of quantum knowledge, desk-scale laboratory"};
  app.require_subcommand(1);

  std::string scenario, config_path, out_path;
  auto* run = app.add_subcommand("run", "Run a scenario and write its JSON report");
  run->add_option("--scenario", scenario, "Scenario name")->required();
  run->add_option("--config", config_path, "Config JSON (must contain \"seed\")")->required();
  run->add_option("--out", out_path, "Report path ('-' for stdout)")->default_val("-");

  auto* list = app.add_subcommand("list-scenarios", "Print the scenario names");

  auto* pv = app.add_subcommand("permver", "Permuting verifier tools");
  pv->require_subcommand(1);
  auto* bench = pv->add_subcommand("bench", "Monte-Carlo completeness/soundness bench");
  int k = 6, trials = 10000;
  std::uint64_t seed = 1;
  std::string bench_config, bench_out = "-";
  bench->add_option("--k", k, "Repetition count")->default_val(6);
  bench->add_option("--trials", trials, "Trials per witness")->default_val(10000);
  bench->add_option("--seed", seed, "Seed")->default_val(1);
  bench->add_option("--config", bench_config, "Optional config JSON (instance, a_prime, b_prime)");
  bench->add_option("--out", bench_out, "Output path ('-' for stdout)")->default_val("-");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    for (const auto& n : exp::scenario_names()) std::cout << n << "\n";
    return 0;
  }
  if (*run) {
    try {
      const auto report = exp::run_scenario(scenario, read_config(config_path));
      write_json(out_path, report.to_json());
      for (const auto& m : report.metrics)
        if (!m.pass())
          std::cerr << "FAIL " << m.name << " = " << m.value << " (want " << m.tolerance->op << " "
                    << m.tolerance->bound << ")\n";
      std::cerr << report.scenario << ": " << (report.passed() ? "passed" : "FAILED") << " in "
                << report.wall_clock_s << " s\n";
      return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
      return fail(e, out_path);
    }
  }
  if (*bench) {
    try {
      nlohmann::json cfg = bench_config.empty() ? nlohmann::json::object() : read_config(bench_config);
      if (!cfg.contains("seed")) cfg["seed"] = seed;
      if (!cfg.contains("k")) cfg["k"] = k;
      if (!cfg.contains("trials")) cfg["trials"] = trials;
      const auto report = exp::permver_bench(exp::RunConfig::from_json(cfg));
      write_json(bench_out, exp::permver_bench_summary(report));
      return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
      return fail(e, bench_out);
    }
  }
  return 0;
}
