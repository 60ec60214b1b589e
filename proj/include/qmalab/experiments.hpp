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

// Monte-Carlo experiment harness: named scenarios, shared statistics, and
// JSON run reports. Every randomized trial derives its own stream from the
// config seed, so reports are reproducible regardless of worker count.

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qmalab/common.hpp"

namespace qmalab::exp {

struct Tolerance {
  std::string op;  // "<=", ">=", "<", ">", "=="
  double bound;
  bool holds(double v) const;
};

struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<Tolerance> tolerance;  // empty: informational
  nlohmann::json extra = nlohmann::json::object();
  bool pass() const { return !tolerance || tolerance->holds(value); }
};

struct Report {
  std::string scenario;
  nlohmann::json config;
  std::vector<Metric> metrics;
  nlohmann::json details = nlohmann::json::object();
  double wall_clock_s = 0.0;

  bool passed() const;
  Metric& add(std::string name, double value, std::optional<Tolerance> tol = std::nullopt);
  const Metric& metric(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Reads "seed" (mandatory) and common keys.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
  nlohmann::json raw;
  static RunConfig from_json(const nlohmann::json& j);
  int get_int(const char* key, int def) const;
  double get_double(const char* key, double def) const;
};

// Independent stream for trial i of a seeded run.
Rng trial_rng(std::uint64_t seed, std::uint64_t i);

// Runs fn(i) for i in [0, n) over a worker pool; results are in index order.
template <class T>
std::vector<T> parallel_trials(std::size_t n, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::size_t workers = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lk(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

struct Interval {
  double lo, hi;
};
// Wilson score interval for k successes in n trials.
Interval wilson(std::size_t k, std::size_t n, double z = 1.96);
// Two-sample chi-square homogeneity test on count histograms over the same
// categories; sparse categories are pooled. Returns the p-value.
double chi2_two_sample_pvalue(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

// Scenarios.
const std::vector<std::string>& scenario_names();
Report run_scenario(const std::string& name, const nlohmann::json& config);

Report csa_correctness(const RunConfig& cfg);
Report permver_bench(const RunConfig& cfg);
Report bound_check(const RunConfig& cfg);
Report ati_check(const RunConfig& cfg);
Report e2e_complete(const RunConfig& cfg);  // also reports extraction
Report e2e_simulate(const RunConfig& cfg);
Report jllw_correctness(const RunConfig& cfg);
Report cutchoose_detect(const RunConfig& cfg);
Report distinguish_game(const RunConfig& cfg);
Report nizk_np_check(const RunConfig& cfg);

// The compact JSON of `qmalab permver bench`.
nlohmann::json permver_bench_summary(const Report& r);

}  // namespace qmalab::exp
