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

// Acceptance run: one PASS/FAIL line per criterion, at fixed seeds. Exits
// nonzero if any criterion fails.

#include <cstdio>
#include <sstream>

#include "qmalab/experiments.hpp"

using namespace qmalab;
using namespace qmalab::exp;

namespace {

constexpr std::uint64_t kSeed = 20261015;

RunConfig config(nlohmann::json j) {
  j["seed"] = kSeed;
  return RunConfig::from_json(j);
}

std::string fmt(const Metric& m) {
  std::ostringstream s;
  s << m.name << "=" << m.value;
  if (m.tolerance) s << " (" << m.tolerance->op << " " << m.tolerance->bound << ")";
  return s.str();
}

int failures = 0;

void line(int id, const std::string& title, const Report& r, const std::vector<std::string>& names) {
  bool ok = true;
  std::string detail;
  for (const auto& n : names) {
    const auto& m = r.metric(n);
    ok = ok && m.pass();
    if (!detail.empty()) detail += "; ";
    detail += fmt(m);
  }
  if (!ok) ++failures;
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  try {
    const auto csa = csa_correctness(config({{"keys_per_n", 3}, {"codespace_keys", 20}}));
    line(1, "CSA correctness, exhaustive (lambda=1, n=1,2)", csa,
         {"correctness_max_deviation", "correctness_runtime_s"});
    line(2, "Codespace identity, 20 keys", csa, {"codespace_max_deviation", "codespace_runtime_s"});

    const auto pv = permver_bench(config({{"k", 6}, {"trials", 10000}}));
    line(3, "Permuting verifier completeness and soundness trend (k=6)", pv,
         {"accept_freq_yes", "accept_freq_no", "trend_q0.2500", "trend_q0.5000", "trend_q0.7500",
          "no_instance_best_basis_freq", "runtime_s"});

    const auto ati = ati_check(config({{"trials", 1000}, {"gamma", 0.2}}));
    line(4, "Exact ATI contract", ati,
         {"projectivity_agreement", "global_rejection_accept_rate", "min_accepted_eigenvalue",
          "min_accepted_residual_expectation", "runtime_s"});

    const auto e2e = e2e_complete(config({{"runs", 200}}));
    line(5, "End-to-end completeness, reference config", e2e, {"accept_rate", "runtime_s"});
    line(6, "Post-verified extraction", e2e,
         {"extraction_success_rate", "contract_violations", "min_per_copy_acceptance"});

    const auto zk = e2e_simulate(config({{"runs", 200}}));
    line(7, "Simulated proofs verify; transcripts witness-independent", zk,
         {"sim_verify_rate", "chi2_p_open_set_size", "chi2_p_commitment_bytes"});

    const auto jl = jllw_correctness(config({{"circuits", 50}, {"max_depth", 4}}));
    line(8, "JLLW functional correctness and pad tamper detection", jl,
         {"eval_agreement_rate", "tamper_detection_rate", "runtime_s"});

    const auto cc = cutchoose_detect(config({{"runs", 1000}, {"lambda_cc", 8}, {"corrupt", 3}}));
    line(9, "Cut-and-choose detection, 3 of 8 corrupted", cc, {"reject_rate"});

    const auto bd = bound_check(config({{"bound_trials", 100000}}));
    line(10, "Bernstein bounds vs Monte Carlo; recommended_k", bd,
         {"bound_violations", "recommended_k_n2_gap05_j2"});

    const auto np = nizk_np_check(config({{"runs", 1000}}));
    line(11, "NIZK for NP: completeness, extraction, swap rejection", np,
         {"completeness_rate", "extraction_rate", "swap_rejection_rate"});
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
