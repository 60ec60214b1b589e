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

// Provably-correct obfuscation by cut-and-choose. The obfuscator commits to
// lambda_cc key bundles, derives a challenge from the QPrO on instance 0,
// opens the challenged bundles and obfuscates C under each unopened one,
// proving (NIZK for NP) that every unopened obfuscation is of one circuit C
// with phi(C) = 1. Evaluation takes the majority over unopened bundles.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmalab/jllw.hpp"
#include "qmalab/nizknp.hpp"

namespace qmalab::obf {

enum class Backend { Ideal, Jllw };
Backend parse_backend(const std::string& s);
std::string backend_name(Backend b);

// The global oracles shared by every party of one experiment.
struct OracleWorld {
  std::shared_ptr<IdealRegistry> ideal;
  std::shared_ptr<QPrOSim> qpro;
  std::shared_ptr<nizk::TranscriptOracle> nizk;
  static OracleWorld create(std::uint64_t seed, int key_bits = 64);
};

struct PcParams {
  int lambda_cc = 8;
  Backend backend = Backend::Ideal;
};

struct PcPublicParams {
  nizk::Crs crs;
  std::uint64_t h_star = 0;
  nlohmann::json to_json() const;
};

struct PcTrapdoor {
  Bytes sk;         // witness extraction
  Bytes sim_token;  // empty unless produced by pc_simgen
};

// Predicate on circuits; the id is bound into the NP statement.
struct Phi {
  std::string id;
  std::function<bool(const CircuitDesc&)> test;
};

struct Opening {
  std::vector<std::uint64_t> keys;
  Bytes r;
};

struct PcObfuscation {
  Backend backend = Backend::Ideal;
  int lambda_cc = 0;
  int arity = 0;
  int out_width = 0;
  std::vector<Bytes> commitments;                   // per bundle t
  std::vector<std::vector<std::uint64_t>> handles;  // per bundle, D*B handles
  Bytes chal;
  std::map<int, Bytes> unopened;   // t -> obfuscated program
  std::map<int, Opening> opened;   // t -> (keys, commitment randomness)
  nizk::NpProof proof;

  nlohmann::json to_json() const;
  static PcObfuscation from_json(const nlohmann::json& j);
};

bool challenge_bit(const Bytes& chal, int t);

PcPublicParams pc_setup(const OracleWorld& w, Rng& rng);
std::pair<PcPublicParams, PcTrapdoor> pc_ext0(const OracleWorld& w, Rng& rng);
std::pair<PcPublicParams, PcTrapdoor> pc_simgen(const OracleWorld& w, Rng& rng);

struct PcOptions {
  std::set<int> corrupt;  // bundles whose first handle is generated from a wrong key
};

// Throws NotAWitness when phi(C) = 0.
PcObfuscation pc_obfuscate(const OracleWorld& w, const PcPublicParams& pp, const Phi& phi, const CircuitDesc& c,
                           const PcParams& params, Rng& rng, const PcOptions& opts = {});
// Simulated obfuscation: the NP proof is simulated, so phi is not checked.
PcObfuscation pc_simobf(const OracleWorld& w, const PcPublicParams& pp, const PcTrapdoor& td, const Phi& phi,
                        const CircuitDesc& c, const PcParams& params, Rng& rng);

struct PcReport {
  bool ok = true;
  std::vector<std::string> diagnostics;
};
PcReport pc_verify(const OracleWorld& w, const PcPublicParams& pp, const Phi& phi, const PcObfuscation& o);

// Majority over unopened bundles; ties go to the smallest t. Throws if
// every bundle was opened.
BitVector pc_eval(const OracleWorld& w, const PcObfuscation& o, const BitVector& x);
// Per-bundle evaluation (for callers that batch queries).
BitVector pc_eval_bundle(const OracleWorld& w, const PcObfuscation& o, int t, const BitVector& x);

// Runs pc_verify first; extraction is not attempted on rejected input.
CircuitDesc pc_extract(const OracleWorld& w, const PcPublicParams& pp, const PcTrapdoor& td, const Phi& phi,
                       const PcObfuscation& o);

}  // namespace qmalab::obf
