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

// NIZK argument of quantum knowledge for QMA. The prover encodes len copies
// of the witness under a coset-state key k and publishes a provably-correct
// obfuscation of Ver_k || M_k; the verifier queries that obfuscation to
// build the mixture POVM {P_r} and runs the threshold test on the state.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmalab/ati.hpp"
#include "qmalab/csa.hpp"
#include "qmalab/pcobf.hpp"
#include "qmalab/permver.hpp"

namespace qmalab::protocol {

using sim::StateVector;

inline constexpr int kMaxProofQubits = 14;

struct Config {
  int k = 2;
  int lambda_code = 1;
  double gamma = 0.2;
  double gamma_prime = 0.3;
  int lambda_cc = 8;
  obf::Backend backend = obf::Backend::Ideal;
  int prg_seed_bits = 8;
  permver::Thresholds thresholds{1.0, 0.5};

  // Validates 0 < gamma < gamma' < 1 and the remaining ranges.
  void validate() const;
  // ATI parameter: the threshold test is ATI_{1 - gamma'}.
  double ati_gamma() const { return 1.0 - gamma_prime; }
  nlohmann::json to_json() const;
  static Config from_json(const nlohmann::json& j);
};

// G: expands a seed into len pseudorandom bytes.
Bytes prg_expand(const Bytes& seed, std::size_t len);
// Permutation of the measurement list selected by seed r.
std::vector<std::size_t> permutation_for_seed(std::size_t len, std::uint64_t r);

// Input layout of Ver||M: [sel][arg: max(m, seed_bits)][physical state].
// sel = 0: Ver_{k,theta}(s) with theta = arg[0..m).
// sel = 1: Dec_{k, theta_r, 1 - f_r}(s) for the measurement chosen by
//          r = arg[0..seed_bits); the null variant outputs 0 instead.
circ::CircuitDesc m_circuit(const csa::CSAKey& key, const permver::PermutingVerifier& v, int seed_bits);
circ::CircuitDesc null_m_circuit(const csa::CSAKey& key, const permver::PermutingVerifier& v, int seed_bits);
// Key embedded in either circuit kind.
std::optional<csa::CSAKey> circuit_key(const circ::CircuitDesc& c);
// phi(C) = 1 iff C = Ver_{k'} || M_{k'} for some k' and this verifier.
obf::Phi phi_for(const permver::PermutingVerifier& v, const Config& cfg);

permver::PermutingVerifier make_verifier(const zx::HamiltonianInstance& h, const Config& cfg);

struct Crs {
  obf::PcPublicParams pp;
};

struct Proof {
  StateVector state;
  obf::PcObfuscation obf;
  nlohmann::json to_json() const;
  static Proof from_json(const nlohmann::json& j);
};

Crs setup(const obf::OracleWorld& w, Rng& rng);
std::pair<Crs, obf::PcTrapdoor> ext0(const obf::OracleWorld& w, Rng& rng);

// `witness_copy` is one l-qubit copy; the proof carries len copies.
Proof prove(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h, const StateVector& witness_copy,
            const Config& cfg, Rng& rng);
// Same, for an arbitrary len*l-qubit witness.
Proof prove_entangled(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h,
                      const StateVector& witness, const Config& cfg, Rng& rng);

struct VerifyOutcome {
  bool accept = false;
  double prob_accept = 0.0;  // Born weight on the accepting side
  double eigenvalue = 0.0;   // sampled eigenvalue
  std::vector<std::string> diagnostics;
  std::optional<Proof> residual;  // post-measurement proof
};

VerifyOutcome verify(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h, const Proof& proof,
                     const Config& cfg, Rng& rng);

// Mixture POVM assembled purely from oracle queries to the obfuscation.
ati::MixturePOVM verifier_povm(const obf::OracleWorld& w, const obf::PcObfuscation& o,
                               const permver::PermutingVerifier& v, const Config& cfg, int physical_qubits, Rng& rng);

// Straight-line extraction of the len*l-qubit witness from a residual proof.
StateVector ext1(const obf::OracleWorld& w, const Crs& crs, const obf::PcTrapdoor& td,
                 const zx::HamiltonianInstance& h, const Proof& residual, const Config& cfg);

struct Simulation {
  Crs crs;
  obf::PcTrapdoor td;
  Proof proof;
};
Simulation simulate(const obf::OracleWorld& w, const zx::HamiltonianInstance& h, const Config& cfg, Rng& rng);

// Acceptance of the single-copy verifier on each l-qubit copy of a
// len*l-qubit state (reduced density matrices).
std::vector<double> per_copy_acceptance(const zx::HamiltonianInstance& h, const StateVector& state);
// Exact acceptance of the permuted-measurement family on a logical state:
// the seed-averaged sum_r w_r Tr[M[theta_r, f_r] psi].
double family_acceptance(const permver::PermutingVerifier& v, const StateVector& state, const Config& cfg);

}  // namespace qmalab::protocol
