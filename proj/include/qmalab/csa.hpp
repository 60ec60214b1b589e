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

// Coset state authentication. Each logical qubit is encoded in a block of
// 2*lambda+1 physical qubits:  |b> -> X^x Z^z |S + b*Delta>.
// Block i occupies physical qubits [i*B, (i+1)*B) with B = 2*lambda+1.

#pragma once

#include <vector>

#include "json.hpp"
#include "qmalab/simstate.hpp"

namespace qmalab::csa {

using gf2::BitVector;
using gf2::Subspace;
using sim::BasisPredicate;
using sim::StateVector;

inline constexpr int kMaxCheckQubits = 12;
inline constexpr double kLeakageTol = 1e-6;

struct BlockKey {
  Subspace s;
  BitVector delta, x, z;
  // Derived: s_hat = (S + Delta)^perp, delta_hat its lexicographic partner.
  Subspace s_hat;
  BitVector delta_hat;
  Subspace s_delta;  // S + span{Delta}
  Subspace s_perp;   // S^perp
};

class CSAKey {
 public:
  CSAKey() = default;
  CSAKey(int lambda, std::vector<BlockKey> blocks);

  int lambda() const { return lambda_; }
  int n() const { return static_cast<int>(blocks_.size()); }
  int block_size() const { return 2 * lambda_ + 1; }
  int physical_qubits() const { return n() * block_size(); }
  const std::vector<BlockKey>& blocks() const { return blocks_; }

  // Block decoding: 0, 1, or kBottom.
  static constexpr int kBottom = 2;
  int decode_block(int i, bool theta, std::uint64_t v) const;
  bool ver_block(int i, bool theta, std::uint64_t v) const;
  std::uint64_t block_bits(int i, std::uint64_t physical) const;
  // Physical Hadamard mask: whole blocks where theta_i = 1.
  std::uint64_t hadamard_mask(const BitVector& theta) const;

  nlohmann::json to_json() const;
  static CSAKey from_json(const nlohmann::json& j);

 private:
  int lambda_ = 0;
  std::vector<BlockKey> blocks_;
  // Lookup tables indexed by block bits (kept when the block is small).
  std::vector<std::vector<std::uint8_t>> dec_table_[2];
  std::vector<std::vector<std::uint8_t>> ver_table_[2];
};

// Completes the derived fields of a block from (S, Delta, x, z).
BlockKey make_block(Subspace s, BitVector delta, BitVector x, BitVector z);

CSAKey keygen(int lambda, int n, Rng& rng);

StateVector enc(const CSAKey& key, const StateVector& logical);
// Enc of a logical computational basis state.
StateVector enc_basis(const CSAKey& key, std::uint64_t logical);

// Dec_{k,theta,f}: decode each block in basis theta_i; 0 if any block is
// bottom, else f(m).
BasisPredicate dec_predicate(const CSAKey& key, const BitVector& theta, const BasisPredicate& f);
// Ver_{k,theta}: theta_i = 0 checks S_Delta + x, theta_i = 1 checks S^perp + z.
BasisPredicate ver_predicate(const CSAKey& key, const BitVector& theta);

// Applies H^theta blockwise, projects onto Dec = 1 and rotates back.
sim::ZXOutcome logical_measure(const CSAKey& key, const BitVector& theta, const BasisPredicate& f,
                               const StateVector& encoded);

// max | H^theta Dec H^theta Enc|b> - Enc M[theta,f]|b> | over logical basis
// states b, entrywise. Zero means the encoded measurement acts exactly as
// the logical one and never leaves the codespace.
double logical_measure_deviation(const CSAKey& key, const BitVector& theta, const BasisPredicate& f);

// max |Pi_k - H^{1^n} Ver_{1^n} H^{1^n} Ver_{0^n}| entrywise, with
// Pi_k = sum_b Enc|b><b|Enc^dagger. Capped at 12 physical qubits.
double codespace_projector_check(const CSAKey& key);

double codespace_weight(const CSAKey& key, const StateVector& encoded);
// Enc^dagger; rejects states with more than kLeakageTol weight outside the
// codespace.
StateVector enc_adjoint(const CSAKey& key, const StateVector& encoded);

}  // namespace qmalab::csa
