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

// 2-local ZX Hamiltonians H = sum_t p_t (I + (-1)^beta_t S_i S_j) / 2 with
// S in {Z, X}, and the single-copy verifier that samples one term.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qmalab/simstate.hpp"

namespace qmalab::zx {

using sim::BasisPredicate;
using sim::StateVector;
using gf2::BitVector;

inline constexpr int kMaxGroundStateQubits = 10;

enum class Basis { Z, X };

struct Term {
  int i = 0;
  int j = 1;
  Basis basis = Basis::Z;
  int beta = 0;
  double p = 0.0;
};

// Validated instance. Terms are grouped by qubit pair; all terms of a pair
// share its weight p_ij and sum_{pairs} 2 p_ij = 1.
class HamiltonianInstance {
 public:
  HamiltonianInstance(int qubits, std::vector<Term> terms);

  int qubits() const { return qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  // Sum of the term weights; term sampling and the acceptance operator are
  // normalized by it.
  double weight_sum() const { return weight_sum_; }
  std::size_t pair_count() const { return pair_count_; }

  nlohmann::json to_json() const;
  static HamiltonianInstance from_json(const nlohmann::json& j);
  static HamiltonianInstance load(const std::string& path);
  // Canonical compact text, used when hashing / embedding in circuits.
  std::string canonical() const;

 private:
  int qubits_;
  std::vector<Term> terms_;
  double weight_sum_ = 0;
  std::size_t pair_count_ = 0;
};

struct ZXMeasurementSpec {
  BitVector theta;   // 0^l for Z terms, 1^l for X terms
  BasisPredicate f;  // accept bit m_i xor m_j xor beta
  std::size_t term = 0;
};

ZXMeasurementSpec term_spec(const HamiltonianInstance& h, std::size_t term);
// Samples a term with probability p_t / weight_sum.
ZXMeasurementSpec samp(const HamiltonianInstance& h, Rng& rng);
// Single-copy verifier: sample a term, measure, return the accept bit.
bool zxver(const HamiltonianInstance& h, const StateVector& s, Rng& rng);
// Exact acceptance probability of zxver on s.
double zxver_accept_probability(const HamiltonianInstance& h, const StateVector& s);

// Dense 2^l x 2^l matrices.
Eigen::MatrixXcd term_projector(int qubits, const Term& t);
Eigen::MatrixXcd hamiltonian_matrix(const HamiltonianInstance& h);
// E = sum_t (p_t / W)(I - P_t) = I - H / W
Eigen::MatrixXcd acceptance_operator(const HamiltonianInstance& h);

struct GroundState {
  double energy;
  StateVector state;
};
GroundState ground_state(const HamiltonianInstance& h);

double expectation(const Eigen::MatrixXcd& op, const StateVector& s);

// Built-in instances used by tests and scenarios.
HamiltonianInstance reference_instance();  // Z and X on (0,1), beta 0, p 1/2
HamiltonianInstance z_only_instance();     // single Z term on (0,1), p 1/2

}  // namespace qmalab::zx
