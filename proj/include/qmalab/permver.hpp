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

// Permuting verifier: k-copy ZX verification with a random permutation of a
// fixed measurement list, strongly complete in the sense that the honest
// prover can pass every sampled measurement.

#pragma once

#include <span>
#include <vector>

#include "qmalab/zxham.hpp"

namespace qmalab::permver {

using gf2::BitVector;
using sim::BasisPredicate;
using sim::StateVector;

inline constexpr int kMaxEntangledQubits = 14;

struct Thresholds {
  double a;  // completeness: honest per-test acceptance >= a
  double b;  // soundness: any per-test acceptance <= b
};

// a = (1 - a'/W)/2, b = (1 - b'/W)/2 for energy thresholds a' < b' and
// W = sum of term weights.
Thresholds thresholds_from_energy(double a_prime, double b_prime, double weight_sum);

// ceil((4/(a-b)) (n^3 ln2/(a-b) + |J|)) + 1
long recommended_k(int n, double a, double b, double j);

class PermutingVerifier {
 public:
  PermutingVerifier(zx::HamiltonianInstance h, int k, Thresholds t);

  const zx::HamiltonianInstance& instance() const { return h_; }
  int k() const { return k_; }
  Thresholds thresholds() const { return t_; }
  // Term index for each list slot: floor(p_t k) copies of term t, in order.
  const std::vector<std::size_t>& list() const { return list_; }
  std::size_t len() const { return list_.size(); }
  int ell() const { return h_.qubits(); }
  int total_qubits() const { return static_cast<int>(len()) * ell(); }
  // Accept iff the number of passed slots is >= len (a+b)/2.
  double threshold() const { return len() * (t_.a + t_.b) / 2.0; }
  bool accepts_count(std::size_t passed) const { return passed >= threshold(); }

 private:
  zx::HamiltonianInstance h_;
  int k_;
  Thresholds t_;
  std::vector<std::size_t> list_;
};

PermutingVerifier build(const zx::HamiltonianInstance& h, int k, Thresholds t);

struct SampledMeasurement {
  std::vector<std::size_t> order;  // list slot assigned to each register
  BitVector theta;                 // concatenated per-register bases
  BasisPredicate f;                // threshold predicate on all registers
};

// Seeded Fisher-Yates permutation of [0, len).
std::vector<std::size_t> random_permutation(std::size_t len, Rng& rng);
SampledMeasurement samp_perm(const PermutingVerifier& v, std::span<const std::size_t> perm);
SampledMeasurement samp_perm(const PermutingVerifier& v, Rng& rng);

// Verification against len independent copies of `copy`.
bool verify_product(const PermutingVerifier& v, const StateVector& copy, Rng& rng);
// Exact acceptance probability for a product witness.
double accept_probability_product(const PermutingVerifier& v, const StateVector& copy);
// Verification of an arbitrary len*l-qubit witness, one register at a time.
bool verify_entangled(const PermutingVerifier& v, const StateVector& witness, Rng& rng);

// Honest-witness failure bound 2 exp(-2 t^2 / len), t = len a - threshold;
// 1 when t <= 0.
double hoeffding_delta(const PermutingVerifier& v);
// Pr[Bin(n, q) >= t]
double binomial_upper_tail(std::size_t n, double q, double t);

// d exp(-t^2 / (2R(2n + t/3))), clipped to [0,1]
double bernstein_tail(double d, double r, double n, double t);
// (d1+d2) exp(-(t^2/2) / (sigma2 + R t / 3)), clipped to [0,1]
double matrix_bernstein_tail(double d1, double d2, double sigma2, double r, double t);

}  // namespace qmalab::permver
