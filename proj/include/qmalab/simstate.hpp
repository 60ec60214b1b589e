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

// Dense statevector simulation. Qubit q is bit q of the amplitude index, so
// a computational basis state |v> is stored at index v.word().

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "qmalab/gf2.hpp"

namespace qmalab::sim {

using Complex = std::complex<double>;
using gf2::BitVector;

inline constexpr int kMaxQubits = 22;
inline constexpr double kNormTol = 1e-9;
// Branches with smaller Born weight are reported as absent.
inline constexpr double kBranchFloor = 1e-12;

class StateVector {
 public:
  StateVector() = default;
  static StateVector zero(int n);
  static StateVector basis(int n, std::uint64_t index);
  // Rejects vectors whose norm is not 1 within kNormTol.
  static StateVector from_amplitudes(int n, std::vector<Complex> amps);
  // Renormalizes; rejects (near-)zero vectors.
  static StateVector normalized(int n, std::vector<Complex> amps);
  static StateVector random(int n, Rng& rng);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amps() const { return amps_; }
  std::vector<Complex>& mutable_amps() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  Complex inner(const StateVector& o) const;  // <this|o>
  double probability(std::uint64_t index) const { return std::norm(amps_[index]); }

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
};

void check_qubits(int n, int cap = kMaxQubits);

// Boolean predicate on computational basis strings of fixed arity.
struct BasisPredicate {
  int arity = 0;
  std::function<bool(std::uint64_t)> fn;
  bool operator()(std::uint64_t v) const { return fn(v); }
  bool operator()(const BitVector& v) const { return fn(v.word()); }
  BasisPredicate negated() const;
  // Materialized lookup table; speeds up repeated projection.
  BasisPredicate tabulated() const;
};

// X^x Z^z |psi>: the Z phase (-1)^{z.v} is applied first, then the flip.
void apply_pauli(StateVector& s, const BitVector& x, const BitVector& z);
void apply_pauli(std::vector<Complex>& a, std::uint64_t x, std::uint64_t z);
// H on every qubit whose bit is set.
void apply_hadamard(StateVector& s, const BitVector& theta_mask);
void apply_hadamard(std::vector<Complex>& a, std::uint64_t mask);

// Uniform superposition over the coset S + shift.
StateVector coset_superposition(const gf2::Subspace& s, const BitVector& shift);

struct Projection {
  double prob_one = 0.0;
  std::optional<StateVector> post_one;   // absent when prob_one < kBranchFloor
  std::optional<StateVector> post_zero;  // absent when 1 - prob_one < kBranchFloor
};
Projection project_predicate(const StateVector& s, const BasisPredicate& f);
// Zero every amplitude where f is false (unnormalized projection).
void project_in_place(std::vector<Complex>& a, const BasisPredicate& f);

// M[theta, f] = H^theta (sum_{f(x)=1} |x><x|) H^theta
struct ZXOutcome {
  double prob_accept = 0.0;
  std::optional<StateVector> post_accept;
  std::optional<StateVector> post_reject;
};
ZXOutcome measure_zx(const StateVector& s, const BitVector& theta, const BasisPredicate& f);

// a occupies the low qubits, b the high ones.
StateVector tensor(const StateVector& a, const StateVector& b);
// Trace distance between pure states.
double trace_distance(const StateVector& a, const StateVector& b);
std::uint64_t sample_basis(const StateVector& s, Rng& rng);

}  // namespace qmalab::sim
