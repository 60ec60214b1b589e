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

#include "qmalab/simstate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace qmalab::sim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

void check_qubits(int n, int cap) {
  if (n < 0 || n > cap)
    throw SizingError("simstate: " + std::to_string(n) + " qubits exceeds the cap of " + std::to_string(cap));
}

StateVector StateVector::zero(int n) { return basis(n, 0); }

StateVector StateVector::basis(int n, std::uint64_t index) {
  check_qubits(n);
  StateVector s;
  s.n_ = n;
  s.amps_.assign(std::size_t{1} << n, Complex{});
  if (index >= s.amps_.size()) throw MalformedInput("simstate: basis index out of range");
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int n, std::vector<Complex> amps) {
  check_qubits(n);
  if (amps.size() != (std::size_t{1} << n)) throw MalformedInput("simstate: amplitude count is not 2^n");
  StateVector s;
  s.n_ = n;
  s.amps_ = std::move(amps);
  if (std::abs(s.norm() - 1.0) > kNormTol) throw MalformedInput("simstate: state is not normalized");
  return s;
}

StateVector StateVector::normalized(int n, std::vector<Complex> amps) {
  check_qubits(n);
  if (amps.size() != (std::size_t{1} << n)) throw MalformedInput("simstate: amplitude count is not 2^n");
  double nrm = 0;
  for (auto& a : amps) nrm += std::norm(a);
  if (nrm < kBranchFloor) throw MalformedInput("simstate: cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(nrm);
  for (auto& a : amps) a *= inv;
  StateVector s;
  s.n_ = n;
  s.amps_ = std::move(amps);
  return s;
}

StateVector StateVector::random(int n, Rng& rng) {
  check_qubits(n);
  std::vector<Complex> amps(std::size_t{1} << n);
  for (auto& a : amps) a = Complex(rng.normal(), rng.normal());
  return normalized(n, std::move(amps));
}

double StateVector::norm() const {
  double s = 0;
  for (auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Complex StateVector::inner(const StateVector& o) const {
  if (o.n_ != n_) throw MalformedInput("simstate: qubit count mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * o.amps_[i];
  return acc;
}

BasisPredicate BasisPredicate::negated() const {
  auto f = fn;
  return {arity, [f](std::uint64_t v) { return !f(v); }};
}

BasisPredicate BasisPredicate::tabulated() const {
  check_qubits(arity, 26);
  auto table = std::make_shared<std::vector<std::uint8_t>>(std::size_t{1} << arity);
  for (std::size_t v = 0; v < table->size(); ++v) (*table)[v] = fn(v) ? 1 : 0;
  return {arity, [table](std::uint64_t v) { return (*table)[v] != 0; }};
}

void apply_pauli(std::vector<Complex>& a, std::uint64_t x, std::uint64_t z) {
  if (z)
    for (std::size_t v = 0; v < a.size(); ++v)
      if (gf2::dot_words(v, z)) a[v] = -a[v];
  if (x)
    for (std::size_t v = 0; v < a.size(); ++v)
      if (v < (v ^ x)) std::swap(a[v], a[v ^ x]);
}

void apply_pauli(StateVector& s, const BitVector& x, const BitVector& z) {
  if (x.size() != s.num_qubits() || z.size() != s.num_qubits())
    throw MalformedInput("simstate: Pauli length differs from qubit count");
  apply_pauli(s.mutable_amps(), x.word(), z.word());
}

void apply_hadamard(std::vector<Complex>& a, std::uint64_t mask) {
  for (std::uint64_t bit = 1; bit && bit <= mask; bit <<= 1) {
    if (!(mask & bit)) continue;
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (v & bit) continue;
      const Complex u = a[v], w = a[v | bit];
      a[v] = (u + w) * kInvSqrt2;
      a[v | bit] = (u - w) * kInvSqrt2;
    }
  }
}

void apply_hadamard(StateVector& s, const BitVector& theta_mask) {
  if (theta_mask.size() != s.num_qubits()) throw MalformedInput("simstate: theta length differs from qubit count");
  apply_hadamard(s.mutable_amps(), theta_mask.word());
}

StateVector coset_superposition(const gf2::Subspace& s, const BitVector& shift) {
  if (shift.size() != s.ambient()) throw MalformedInput("simstate: shift length differs from ambient");
  check_qubits(s.ambient());
  std::vector<Complex> amps(std::size_t{1} << s.ambient());
  const auto elems = s.elements();
  const double a = 1.0 / std::sqrt(static_cast<double>(elems.size()));
  for (auto e : elems) amps[e ^ shift.word()] = a;
  return StateVector::from_amplitudes(s.ambient(), std::move(amps));
}

void project_in_place(std::vector<Complex>& a, const BasisPredicate& f) {
  for (std::size_t v = 0; v < a.size(); ++v)
    if (!f(v)) a[v] = 0;
}

Projection project_predicate(const StateVector& s, const BasisPredicate& f) {
  if (f.arity != s.num_qubits()) throw MalformedInput("simstate: predicate arity differs from qubit count");
  std::vector<Complex> one(s.dim()), zero(s.dim());
  double p1 = 0;
  for (std::size_t v = 0; v < s.dim(); ++v) {
    if (f(v)) {
      one[v] = s[v];
      p1 += std::norm(s[v]);
    } else {
      zero[v] = s[v];
    }
  }
  Projection out;
  out.prob_one = std::clamp(p1, 0.0, 1.0);
  if (out.prob_one >= kBranchFloor) out.post_one = StateVector::normalized(s.num_qubits(), std::move(one));
  if (1.0 - out.prob_one >= kBranchFloor) out.post_zero = StateVector::normalized(s.num_qubits(), std::move(zero));
  return out;
}

ZXOutcome measure_zx(const StateVector& s, const BitVector& theta, const BasisPredicate& f) {
  StateVector rotated = s;
  apply_hadamard(rotated, theta);
  Projection p = project_predicate(rotated, f);
  ZXOutcome out;
  out.prob_accept = p.prob_one;
  if (p.post_one) {
    apply_hadamard(*p.post_one, theta);
    out.post_accept = std::move(p.post_one);
  }
  if (p.post_zero) {
    apply_hadamard(*p.post_zero, theta);
    out.post_reject = std::move(p.post_zero);
  }
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int n = a.num_qubits() + b.num_qubits();
  check_qubits(n);
  std::vector<Complex> amps(std::size_t{1} << n);
  for (std::size_t j = 0; j < b.dim(); ++j)
    for (std::size_t i = 0; i < a.dim(); ++i) amps[i | (j << a.num_qubits())] = a[i] * b[j];
  return StateVector::from_amplitudes(n, std::move(amps));
}

double trace_distance(const StateVector& a, const StateVector& b) {
  const double f = std::norm(a.inner(b));
  return std::sqrt(std::max(0.0, 1.0 - f));
}

std::uint64_t sample_basis(const StateVector& s, Rng& rng) {
  double u = rng.uniform01(), acc = 0;
  for (std::size_t v = 0; v < s.dim(); ++v) {
    acc += s.probability(v);
    if (u < acc) return v;
  }
  return s.dim() - 1;
}

}  // namespace qmalab::sim
