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

#include "qmalab/permver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qmalab::permver {

Thresholds thresholds_from_energy(double a_prime, double b_prime, double weight_sum) {
  if (!(a_prime < b_prime)) throw MalformedInput("permver: need a' < b'");
  if (!(weight_sum > 0)) throw MalformedInput("permver: weight sum must be positive");
  return {0.5 * (1 - a_prime / weight_sum), 0.5 * (1 - b_prime / weight_sum)};
}

long recommended_k(int n, double a, double b, double j) {
  if (!(a > b)) throw MalformedInput("permver: need a > b");
  const double gap = a - b;
  const double n3 = static_cast<double>(n) * n * n;
  return static_cast<long>(std::ceil((4.0 / gap) * (n3 * std::numbers::ln2 / gap + j))) + 1;
}

PermutingVerifier::PermutingVerifier(zx::HamiltonianInstance h, int k, Thresholds t)
    : h_(std::move(h)), k_(k), t_(t) {
  if (k < 2) throw MalformedInput("permver: k must be at least 2");
  if (!(t.a > t.b) || t.a > 1 || t.b < 0) throw MalformedInput("permver: need 0 <= b < a <= 1");
  for (std::size_t term = 0; term < h_.terms().size(); ++term) {
    const auto copies = static_cast<std::size_t>(std::floor(h_.terms()[term].p * k + 1e-9));
    list_.insert(list_.end(), copies, term);
  }
  if (list_.empty()) throw MalformedInput("permver: k too small, measurement list is empty");
  if (total_qubits() > gf2::kMaxAmbient) throw SizingError("permver: len * l exceeds 64 qubits");
}

PermutingVerifier build(const zx::HamiltonianInstance& h, int k, Thresholds t) { return PermutingVerifier(h, k, t); }

std::vector<std::size_t> random_permutation(std::size_t len, Rng& rng) {
  std::vector<std::size_t> perm(len);
  for (std::size_t i = 0; i < len; ++i) perm[i] = i;
  for (std::size_t i = len; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
  return perm;
}

SampledMeasurement samp_perm(const PermutingVerifier& v, std::span<const std::size_t> perm) {
  const std::size_t len = v.len();
  if (perm.size() != len) throw MalformedInput("permver: permutation length differs from list length");
  std::vector<bool> seen(len);
  for (auto p : perm) {
    if (p >= len || seen[p]) throw MalformedInput("permver: not a permutation");
    seen[p] = true;
  }
  const int ell = v.ell();
  SampledMeasurement out;
  out.order.assign(perm.begin(), perm.end());
  std::uint64_t theta = 0;
  // Per-register pair masks and beta bits for the threshold predicate.
  std::vector<std::uint64_t> masks(len);
  std::uint64_t betas = 0;
  for (std::size_t r = 0; r < len; ++r) {
    const auto& term = v.instance().terms()[v.list()[perm[r]]];
    const int base = static_cast<int>(r) * ell;
    if (term.basis == zx::Basis::X) theta |= (ell == 64 ? ~0ULL : ((1ULL << ell) - 1)) << base;
    masks[r] = (1ULL << (base + term.i)) | (1ULL << (base + term.j));
    if (term.beta) betas |= 1ULL << r;
  }
  out.theta = BitVector(v.total_qubits(), theta);
  const double threshold = v.threshold();
  out.f = {v.total_qubits(), [masks, betas, threshold](std::uint64_t m) {
             std::size_t passed = 0;
             for (std::size_t r = 0; r < masks.size(); ++r)
               passed += (__builtin_parityll(m & masks[r]) ^ ((betas >> r) & 1)) != 0;
             return passed >= threshold;
           }};
  return out;
}

SampledMeasurement samp_perm(const PermutingVerifier& v, Rng& rng) {
  auto perm = random_permutation(v.len(), rng);
  return samp_perm(v, perm);
}

namespace {

std::vector<double> per_term_accept(const PermutingVerifier& v, const StateVector& copy) {
  if (copy.num_qubits() != v.ell()) throw MalformedInput("permver: witness copy has wrong qubit count");
  std::vector<double> q(v.instance().terms().size());
  for (std::size_t t = 0; t < q.size(); ++t) {
    auto spec = zx::term_spec(v.instance(), t);
    q[t] = sim::measure_zx(copy, spec.theta, spec.f).prob_accept;
  }
  return q;
}

}  // namespace

bool verify_product(const PermutingVerifier& v, const StateVector& copy, Rng& rng) {
  const auto q = per_term_accept(v, copy);
  const auto perm = random_permutation(v.len(), rng);
  std::size_t passed = 0;
  for (auto slot : perm) passed += rng.bernoulli(q[v.list()[slot]]);
  return v.accepts_count(passed);
}

double accept_probability_product(const PermutingVerifier& v, const StateVector& copy) {
  const auto q = per_term_accept(v, copy);
  // Poisson-binomial distribution of the pass count.
  std::vector<double> dist{1.0};
  for (auto term : v.list()) {
    std::vector<double> next(dist.size() + 1, 0.0);
    for (std::size_t c = 0; c < dist.size(); ++c) {
      next[c] += dist[c] * (1 - q[term]);
      next[c + 1] += dist[c] * q[term];
    }
    dist = std::move(next);
  }
  double acc = 0;
  for (std::size_t c = 0; c < dist.size(); ++c)
    if (v.accepts_count(c)) acc += dist[c];
  return acc;
}

bool verify_entangled(const PermutingVerifier& v, const StateVector& witness, Rng& rng) {
  const int total = v.total_qubits();
  if (total > kMaxEntangledQubits) throw SizingError("permver: entangled verification capped at 14 qubits");
  if (witness.num_qubits() != total) throw MalformedInput("permver: witness has wrong qubit count");
  const auto perm = random_permutation(v.len(), rng);
  const int ell = v.ell();
  StateVector state = witness;
  std::size_t passed = 0;
  for (std::size_t r = 0; r < perm.size(); ++r) {
    const auto& term = v.instance().terms()[v.list()[perm[r]]];
    const int base = static_cast<int>(r) * ell;
    const std::uint64_t reg = ((1ULL << ell) - 1) << base;
    const std::uint64_t mask = (1ULL << (base + term.i)) | (1ULL << (base + term.j));
    const bool beta = term.beta;
    BitVector theta(total, term.basis == zx::Basis::X ? reg : 0);
    BasisPredicate f{total, [mask, beta](std::uint64_t m) { return (__builtin_parityll(m & mask) != 0) != beta; }};
    auto out = sim::measure_zx(state, theta, f);
    if (rng.bernoulli(out.prob_accept) && out.post_accept) {
      ++passed;
      state = std::move(*out.post_accept);
    } else if (out.post_reject) {
      state = std::move(*out.post_reject);
    } else {
      ++passed;
      state = std::move(*out.post_accept);
    }
  }
  return v.accepts_count(passed);
}

double hoeffding_delta(const PermutingVerifier& v) {
  const double len = static_cast<double>(v.len());
  const double t = len * v.thresholds().a - v.threshold();
  if (t <= 0) return 1.0;
  return std::min(1.0, 2.0 * std::exp(-2.0 * t * t / len));
}

double binomial_upper_tail(std::size_t n, double q, double t) {
  double acc = 0;
  for (std::size_t c = 0; c <= n; ++c) {
    if (static_cast<double>(c) < t) continue;
    const double logc = std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0);
    const double term = (q == 0 ? (c == 0 ? 1.0 : 0.0) : (q == 1 ? (c == n ? 1.0 : 0.0)
                         : std::exp(logc + c * std::log(q) + (n - c) * std::log1p(-q))));
    acc += term;
  }
  return std::min(1.0, acc);
}

double bernstein_tail(double d, double r, double n, double t) {
  if (t <= 0) return 1.0;
  return std::clamp(d * std::exp(-t * t / (2 * r * (2 * n + t / 3))), 0.0, 1.0);
}

double matrix_bernstein_tail(double d1, double d2, double sigma2, double r, double t) {
  if (t <= 0) return 1.0;
  return std::clamp((d1 + d2) * std::exp(-(t * t / 2) / (sigma2 + r * t / 3)), 0.0, 1.0);
}

}  // namespace qmalab::permver
