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

#include "qmalab/ati.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace qmalab::ati {

Vec to_vec(const StateVector& s) { return Eigen::Map<const Vec>(s.amps().data(), s.dim()); }

namespace {

StateVector from_vec(int n, const Vec& v) {
  return StateVector::normalized(n, std::vector<sim::Complex>(v.data(), v.data() + v.size()));
}

}  // namespace

MixturePOVM MixturePOVM::from_dense(const std::vector<std::pair<double, Eigen::MatrixXcd>>& parts) {
  if (parts.empty()) throw MalformedInput("ati: mixture has no components");
  MixturePOVM m(parts.front().second.rows());
  for (const auto& [w, p] : parts) {
    if (static_cast<std::size_t>(p.rows()) != m.dim() || p.cols() != p.rows())
      throw MalformedInput("ati: component dimensions differ");
    m.add(w, [p](const Vec& v) -> Vec { return p * v; });
  }
  return m;
}

void MixturePOVM::add(double weight, std::function<Vec(const Vec&)> apply) {
  if (!(weight >= 0)) throw MalformedInput("ati: negative mixture weight");
  comps_.push_back({weight, std::move(apply)});
}

void MixturePOVM::set_support(Eigen::MatrixXcd basis) {
  if (static_cast<std::size_t>(basis.rows()) != dim_) throw MalformedInput("ati: support basis has wrong dimension");
  support_ = std::move(basis);
}

Vec MixturePOVM::apply(const Vec& v) const {
  Vec out = Vec::Zero(dim_);
  double total = 0;
  for (const auto& c : comps_) total += c.weight;
  if (!(total > 0)) throw MalformedInput("ati: mixture weights sum to zero");
  for (const auto& c : comps_)
    if (c.weight > 0) out += (c.weight / total) * c.apply(v);
  return out;
}

Eigen::MatrixXcd mixture_operator(const MixturePOVM& m) {
  if (m.dim() > (std::size_t{1} << kMaxDenseQubits)) throw SizingError("ati: dense mixture operator capped at 2^12");
  Eigen::MatrixXcd e(m.dim(), m.dim());
  for (std::size_t c = 0; c < m.dim(); ++c) e.col(c) = m.apply(Vec::Unit(m.dim(), c));
  return e;
}

Spectrum spectral_decomposition(const MixturePOVM& m) {
  Spectrum out;
  out.dim = m.dim();
  Eigen::MatrixXcd basis;
  Eigen::MatrixXcd compressed;
  if (m.support()) {
    basis = *m.support();
    Eigen::MatrixXcd eb(m.dim(), basis.cols());
    for (Eigen::Index c = 0; c < basis.cols(); ++c) eb.col(c) = m.apply(basis.col(c));
    compressed = basis.adjoint() * eb;
  } else {
    compressed = mixture_operator(m);
  }
  if (compressed.rows() == 0) {
    out.values.resize(0);
    out.vectors.resize(m.dim(), 0);
    return out;
  }
  compressed = (compressed + compressed.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(compressed);
  if (es.info() != Eigen::Success) throw Error("ati: eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = m.support() ? Eigen::MatrixXcd(basis * es.eigenvectors()) : es.eigenvectors();
  return out;
}

ThresholdOutcome threshold_measure(const Spectrum& spec, const StateVector& s, double gamma, Rng& rng) {
  if (s.dim() != spec.dim) throw MalformedInput("ati: state dimension differs from the POVM");
  if (!(gamma > 0 && gamma <= 2)) throw MalformedInput("ati: gamma must be in (0, 2]");
  const double cut = cutoff(gamma);
  const Vec v = to_vec(s);
  const Vec coeff = spec.vectors.adjoint() * v;

  // Group eigenvalues (ascending) into degenerate blocks.
  struct Group {
    double value;
    double weight;
  };
  std::vector<Group> groups;
  double covered = 0;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double w = std::norm(coeff(i));
    covered += w;
    if (!groups.empty() && spec.values(i) - groups.back().value <= kGroupTol)
      groups.back().weight += w;
    else
      groups.push_back({spec.values(i), w});
  }
  // Complement of the support: eigenvalue 0.
  const double rest = std::max(0.0, 1.0 - covered);
  if (rest > 0) {
    auto it = std::find_if(groups.begin(), groups.end(), [](const Group& g) { return std::abs(g.value) <= kGroupTol; });
    if (it != groups.end())
      it->weight += rest;
    else
      groups.insert(groups.begin(), {0.0, rest});
  }

  ThresholdOutcome out;
  for (const auto& g : groups)
    if (g.value >= cut) out.prob_accept += g.weight;
  double u = rng.uniform01(), acc = 0, total = 0;
  for (const auto& g : groups) total += g.weight;
  u *= total;
  const Group* picked = &groups.back();
  for (const auto& g : groups) {
    acc += g.weight;
    if (u < acc) {
      picked = &g;
      break;
    }
  }
  out.eigenvalue = picked->value;
  out.accept = picked->value >= cut;

  // Post state: projection onto all eigenspaces on the sampled side.
  Vec proj_accept = Vec::Zero(spec.dim);
  for (Eigen::Index i = 0; i < spec.values.size(); ++i)
    if (spec.values(i) >= cut) proj_accept += coeff(i) * spec.vectors.col(i);
  Vec post = out.accept ? proj_accept : Vec(v - proj_accept);
  if (post.squaredNorm() >= sim::kBranchFloor) out.post = from_vec(s.num_qubits(), post);
  return out;
}

ThresholdOutcome threshold_measure(const MixturePOVM& m, const StateVector& s, double gamma, Rng& rng) {
  return threshold_measure(spectral_decomposition(m), s, gamma, rng);
}

double repeat_projectivity_check(const Spectrum& spec, const StateVector& s, double gamma, int trials, Rng& rng) {
  if (trials <= 0) throw MalformedInput("ati: trials must be positive");
  int agree = 0;
  for (int t = 0; t < trials; ++t) {
    auto first = threshold_measure(spec, s, gamma, rng);
    if (!first.post) continue;
    auto second = threshold_measure(spec, *first.post, gamma, rng);
    agree += second.accept == first.accept;
  }
  return agree / static_cast<double>(trials);
}

double exact_acceptance(const MixturePOVM& m, const StateVector& s) {
  const Vec v = to_vec(s);
  return v.dot(m.apply(v)).real();
}

double sampled_acceptance(const MixturePOVM& m, const StateVector& s, int samples, Rng& rng) {
  double total = 0;
  for (const auto& c : m.components()) total += c.weight;
  const Vec v = to_vec(s);
  std::vector<double> q;
  for (const auto& c : m.components()) q.push_back(v.dot(c.apply(v)).real());
  int acc = 0;
  for (int i = 0; i < samples; ++i) {
    double u = rng.uniform01() * total;
    std::size_t k = 0;
    while (k + 1 < q.size() && u >= m.components()[k].weight) u -= m.components()[k++].weight;
    acc += rng.bernoulli(q[k]);
  }
  return acc / static_cast<double>(samples);
}

Eigen::MatrixXcd orthonormal_range(const std::function<Vec(const Vec&)>& op, std::size_t dim, std::size_t start,
                                   Rng& rng) {
  std::size_t p = std::max<std::size_t>(start, 1);
  while (p < dim) {
    Eigen::MatrixXcd y(dim, p);
    for (std::size_t c = 0; c < p; ++c) {
      Vec probe(dim);
      for (std::size_t i = 0; i < dim; ++i) probe(i) = sim::Complex(rng.normal(), rng.normal());
      y.col(c) = op(probe);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(y);
    qr.setThreshold(1e-9);
    const auto r = static_cast<std::size_t>(qr.rank());
    if (r < p) {
      Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, r);
      return q;
    }
    p *= 2;
  }
  return Eigen::MatrixXcd::Identity(dim, dim);
}

}  // namespace qmalab::ati
