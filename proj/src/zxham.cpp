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

#include "qmalab/zxham.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qmalab::zx {

namespace {
constexpr double kWeightTol = 1e-9;
}

HamiltonianInstance::HamiltonianInstance(int qubits, std::vector<Term> terms)
    : qubits_(qubits), terms_(std::move(terms)) {
  if (qubits < 2 || qubits > gf2::kMaxAmbient) throw MalformedInput("zxham: qubit count must be in [2,64]");
  if (terms_.empty()) throw MalformedInput("zxham: instance has no terms");
  std::map<std::pair<int, int>, double> pair_weight;
  for (const auto& t : terms_) {
    if (t.i < 0 || t.j <= t.i || t.j >= qubits) throw MalformedInput("zxham: term needs 0 <= i < j < qubits");
    if (t.beta != 0 && t.beta != 1) throw MalformedInput("zxham: beta must be 0 or 1");
    if (!(t.p > 0.0 && t.p <= 1.0)) throw MalformedInput("zxham: term weight must be in (0,1]");
    auto [it, fresh] = pair_weight.emplace(std::make_pair(t.i, t.j), t.p);
    if (!fresh && std::abs(it->second - t.p) > kWeightTol)
      throw MalformedInput("zxham: terms on the same pair must share one weight");
    weight_sum_ += t.p;
  }
  double total = 0;
  for (auto& [pair, w] : pair_weight) total += 2 * w;
  if (std::abs(total - 1.0) > kWeightTol) throw MalformedInput("zxham: pair weights must satisfy sum 2 p_ij = 1");
  pair_count_ = pair_weight.size();
}

nlohmann::json HamiltonianInstance::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_)
    terms.push_back({{"i", t.i}, {"j", t.j}, {"basis", t.basis == Basis::Z ? "Z" : "X"}, {"beta", t.beta}, {"p", t.p}});
  return {{"qubits", qubits_}, {"terms", terms}};
}

HamiltonianInstance HamiltonianInstance::from_json(const nlohmann::json& j) {
  try {
    std::vector<Term> terms;
    for (const auto& e : j.at("terms")) {
      Term t;
      t.i = e.at("i").get<int>();
      t.j = e.at("j").get<int>();
      const auto b = e.at("basis").get<std::string>();
      if (b == "Z")
        t.basis = Basis::Z;
      else if (b == "X")
        t.basis = Basis::X;
      else
        throw MalformedInput("zxham: basis must be \"Z\" or \"X\"");
      t.beta = e.at("beta").get<int>();
      t.p = e.at("p").get<double>();
      terms.push_back(t);
    }
    return HamiltonianInstance(j.at("qubits").get<int>(), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("zxham: bad instance JSON: ") + e.what());
  }
}

HamiltonianInstance HamiltonianInstance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("zxham: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("zxham: ") + path + ": " + e.what());
  }
  return from_json(j);
}

std::string HamiltonianInstance::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "zxham/" << qubits_;
  for (const auto& t : terms_)
    os << ';' << t.i << ',' << t.j << ',' << (t.basis == Basis::Z ? 'Z' : 'X') << ',' << t.beta << ',' << t.p;
  return os.str();
}

ZXMeasurementSpec term_spec(const HamiltonianInstance& h, std::size_t term) {
  const Term& t = h.terms().at(term);
  const int n = h.qubits();
  const std::uint64_t mask = (1ULL << t.i) | (1ULL << t.j);
  const bool beta = t.beta;
  ZXMeasurementSpec spec;
  spec.theta = t.basis == Basis::Z ? BitVector::zeros(n) : BitVector::ones(n);
  spec.f = {n, [mask, beta](std::uint64_t m) { return (__builtin_parityll(m & mask) != 0) != beta; }};
  spec.term = term;
  return spec;
}

ZXMeasurementSpec samp(const HamiltonianInstance& h, Rng& rng) {
  double u = rng.uniform01() * h.weight_sum();
  for (std::size_t t = 0; t < h.terms().size(); ++t) {
    u -= h.terms()[t].p;
    if (u < 0) return term_spec(h, t);
  }
  return term_spec(h, h.terms().size() - 1);
}

bool zxver(const HamiltonianInstance& h, const StateVector& s, Rng& rng) {
  auto spec = samp(h, rng);
  return rng.bernoulli(sim::measure_zx(s, spec.theta, spec.f).prob_accept);
}

double zxver_accept_probability(const HamiltonianInstance& h, const StateVector& s) {
  double acc = 0;
  for (std::size_t t = 0; t < h.terms().size(); ++t) {
    auto spec = term_spec(h, t);
    acc += h.terms()[t].p * sim::measure_zx(s, spec.theta, spec.f).prob_accept;
  }
  return acc / h.weight_sum();
}

Eigen::MatrixXcd term_projector(int qubits, const Term& t) {
  sim::check_qubits(qubits, kMaxGroundStateQubits);
  const std::size_t dim = std::size_t{1} << qubits;
  const std::uint64_t mask = (1ULL << t.i) | (1ULL << t.j);
  const double sign = t.beta ? -1.0 : 1.0;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim) * 0.5;
  for (std::size_t v = 0; v < dim; ++v) {
    if (t.basis == Basis::Z)
      p(v, v) += 0.5 * sign * (__builtin_parityll(v & mask) ? -1.0 : 1.0);
    else
      p(v ^ mask, v) += 0.5 * sign;
  }
  return p;
}

Eigen::MatrixXcd hamiltonian_matrix(const HamiltonianInstance& h) {
  const std::size_t dim = std::size_t{1} << h.qubits();
  sim::check_qubits(h.qubits(), kMaxGroundStateQubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.p * term_projector(h.qubits(), t);
  return m;
}

Eigen::MatrixXcd acceptance_operator(const HamiltonianInstance& h) {
  const std::size_t dim = std::size_t{1} << h.qubits();
  return Eigen::MatrixXcd::Identity(dim, dim) - hamiltonian_matrix(h) / h.weight_sum();
}

GroundState ground_state(const HamiltonianInstance& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian_matrix(h));
  if (es.info() != Eigen::Success) throw Error("zxham: eigensolver failed");
  Eigen::VectorXcd v = es.eigenvectors().col(0);
  std::vector<sim::Complex> amps(v.data(), v.data() + v.size());
  return {es.eigenvalues()(0), StateVector::normalized(h.qubits(), std::move(amps))};
}

double expectation(const Eigen::MatrixXcd& op, const StateVector& s) {
  Eigen::Map<const Eigen::VectorXcd> v(s.amps().data(), s.dim());
  return (v.adjoint() * op * v)(0, 0).real();
}

HamiltonianInstance reference_instance() {
  return HamiltonianInstance(2, {{0, 1, Basis::Z, 0, 0.5}, {0, 1, Basis::X, 0, 0.5}});
}

HamiltonianInstance z_only_instance() { return HamiltonianInstance(2, {{0, 1, Basis::Z, 0, 0.5}}); }

}  // namespace qmalab::zx
