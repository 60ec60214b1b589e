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

// Approximate threshold implementation realized exactly: the mixture
// operator E = sum_r w_r P_r is eigendecomposed and the threshold test
// projects onto eigenspaces with eigenvalue >= 1 - gamma/2 (delta = 0).

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qmalab/simstate.hpp"

namespace qmalab::ati {

using sim::StateVector;
using Vec = Eigen::VectorXcd;

inline constexpr int kMaxDenseQubits = 12;
inline constexpr double kGroupTol = 1e-9;

// A POVM element given as a linear map v -> P v (Hermitian, 0 <= P <= I).
struct Component {
  double weight;
  std::function<Vec(const Vec&)> apply;
};

class MixturePOVM {
 public:
  explicit MixturePOVM(std::size_t dim) : dim_(dim) {}
  static MixturePOVM from_dense(const std::vector<std::pair<double, Eigen::MatrixXcd>>& parts);

  void add(double weight, std::function<Vec(const Vec&)> apply);
  // Orthonormal columns spanning a subspace that contains the support of
  // every component. Without it the operator is materialized densely.
  void set_support(Eigen::MatrixXcd basis);

  std::size_t dim() const { return dim_; }
  const std::vector<Component>& components() const { return comps_; }
  const std::optional<Eigen::MatrixXcd>& support() const { return support_; }
  Vec apply(const Vec& v) const;

 private:
  std::size_t dim_;
  std::vector<Component> comps_;
  std::optional<Eigen::MatrixXcd> support_;
};

// Dense E (dimension capped at 2^12).
Eigen::MatrixXcd mixture_operator(const MixturePOVM& m);

// Eigenpairs on the support; the orthogonal complement has eigenvalue 0.
struct Spectrum {
  std::size_t dim = 0;
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // dim x r, orthonormal columns
};
Spectrum spectral_decomposition(const MixturePOVM& m);

struct ThresholdOutcome {
  bool accept = false;
  double eigenvalue = 0.0;    // eigenvalue of the sampled eigenspace group
  double prob_accept = 0.0;   // weight on eigenvalues >= cutoff
  std::optional<StateVector> post;
};

inline double cutoff(double gamma) { return 1.0 - gamma / 2.0; }

ThresholdOutcome threshold_measure(const Spectrum& spec, const StateVector& s, double gamma, Rng& rng);
ThresholdOutcome threshold_measure(const MixturePOVM& m, const StateVector& s, double gamma, Rng& rng);

// Fraction of (measure, re-measure the post state) pairs that agree.
double repeat_projectivity_check(const Spectrum& spec, const StateVector& s, double gamma, int trials, Rng& rng);

// Monte Carlo estimate of Tr[E rho]: sample a component by weight, then
// its accept bit.
double sampled_acceptance(const MixturePOVM& m, const StateVector& s, int samples, Rng& rng);
double exact_acceptance(const MixturePOVM& m, const StateVector& s);

// Orthonormal basis of range(op) by randomized range finding: start with
// `start` random probes and double until the probe matrix is rank
// deficient. Returns the identity basis once probes reach dim.
Eigen::MatrixXcd orthonormal_range(const std::function<Vec(const Vec&)>& op, std::size_t dim, std::size_t start,
                                   Rng& rng);

Vec to_vec(const StateVector& s);

}  // namespace qmalab::ati
