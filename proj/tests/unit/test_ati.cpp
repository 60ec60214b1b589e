#include <cmath>

#include "doctest.h"
#include "qmalab/ati.hpp"
#include "qmalab/zxham.hpp"

using namespace qmalab;
using namespace qmalab::ati;

namespace {

MixturePOVM term_mixture(const zx::HamiltonianInstance& h) {
  std::vector<std::pair<double, Eigen::MatrixXcd>> parts;
  const auto id = Eigen::MatrixXcd::Identity(1 << h.qubits(), 1 << h.qubits());
  for (const auto& t : h.terms()) parts.emplace_back(t.p, id - zx::term_projector(h.qubits(), t));
  return MixturePOVM::from_dense(parts);
}

}  // namespace

TEST_CASE("mixture of term acceptances equals the acceptance operator") {
  auto h = zx::reference_instance();
  auto m = term_mixture(h);
  CHECK((mixture_operator(m) - zx::acceptance_operator(h)).norm() < 1e-12);
}

TEST_CASE("threshold measurement is projective and respects the cutoff") {
  Rng rng(8);
  auto h = zx::HamiltonianInstance(3, {{0, 1, zx::Basis::Z, 0, 1.0 / 6}, {1, 2, zx::Basis::X, 1, 1.0 / 6},
                                       {0, 2, zx::Basis::Z, 1, 1.0 / 6}, {0, 2, zx::Basis::X, 0, 1.0 / 6}});
  auto m = term_mixture(h);
  auto spec = spectral_decomposition(m);
  const double gamma = 0.4;
  for (int rep = 0; rep < 5; ++rep) {
    auto s = sim::StateVector::random(3, rng);
    CHECK(repeat_projectivity_check(spec, s, gamma, 100, rng) == 1.0);
    auto out = threshold_measure(spec, s, gamma, rng);
    REQUIRE(out.post);
    if (out.accept) CHECK(exact_acceptance(m, *out.post) >= cutoff(gamma) - 1e-9);
    else CHECK(exact_acceptance(m, *out.post) < cutoff(gamma));
  }
}

TEST_CASE("compressed support gives the same spectrum") {
  Rng rng(9);
  auto h = zx::reference_instance();
  auto dense = term_mixture(h);
  auto compressed = term_mixture(h);
  compressed.set_support(orthonormal_range([&](const Vec& v) { return dense.apply(v); }, 4, 2, rng));
  auto a = spectral_decomposition(dense), b = spectral_decomposition(compressed);
  auto s = sim::StateVector::random(2, rng);
  Rng r1(1), r2(1);
  CHECK(threshold_measure(a, s, 0.3, r1).prob_accept == doctest::Approx(threshold_measure(b, s, 0.3, r2).prob_accept));
}

TEST_CASE("global rejection never accepts") {
  Rng rng(10);
  MixturePOVM m(8);
  m.add(1.0, [](const Vec& v) -> Vec { return Vec::Zero(v.size()); });
  auto spec = spectral_decomposition(m);
  for (int i = 0; i < 50; ++i) CHECK_FALSE(threshold_measure(spec, sim::StateVector::random(3, rng), 0.2, rng).accept);
}

TEST_CASE("sampled estimate tracks the exact acceptance") {
  Rng rng(12);
  auto m = term_mixture(zx::reference_instance());
  auto s = sim::StateVector::random(2, rng);
  CHECK(std::abs(sampled_acceptance(m, s, 20000, rng) - exact_acceptance(m, s)) < 0.02);
}
