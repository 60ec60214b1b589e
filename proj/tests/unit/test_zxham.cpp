#include <cmath>

#include "doctest.h"
#include "qmalab/zxham.hpp"

using namespace qmalab;
using namespace qmalab::zx;

TEST_CASE("single Z term ground state") {
  auto h = z_only_instance();
  auto g = ground_state(h);
  CHECK(g.energy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.state.probability(0) + g.state.probability(3) < 1e-12);
}

TEST_CASE("reference instance: singlet has acceptance 1") {
  auto h = reference_instance();
  auto g = ground_state(h);
  CHECK(std::abs(g.energy) < 1e-12);
  // |Psi-> = (|01> - |10>)/sqrt2 up to phase
  CHECK(std::abs(g.state[1]) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(g.state[1] + g.state[2]) < 1e-9);
  CHECK(zxver_accept_probability(h, g.state) == doctest::Approx(1.0));
  auto e = acceptance_operator(h);
  CHECK(expectation(e, g.state) == doctest::Approx(1.0));
  // For full instances E = c I - H with c = sum p = 1.
  Eigen::MatrixXcd diff = e - (Eigen::MatrixXcd::Identity(4, 4) * h.weight_sum() - hamiltonian_matrix(h));
  CHECK(diff.norm() < 1e-12);
}

TEST_CASE("zxver statistics match the acceptance operator") {
  auto h = reference_instance();
  Rng rng(9);
  auto s = sim::StateVector::random(2, rng);
  const double exact = zxver_accept_probability(h, s);
  CHECK(expectation(acceptance_operator(h), s) == doctest::Approx(exact).epsilon(1e-12));
  int acc = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += zxver(h, s, rng);
  CHECK(std::abs(acc / double(n) - exact) < 0.02);
}

TEST_CASE("instance validation and json") {
  CHECK_THROWS_AS(HamiltonianInstance(2, {}), MalformedInput);
  CHECK_THROWS_AS(HamiltonianInstance(2, {{1, 0, Basis::Z, 0, 0.5}}), MalformedInput);
  CHECK_THROWS_AS(HamiltonianInstance(2, {{0, 1, Basis::Z, 0, 0.3}}), MalformedInput);
  CHECK_THROWS_AS(HamiltonianInstance(2, {{0, 1, Basis::Z, 0, 0.5}, {0, 1, Basis::X, 0, 0.4}}), MalformedInput);
  auto j = nlohmann::json::parse(R"({"qubits":2,"terms":[{"i":0,"j":1,"basis":"Z","beta":0,"p":0.5}]})");
  auto h = HamiltonianInstance::from_json(j);
  CHECK(h.to_json() == j);
  CHECK_THROWS_AS(HamiltonianInstance::from_json(nlohmann::json::parse(R"({"qubits":2,"terms":[]})")),
                  MalformedInput);
  CHECK_THROWS_AS(HamiltonianInstance::from_json(nlohmann::json::parse(
                      R"({"qubits":2,"terms":[{"i":0,"j":1,"basis":"Y","beta":0,"p":0.5}]})")),
                  MalformedInput);
}
