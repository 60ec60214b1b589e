#include <cmath>

#include "doctest.h"
#include "qmalab/permver.hpp"

using namespace qmalab;
using namespace qmalab::permver;

TEST_CASE("recommended_k") {
  CHECK(recommended_k(2, 1.0, 0.5, 2) == 106);
  CHECK(recommended_k(1, 1.0, 0.0, 0) == 4);
  CHECK_THROWS_AS(recommended_k(1, 0.5, 0.5, 0), MalformedInput);
}

TEST_CASE("thresholds from energy") {
  auto t = thresholds_from_energy(0.0, 0.5, 1.0);
  CHECK(t.a == doctest::Approx(0.5));
  CHECK(t.b == doctest::Approx(0.25));
  CHECK_THROWS_AS(thresholds_from_energy(0.5, 0.5, 1.0), MalformedInput);
}

TEST_CASE("build list") {
  auto v = build(zx::z_only_instance(), 4, {1.0, 0.5});
  CHECK(v.len() == 2);
  CHECK_THROWS_AS(build(zx::z_only_instance(), 1, {1.0, 0.5}), MalformedInput);
  auto r = build(zx::reference_instance(), 2, {1.0, 0.5});
  REQUIRE(r.len() == 2);
  CHECK(r.list()[0] == 0);
  CHECK(r.list()[1] == 1);
}

TEST_CASE("identity permutation keeps list order") {
  auto v = build(zx::reference_instance(), 4, {1.0, 0.5});
  std::vector<std::size_t> id{0, 1, 2, 3};
  auto s = samp_perm(v, id);
  // List is [Z, Z, X, X]: the last two registers are measured in X.
  CHECK(s.theta.str() == "00001111");
  CHECK_THROWS_AS(samp_perm(v, std::vector<std::size_t>{0, 0, 1, 2}), MalformedInput);
}

TEST_CASE("bernstein tails") {
  CHECK(bernstein_tail(1, 1, 100, 50) == doctest::Approx(3.126e-3).epsilon(1e-3));
  CHECK(bernstein_tail(4, 1, 100, 0.1) == 1.0);  // clipped
  CHECK(matrix_bernstein_tail(1, 1, 100, 1, 40) == doctest::Approx(2 * std::exp(-800.0 / (100 + 40.0 / 3))));
}

TEST_CASE("product and entangled verification agree with the exact law") {
  Rng rng(21);
  auto v = build(zx::reference_instance(), 4, {1.0, 0.5});
  auto copy = sim::StateVector::random(2, rng);
  const double exact = accept_probability_product(v, copy);
  const int n = 4000;
  int prod = 0, ent = 0;
  auto witness = copy;
  for (std::size_t i = 1; i < v.len(); ++i) witness = sim::tensor(witness, copy);
  for (int i = 0; i < n; ++i) {
    prod += verify_product(v, copy, rng);
    ent += verify_entangled(v, witness, rng);
  }
  CHECK(std::abs(prod / double(n) - exact) < 0.03);
  CHECK(std::abs(ent / double(n) - exact) < 0.03);
}

TEST_CASE("honest witness always passes (strong completeness)") {
  auto h = zx::reference_instance();
  auto v = build(h, 6, {1.0, 0.5});
  auto g = zx::ground_state(h);
  CHECK(accept_probability_product(v, g.state) == doctest::Approx(1.0));
  CHECK(hoeffding_delta(v) == doctest::Approx(2 * std::exp(-2 * 1.5 * 1.5 / 6)));
  CHECK(binomial_upper_tail(6, 0.5, 4.5) == doctest::Approx(7.0 / 64));
}
