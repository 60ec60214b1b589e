#include <cmath>

#include "doctest.h"
#include "qmalab/simstate.hpp"

using namespace qmalab;
using namespace qmalab::sim;
using gf2::BitVector;

namespace {
BasisPredicate identity1{1, [](std::uint64_t v) { return v == 1; }};
StateVector plus() { return StateVector::from_amplitudes(1, {M_SQRT1_2, M_SQRT1_2}); }
}  // namespace

TEST_CASE("measure_zx on single qubits") {
  auto out = measure_zx(plus(), BitVector::ones(1), identity1);
  CHECK(out.prob_accept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(out.post_accept);

  out = measure_zx(StateVector::zero(1), BitVector::ones(1), identity1);
  CHECK(out.prob_accept == doctest::Approx(0.5));
  REQUIRE(out.post_accept);
  CHECK((*out.post_accept)[0].real() == doctest::Approx(M_SQRT1_2));
  CHECK((*out.post_accept)[1].real() == doctest::Approx(-M_SQRT1_2));
}

TEST_CASE("pauli applies Z before X") {
  auto s = StateVector::basis(1, 1);
  apply_pauli(s, BitVector::ones(1), BitVector::ones(1));
  CHECK(s[0].real() == doctest::Approx(-1.0));
  auto t = StateVector::zero(1);
  apply_pauli(t, BitVector::ones(1), BitVector::ones(1));
  CHECK(t[1].real() == doctest::Approx(1.0));
}

TEST_CASE("tensor ordering and caps") {
  auto s = tensor(StateVector::zero(1), StateVector::basis(1, 1));
  CHECK(std::abs(s[2]) == doctest::Approx(1.0));
  CHECK_THROWS_AS(StateVector::zero(23), SizingError);
  CHECK_THROWS_AS(StateVector::from_amplitudes(1, {1.0, 1.0}), MalformedInput);
}

TEST_CASE("coset superposition") {
  auto s = gf2::Subspace::span(3, {BitVector::parse("110")});
  auto st = coset_superposition(s, BitVector::parse("001"));
  CHECK(st.norm() == doctest::Approx(1.0));
  CHECK(std::abs(st[BitVector::parse("001").word()]) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(st[BitVector::parse("111").word()]) == doctest::Approx(M_SQRT1_2));
}

TEST_CASE("gentle measurement bound") {
  Rng rng(3);
  for (int m = 1; m <= 6; ++m) {
    for (int rep = 0; rep < 20; ++rep) {
      auto s = StateVector::random(m, rng);
      std::uint64_t reject = rng.uniform_below(std::uint64_t{1} << m);
      BasisPredicate f{m, [reject](std::uint64_t v) { return v != reject; }};
      auto p = project_predicate(s, f);
      CHECK(std::abs(p.post_one->norm() - 1.0) < 1e-9);
      const double delta = 1 - p.prob_one;
      CHECK(trace_distance(*p.post_one, s) <= 2 * std::sqrt(delta) + 1e-12);
    }
  }
}

TEST_CASE("hadamard is an involution and keeps norm") {
  Rng rng(5);
  auto s = StateVector::random(5, rng);
  auto t = s;
  apply_hadamard(t, BitVector(5, 0b10110));
  CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-12));
  apply_hadamard(t, BitVector(5, 0b10110));
  CHECK(trace_distance(s, t) < 1e-7);
}
