#include <cmath>

#include "doctest.h"
#include "qmalab/csa.hpp"

using namespace qmalab;
using namespace qmalab::csa;

TEST_CASE("encoded measurements equal logical ones") {
  Rng rng(1);
  for (int n = 1; n <= 2; ++n) {
    auto key = keygen(1, n, rng);
    const std::uint64_t tables = 1ULL << (1u << n);
    for (std::uint64_t th = 0; th < (1ULL << n); ++th)
      for (std::uint64_t table = 0; table < tables; ++table) {
        BasisPredicate f{n, [table](std::uint64_t m) { return (table >> m) & 1; }};
        CHECK(logical_measure_deviation(key, gf2::BitVector(n, th), f) <= 1e-9);
      }
  }
}

TEST_CASE("codespace projector identity") {
  Rng rng(2);
  for (int rep = 0; rep < 5; ++rep) CHECK(codespace_projector_check(keygen(1, 1, rng)) <= 1e-9);
  CHECK(codespace_projector_check(keygen(1, 2, rng)) <= 1e-9);
  CHECK_THROWS_AS(codespace_projector_check(keygen(2, 3, rng)), SizingError);
}

TEST_CASE("logical |+> in the Hadamard basis lands in s_hat + z") {
  Rng rng(3);
  auto key = keygen(2, 1, rng);
  auto plus = sim::StateVector::from_amplitudes(1, {M_SQRT1_2, M_SQRT1_2});
  auto e = enc(key, plus);
  sim::apply_hadamard(e.mutable_amps(), key.hadamard_mask(gf2::BitVector::ones(1)));
  const auto& b = key.blocks()[0];
  for (std::size_t v = 0; v < e.dim(); ++v)
    if (e.probability(v) > 1e-12) CHECK(b.s_hat.contains_word(v ^ b.z.word()));
}

TEST_CASE("enc_adjoint round trip and leakage rejection") {
  Rng rng(4);
  auto key = keygen(1, 2, rng);
  auto psi = sim::StateVector::random(2, rng);
  auto back = enc_adjoint(key, enc(key, psi));
  CHECK(sim::trace_distance(back, psi) < 1e-7);
  auto junk = sim::StateVector::random(6, rng);
  CHECK(codespace_weight(key, junk) < 1.0);
  CHECK_THROWS_AS(enc_adjoint(key, junk), IntegrityError);
}

TEST_CASE("ver accepts codewords, rejects random Paulis") {
  Rng rng(5);
  auto key = keygen(1, 1, rng);
  auto e = enc(key, sim::StateVector::random(1, rng));
  for (int th = 0; th < 2; ++th) {
    auto v = ver_predicate(key, gf2::BitVector(1, th));
    auto rot = e;
    sim::apply_hadamard(rot.mutable_amps(), key.hadamard_mask(gf2::BitVector(1, th)));
    CHECK(sim::project_predicate(rot, v).prob_one == doctest::Approx(1.0));
  }
}

TEST_CASE("key json round trip") {
  Rng rng(6);
  auto key = keygen(2, 2, rng);
  auto j = key.to_json();
  auto k2 = CSAKey::from_json(nlohmann::json::parse(j.dump()));
  CHECK(k2.to_json() == j);
  j["blocks"][0]["delta"] = j["blocks"][0]["S"]["basis"][0];
  CHECK_THROWS_AS(CSAKey::from_json(j), MalformedInput);
}
