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

#include <algorithm>
#include <chrono>
#include <set>

#include "doctest.h"
#include "qmalab/protocol.hpp"

using namespace qmalab;
using namespace qmalab::protocol;
using gf2::BitVector;

namespace {

StateVector singlet() {
  const double r = 1 / std::sqrt(2.0);
  return StateVector::from_amplitudes(2, {0, r, -r, 0});
}

}  // namespace

TEST_CASE("prg and seeded permutations") {
  CHECK(prg_expand(Bytes{1}, 40) == prg_expand(Bytes{1}, 40));
  CHECK(prg_expand(Bytes{1}, 40) != prg_expand(Bytes{2}, 40));
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t r = 0; r < 256; ++r) {
    auto p = permutation_for_seed(4, r);
    std::vector<std::size_t> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3});
    seen.insert(p);
  }
  CHECK(seen.size() == 24);
}

TEST_CASE("ver-m circuit semantics") {
  Rng rng(3);
  Config cfg;
  const auto v = make_verifier(zx::reference_instance(), cfg);
  auto key = csa::keygen(1, v.total_qubits(), rng);
  auto c = m_circuit(key, v, cfg.prg_seed_bits);
  CHECK(c.input_arity() == 1 + 8 + 12);
  const auto codec = circ::CircuitDesc::decode(c.canonical());
  CHECK(codec.canonical() == c.canonical());
  CHECK(phi_for(v, cfg).test(c));
  CHECK_FALSE(phi_for(v, cfg).test(null_m_circuit(key, v, cfg.prg_seed_bits)));
  Config other = cfg;
  other.thresholds.b = 0.25;
  CHECK_FALSE(phi_for(make_verifier(zx::reference_instance(), other), other).test(c));
  // sel = 0 reproduces Ver_{k, theta}.
  for (std::uint64_t theta : {0ULL, 15ULL, 5ULL}) {
    auto pred = csa::ver_predicate(key, BitVector(4, theta));
    for (std::uint64_t s = 0; s < 4096; s += 7)
      CHECK(c.eval(BitVector(21, (theta << 1) | (s << 9))).get(0) == pred.fn(s));
  }
}

TEST_CASE("honest proof is accepted and extracts the witness") {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(11);
  auto world = obf::OracleWorld::create(5);
  const auto h = zx::reference_instance();
  Config cfg;
  auto [crs, td] = ext0(world, rng);
  auto proof = prove(world, crs, h, singlet(), cfg, rng);
  CHECK(proof.state.num_qubits() == 12);
  auto out = verify(world, crs, h, proof, cfg, rng);
  CHECK(out.accept);
  CHECK(out.prob_accept == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.eigenvalue == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(out.residual);
  auto w = ext1(world, crs, td, h, *out.residual, cfg);
  const auto expect = sim::tensor(singlet(), singlet());
  CHECK(std::norm(w.inner(expect)) == doctest::Approx(1.0).epsilon(1e-9));
  for (double a : per_copy_acceptance(h, w)) CHECK(a == doctest::Approx(1.0));
  CHECK(family_acceptance(make_verifier(h, cfg), expect, cfg) == doctest::Approx(1.0));
  // JSON round trip keeps the proof verifiable.
  auto again = Proof::from_json(nlohmann::json::parse(proof.to_json().dump()));
  CHECK(verify(world, crs, h, again, cfg, rng).accept);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("honest round trip " << secs << " s");
}

TEST_CASE("bad witnesses and tampered proofs") {
  Rng rng(12);
  auto world = obf::OracleWorld::create(6);
  const auto h = zx::reference_instance();
  Config cfg;
  auto crs = setup(world, rng);
  // |00> has acceptance 1/2 per copy; the threshold rejects it with high weight.
  auto bad = prove(world, crs, h, StateVector::zero(2), cfg, rng);
  auto out = verify(world, crs, h, bad, cfg, rng);
  CHECK(out.prob_accept < 0.5);

  auto proof = prove(world, crs, h, singlet(), cfg, rng);
  auto broken = proof;
  broken.obf.commitments[0][0] ^= 1;
  auto r = verify(world, crs, h, broken, cfg, rng);
  CHECK_FALSE(r.accept);
  CHECK_FALSE(r.diagnostics.empty());
  auto small = proof;
  small.state = StateVector::zero(10);
  CHECK(verify(world, crs, h, small, cfg, rng).diagnostics == std::vector<std::string>{"state_size_mismatch"});
}

TEST_CASE("simulated proofs verify without a witness") {
  Rng rng(13);
  auto world = obf::OracleWorld::create(7);
  const auto h = zx::reference_instance();
  Config cfg;
  auto s = simulate(world, h, cfg, rng);
  auto out = verify(world, s.crs, h, s.proof, cfg, rng);
  CHECK(out.accept);
  CHECK(out.prob_accept == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sizing and config validation") {
  Rng rng(14);
  auto world = obf::OracleWorld::create(8);
  Config cfg;
  cfg.k = 4;
  auto crs = setup(world, rng);
  CHECK_THROWS_AS(prove(world, crs, zx::reference_instance(), singlet(), cfg, rng), SizingError);
  Config bad;
  bad.gamma = 0.4;
  CHECK_THROWS_AS(bad.validate(), MalformedInput);
  CHECK(Config::from_json(Config{}.to_json()).to_json() == Config{}.to_json());
}
