#include "doctest.h"
#include "qmalab/pcobf.hpp"

using namespace qmalab;
using namespace qmalab::obf;

namespace {

Phi any_circuit() {
  return {"any", [](const circ::CircuitDesc&) { return true; }};
}

BitVector bits(int len, std::uint64_t w) { return BitVector(len, w); }

}  // namespace

TEST_CASE("ideal registry") {
  Rng rng(1);
  IdealRegistry reg;
  auto c = circ::random_gate_circuit(3, 6, 2, rng);
  auto h = ideal_obf(reg, c, rng);
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(ideal_eval(reg, h, bits(3, x)) == c.eval(bits(3, x)));
  CHECK_THROWS_AS(ideal_eval(reg, Bytes(16, 0), bits(3, 0)), MalformedInput);
  CHECK(reg.obfuscate(c, Bytes{1, 2}) == reg.obfuscate(c, Bytes{1, 2}));
}

TEST_CASE("qpro handles") {
  Rng rng(2);
  QPrOSim q(16, rng);
  for (std::uint64_t k : {0ULL, 1ULL, 12345ULL, 65535ULL}) {
    CHECK(q.invert(3, q.gen(3, k)) == k);
    CHECK(q.eval(3, q.gen(3, k), Bytes{9}, 20) == QPrOSim::prf(k, Bytes{9}, 20));
  }
  // Malformed handles evaluate deterministically under a derived key.
  CHECK(q.eval(0, 1ULL << 20, Bytes{1}, 8) == q.eval(0, 1ULL << 20, Bytes{1}, 8));
  const auto h = q.gen(0, 77);
  q.override_handle(0, h, 78);
  CHECK(q.eval(0, h, Bytes{1}, 8) == QPrOSim::prf(78, Bytes{1}, 8));
  CHECK_THROWS_AS(QPrOSim(7, rng), MalformedInput);
}

TEST_CASE("fe authenticates ciphertexts") {
  Rng rng(3);
  auto [pk, sk] = fe_gen({"rev", [](const Bytes& z) { return Bytes(z.rbegin(), z.rend()); }}, rng.bytes(32));
  auto ct = fe_enc(pk, Bytes{1, 2, 3}, rng.bytes(16));
  CHECK(fe_dec(sk, ct) == Bytes({3, 2, 1}));
  ct.back() ^= 1;
  CHECK_THROWS_AS(fe_dec(sk, ct), IntegrityError);
  auto [pk2, sk2] = fe_gen({"id", [](const Bytes& z) { return z; }}, rng.bytes(32));
  CHECK_THROWS_AS(fe_dec(sk2, fe_enc(pk, Bytes{1}, rng.bytes(16))), IntegrityError);
}

TEST_CASE("jllw correctness, determinism and tamper detection") {
  Rng rng(4);
  QPrOSim q(64, rng);
  for (int depth = 1; depth <= 4; ++depth) {
    auto c = circ::random_gate_circuit(depth, 8, 3, rng);
    auto pairs = sample_key_handle_pairs(q, 1, depth, rng);
    const Bytes r = rng.bytes(16);
    auto o = jllw_obfuscate(c, pairs, 1, r);
    CHECK(o.serialize() == jllw_obfuscate(c, pairs, 1, r).serialize());
    auto parsed = JllwObfuscation::parse(o.serialize());
    for (std::uint64_t x = 0; x < (1ULL << depth); ++x) {
      CHECK(jllw_eval(q, o, bits(depth, x)) == c.eval(bits(depth, x)));
      CHECK(jllw_eval(q, parsed, bits(depth, x)) == c.eval(bits(depth, x)));
    }
    CHECK_THROWS_AS(jllw_eval(q, o, bits(depth, 0), PadTamper{depth - 1, 5}), IntegrityError);
    CHECK_THROWS_AS(jllw_eval(q, o, bits(depth, 0), PadTamper{0, 100}), IntegrityError);
  }
  CHECK_THROWS_AS(jllw_obfuscate(circ::random_gate_circuit(6, 2, 1, rng), sample_key_handle_pairs(q, 1, 6, rng), 1,
                                 rng.bytes(16)),
                  SizingError);
}

TEST_CASE("jllw simulation-mode leaves and hybrid rejection") {
  Rng rng(5);
  QPrOSim q(64, rng);
  auto c = circ::random_gate_circuit(2, 4, 2, rng);
  auto o = jllw_obfuscate(c, sample_key_handle_pairs(q, 1, 2, rng), 1, rng.bytes(16));
  const BitVector y = bits(5, 0b10110);
  auto leaf = fe_enc(fe_public_key(o.sks[2]), jllw_plaintext(JllwFlag::Sim, bits(2, 1), jllw_sim_leaf_info(y)),
                     rng.bytes(16));
  Bytes out = fe_dec(o.sks[2], leaf);
  crypto::Reader r(out);
  CHECK(r.u32() == 5);
  CHECK(r.u64() == y.word());
  auto sim = fe_enc(fe_public_key(o.sks[0]),
                    jllw_plaintext(JllwFlag::Sim, BitVector(), jllw_sim_node_info(7, {Bytes{1}, Bytes{2}})),
                    rng.bytes(16));
  CHECK(fe_dec(o.sks[0], sim).size() == 14);
  auto hyb = fe_enc(fe_public_key(o.sks[0]), jllw_plaintext(JllwFlag::Hyb, BitVector(), {}), rng.bytes(16));
  CHECK_THROWS_AS(fe_dec(o.sks[0], hyb), UnsupportedMode);
}

TEST_CASE("cut-and-choose obfuscation round trip") {
  for (auto backend : {Backend::Ideal, Backend::Jllw}) {
    Rng rng(6);
    auto w = OracleWorld::create(6);
    auto [pp, td] = pc_ext0(w, rng);
    auto c = circ::random_gate_circuit(3, 6, 2, rng);
    PcParams params{8, backend};
    auto o = pc_obfuscate(w, pp, any_circuit(), c, params, rng);
    if (o.unopened.empty()) continue;
    auto rep = pc_verify(w, pp, any_circuit(), o);
    CHECK(rep.ok);
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(pc_eval(w, o, bits(3, x)) == c.eval(bits(3, x)));
    CHECK(pc_extract(w, pp, td, any_circuit(), o).canonical() == c.canonical());

    auto again = PcObfuscation::from_json(nlohmann::json::parse(o.to_json().dump()));
    CHECK(pc_verify(w, pp, any_circuit(), again).ok);

    // Tampering with a commitment of an opened bundle.
    if (!o.opened.empty()) {
      auto bad = o;
      bad.opened.begin()->second.r[0] ^= 1;
      auto r2 = pc_verify(w, pp, any_circuit(), bad);
      CHECK_FALSE(r2.ok);
      CHECK(r2.diagnostics.front() == "commitment_mismatch");
    }
    // Swapping in another program breaks the proof.
    auto swapped = o;
    auto other = circ::random_gate_circuit(3, 6, 2, rng);
    swapped.unopened.begin()->second = obf::ideal_obf(*w.ideal, other, rng);
    CHECK_FALSE(pc_verify(w, pp, any_circuit(), swapped).ok);
    CHECK_THROWS_AS(pc_extract(w, pp, td, any_circuit(), swapped), ExtractionError);
  }
}

TEST_CASE("predicate and corruption handling") {
  Rng rng(7);
  auto w = OracleWorld::create(7);
  auto pp = pc_setup(w, rng);
  auto c = circ::random_gate_circuit(2, 3, 1, rng);
  Phi never{"never", [](const circ::CircuitDesc&) { return false; }};
  CHECK_THROWS_AS(pc_obfuscate(w, pp, never, c, {}, rng), NotAWitness);
  int rejected = 0, trials = 40;
  for (int i = 0; i < trials; ++i) {
    auto o = pc_obfuscate(w, pp, any_circuit(), c, {}, rng, PcOptions{{0, 1, 2, 3, 4, 5, 6, 7}});
    auto rep = pc_verify(w, pp, any_circuit(), o);
    if (!rep.ok) ++rejected;
    if (!o.opened.empty())
      CHECK(std::find(rep.diagnostics.begin(), rep.diagnostics.end(), "handle_mismatch") != rep.diagnostics.end());
  }
  CHECK(rejected == trials);
}

TEST_CASE("pc_eval majority and empty set") {
  Rng rng(8);
  auto w = OracleWorld::create(8);
  auto pp = pc_setup(w, rng);
  auto c = circ::random_gate_circuit(2, 3, 1, rng);
  auto o = pc_obfuscate(w, pp, any_circuit(), c, {}, rng);
  auto all_open = o;
  all_open.unopened.clear();
  CHECK_THROWS_AS(pc_eval(w, all_open, bits(2, 0)), Error);
  // Ties resolve toward the smallest unopened index.
  auto tie = o;
  tie.unopened.clear();
  tie.unopened[1] = w.ideal->obfuscate(circ::null_circuit(2, 1), Bytes{1});
  tie.unopened[5] = w.ideal->obfuscate(circ::CircuitDesc(std::make_shared<circ::TruthTable>(
                                           2, 1, std::vector<std::uint64_t>{1, 1, 1, 1})), Bytes{2});
  CHECK(pc_eval(w, tie, bits(2, 3)) == bits(1, 0));
}
