#include "doctest.h"
#include "qmalab/nizknp.hpp"

using namespace qmalab;
using namespace qmalab::nizk;

namespace {

// x = SHA-256(w)
NpStatement preimage_statement(const Bytes& x) {
  return {"sha256-preimage", x, [](const Bytes& inst, const Bytes& w) { return crypto::sha256(w) == inst; }};
}

}  // namespace

TEST_CASE("pke round trip and integrity") {
  Rng rng(1);
  auto k = pke_gen(rng);
  Bytes m{1, 2, 3};
  auto ct = pke_enc(k.pk, m, rng.bytes(16));
  CHECK(pke_dec(k.sk, ct) == m);
  ct[20] ^= 1;
  CHECK_THROWS_AS(pke_dec(k.sk, ct), IntegrityError);
}

TEST_CASE("setup and ext0 produce the same crs under one seed") {
  Rng o(0);
  TranscriptOracle oracle(o);
  Rng a(5), b(5);
  CHECK(np_setup(oracle, a) == np_ext0(oracle, b).first);
}

TEST_CASE("prove, verify, extract") {
  Rng rng(2);
  TranscriptOracle oracle(rng);
  auto [crs, sk] = np_ext0(oracle, rng);
  Bytes w = rng.bytes(12);
  auto st = preimage_statement(crypto::sha256(w));
  auto proof = np_prove(oracle, crs, st, w, rng);
  CHECK(np_verify(oracle, crs, st, proof));
  CHECK(np_ext1(crs, sk, st, proof) == w);
  CHECK_THROWS_AS(np_prove(oracle, crs, st, rng.bytes(12), rng), NotAWitness);

  auto j = proof.to_json();
  CHECK(np_verify(oracle, crs, st, NpProof::from_json(nlohmann::json::parse(j.dump()))));
  CHECK_THROWS_AS(NpProof::from_json(nlohmann::json{{"ct", 3}}), MalformedInput);

  // Ciphertext swap: re-encrypt something else under the same tag.
  NpProof forged = proof;
  forged.ct = pke_enc(crs.pk, rng.bytes(12), rng.bytes(16));
  CHECK_FALSE(np_verify(oracle, crs, st, forged));
  // Another statement.
  CHECK_FALSE(np_verify(oracle, crs, preimage_statement(crypto::sha256(rng.bytes(4))), proof));
}

TEST_CASE("simulated proofs verify; a broken ciphertext fails extraction") {
  Rng rng(3);
  TranscriptOracle oracle(rng);
  auto [crs, td] = np_simgen(oracle, rng);
  auto st = preimage_statement(crypto::sha256(rng.bytes(8)));
  auto proof = np_simulate(oracle, crs, td, st, rng);
  CHECK(np_verify(oracle, crs, st, proof));
  // Fault injection: a verifying proof whose ciphertext is garbage.
  NpProof bad;
  bad.ct = rng.bytes(60);
  bad.inner = oracle.simulate(crs.base, td.token, "enc/" + st.relation_id, [&] {
    crypto::Writer w;
    w.bytes(crs.pk).bytes(st.instance).bytes(bad.ct);
    return w.take();
  }());
  CHECK(np_verify(oracle, crs, st, bad));
  CHECK_THROWS_AS(np_ext1(crs, td.sk, st, bad), ExtractionError);
  CHECK_THROWS_AS(oracle.simulate(crs.base, rng.bytes(32), "x", {}), Error);
}
