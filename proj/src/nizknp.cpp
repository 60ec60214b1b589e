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

#include "qmalab/nizknp.hpp"

namespace qmalab::nizk {

using crypto::Reader;
using crypto::Writer;

namespace {

Bytes pke_key(const Bytes& pk) {
  Writer w;
  w.str("qmalab/pke-key").bytes(pk);
  return crypto::sha256(w.out());
}

Bytes pk_of(const Bytes& sk) {
  Writer w;
  w.str("qmalab/pke-pk").bytes(sk);
  return crypto::sha256(w.out());
}

// Statement of the compiled language: (x, ct) under pk, witness (w, r).
std::string enc_relation_id(const NpStatement& stmt) { return "enc/" + stmt.relation_id; }

Bytes enc_instance(const Crs& crs, const NpStatement& stmt, const Bytes& ct) {
  Writer w;
  w.bytes(crs.pk).bytes(stmt.instance).bytes(ct);
  return w.take();
}

}  // namespace

PkeKeys pke_gen(Rng& rng) {
  PkeKeys k;
  k.sk = rng.bytes(32);
  k.pk = pk_of(k.sk);
  return k;
}

Bytes pke_enc(const Bytes& pk, const Bytes& m, const Bytes& r) { return crypto::ae_encrypt(pke_key(pk), r, m); }

Bytes pke_dec(const Bytes& sk, const Bytes& ct) { return crypto::ae_decrypt(pke_key(pk_of(sk)), ct); }

TranscriptOracle::TranscriptOracle(Rng& rng) : secret_(rng.bytes(32)) {}

Bytes TranscriptOracle::setup(Rng& rng) const { return rng.bytes(32); }

Bytes TranscriptOracle::tag(const Bytes& crs, const std::string& relation_id, const Bytes& instance) const {
  Writer w;
  w.str("qmalab/nizk-tag").bytes(crs).str(relation_id).bytes(instance);
  return crypto::hmac(secret_, w.out());
}

Bytes TranscriptOracle::prove(const Bytes& crs, const NpStatement& stmt, const Bytes& witness) const {
  if (!stmt.relation || !stmt.relation(stmt.instance, witness)) throw NotAWitness("nizk: relation rejects the witness");
  return tag(crs, stmt.relation_id, stmt.instance);
}

bool TranscriptOracle::verify(const Bytes& crs, const std::string& relation_id, const Bytes& instance,
                              const Bytes& proof) const {
  return proof == tag(crs, relation_id, instance);
}

Bytes TranscriptOracle::sim_token(const Bytes& crs) const {
  Writer w;
  w.str("qmalab/nizk-sim").bytes(crs);
  return crypto::hmac(secret_, w.out());
}

Bytes TranscriptOracle::simulate(const Bytes& crs, const Bytes& token, const std::string& relation_id,
                                 const Bytes& instance) const {
  if (token != sim_token(crs)) throw Error("nizk: invalid simulation trapdoor");
  return tag(crs, relation_id, instance);
}

Bytes Crs::serialize() const {
  Writer w;
  w.bytes(base).bytes(pk);
  return w.take();
}

Crs Crs::parse(const Bytes& b) {
  Reader r(b);
  Crs c;
  c.base = r.bytes();
  c.pk = r.bytes();
  r.expect_done();
  return c;
}

nlohmann::json NpProof::to_json() const { return {{"ct", base64_encode(ct)}, {"inner", base64_encode(inner)}}; }

NpProof NpProof::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ct") || !j.contains("inner") || !j["ct"].is_string() || !j["inner"].is_string())
    throw MalformedInput("nizk: proof JSON needs string fields 'ct' and 'inner'");
  return {base64_decode(j["ct"].get<std::string>()), base64_decode(j["inner"].get<std::string>())};
}

Bytes NpProof::serialize() const {
  Writer w;
  w.bytes(ct).bytes(inner);
  return w.take();
}

NpProof NpProof::parse(const Bytes& b) {
  Reader r(b);
  NpProof p;
  p.ct = r.bytes();
  p.inner = r.bytes();
  r.expect_done();
  return p;
}

std::pair<Crs, Bytes> np_ext0(const TranscriptOracle& o, Rng& rng) {
  Crs crs;
  crs.base = o.setup(rng);
  auto keys = pke_gen(rng);
  crs.pk = keys.pk;
  return {crs, keys.sk};
}

Crs np_setup(const TranscriptOracle& o, Rng& rng) { return np_ext0(o, rng).first; }

std::pair<Crs, SimTrapdoor> np_simgen(const TranscriptOracle& o, Rng& rng) {
  auto [crs, sk] = np_ext0(o, rng);
  return {crs, SimTrapdoor{o.sim_token(crs.base), sk}};
}

NpProof np_prove(const TranscriptOracle& o, const Crs& crs, const NpStatement& stmt, const Bytes& witness, Rng& rng) {
  if (!stmt.relation || !stmt.relation(stmt.instance, witness)) throw NotAWitness("nizk: relation rejects the witness");
  const Bytes r = rng.bytes(crypto::kNonce);
  NpProof proof;
  proof.ct = pke_enc(crs.pk, witness, r);
  NpStatement inner;
  inner.relation_id = enc_relation_id(stmt);
  inner.instance = enc_instance(crs, stmt, proof.ct);
  const Bytes pk = crs.pk;
  const Relation rel = stmt.relation;
  const Bytes x = stmt.instance;
  inner.relation = [pk, rel, x](const Bytes& inst, const Bytes& wr) {
    Reader rd(wr);
    const Bytes w = rd.bytes(), rr = rd.bytes();
    Reader ri(inst);
    ri.bytes();
    ri.bytes();
    const Bytes ct = ri.bytes();
    return rel(x, w) && pke_enc(pk, w, rr) == ct;
  };
  Writer wr;
  wr.bytes(witness).bytes(r);
  proof.inner = o.prove(crs.base, inner, wr.out());
  return proof;
}

bool np_verify(const TranscriptOracle& o, const Crs& crs, const NpStatement& stmt, const NpProof& proof) {
  return o.verify(crs.base, enc_relation_id(stmt), enc_instance(crs, stmt, proof.ct), proof.inner);
}

Bytes np_ext1(const Crs& crs, const Bytes& sk, const NpStatement&, const NpProof& proof) {
  if (pk_of(sk) != crs.pk) throw ExtractionError("nizk: trapdoor does not match the crs");
  try {
    return pke_dec(sk, proof.ct);
  } catch (const IntegrityError& e) {
    throw ExtractionError(std::string("nizk: witness ciphertext does not decrypt: ") + e.what());
  }
}

NpProof np_simulate(const TranscriptOracle& o, const Crs& crs, const SimTrapdoor& td, const NpStatement& stmt,
                    Rng& rng, const Bytes& payload) {
  NpProof proof;
  proof.ct = pke_enc(crs.pk, payload, rng.bytes(crypto::kNonce));
  proof.inner = o.simulate(crs.base, td.token, enc_relation_id(stmt), enc_instance(crs, stmt, proof.ct));
  return proof;
}

}  // namespace qmalab::nizk
