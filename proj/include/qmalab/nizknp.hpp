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

// NIZK for NP with straight-line extraction: the "encrypt the witness"
// compiler over a toy PKE, on top of an idealized base NIZK realized as a
// transcript oracle (an HMAC under a secret only the oracle holds).

#pragma once

#include <functional>
#include <string>

#include "json.hpp"
#include "qmalab/crypto.hpp"

namespace qmalab::nizk {

struct PkeKeys {
  Bytes pk, sk;
};
PkeKeys pke_gen(Rng& rng);
// r is the 16-byte encryption randomness.
Bytes pke_enc(const Bytes& pk, const Bytes& m, const Bytes& r);
Bytes pke_dec(const Bytes& sk, const Bytes& ct);

using Relation = std::function<bool(const Bytes& instance, const Bytes& witness)>;

struct NpStatement {
  std::string relation_id;
  Bytes instance;
  Relation relation;
};

// Idealized base NIZK. Proofs are oracle-issued tags bound to
// (crs, relation id, instance); the oracle checks the relation before
// issuing one. A simulation token registered for a crs lets its holder get
// tags without a witness.
class TranscriptOracle {
 public:
  explicit TranscriptOracle(Rng& rng);

  Bytes setup(Rng& rng) const;
  Bytes prove(const Bytes& crs, const NpStatement& stmt, const Bytes& witness) const;
  bool verify(const Bytes& crs, const std::string& relation_id, const Bytes& instance, const Bytes& proof) const;
  Bytes sim_token(const Bytes& crs) const;
  Bytes simulate(const Bytes& crs, const Bytes& token, const std::string& relation_id, const Bytes& instance) const;

 private:
  Bytes tag(const Bytes& crs, const std::string& relation_id, const Bytes& instance) const;
  Bytes secret_;
};

struct Crs {
  Bytes base;  // uniform crs of the base NIZK
  Bytes pk;
  Bytes serialize() const;
  static Crs parse(const Bytes& b);
  bool operator==(const Crs&) const = default;
};

struct NpProof {
  Bytes ct;
  Bytes inner;
  nlohmann::json to_json() const;
  static NpProof from_json(const nlohmann::json& j);
  Bytes serialize() const;
  static NpProof parse(const Bytes& b);
};

struct SimTrapdoor {
  Bytes token;
  Bytes sk;  // also allows extraction in simulation mode
};

Crs np_setup(const TranscriptOracle& o, Rng& rng);
// Same distribution (and, under the same seed, the same bytes) as np_setup.
std::pair<Crs, Bytes> np_ext0(const TranscriptOracle& o, Rng& rng);
std::pair<Crs, SimTrapdoor> np_simgen(const TranscriptOracle& o, Rng& rng);

// Throws NotAWitness when the relation rejects.
NpProof np_prove(const TranscriptOracle& o, const Crs& crs, const NpStatement& stmt, const Bytes& witness, Rng& rng);
bool np_verify(const TranscriptOracle& o, const Crs& crs, const NpStatement& stmt, const NpProof& proof);
// Decrypts the witness; throws ExtractionError if the ciphertext is broken.
Bytes np_ext1(const Crs& crs, const Bytes& sk, const NpStatement& stmt, const NpProof& proof);
// Simulated proof; the ciphertext encrypts `payload` (zeros by default).
NpProof np_simulate(const TranscriptOracle& o, const Crs& crs, const SimTrapdoor& td, const NpStatement& stmt,
                    Rng& rng, const Bytes& payload = Bytes(32, 0));

}  // namespace qmalab::nizk
