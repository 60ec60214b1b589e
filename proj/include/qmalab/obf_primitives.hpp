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

// Oracle-model primitives the obfuscators are built from: an ideal
// obfuscation registry, a simulated quantum-accessible pseudorandom oracle
// (QPrO), and a toy one-key functional encryption scheme.

#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "qmalab/circuit.hpp"

namespace qmalab::obf {

using circ::CircuitDesc;
using gf2::BitVector;

inline constexpr std::size_t kHandleBytes = 16;

// Ideal obfuscation: the obfuscated program is an opaque handle; evaluation
// is an oracle query. The handle is a hash of (C, randomness), so obfuscating
// the same circuit with the same randomness reproduces the same handle.
class IdealRegistry {
 public:
  Bytes obfuscate(const CircuitDesc& c, const Bytes& randomness);
  BitVector eval(const Bytes& handle, const BitVector& x) const;
  int input_arity(const Bytes& handle) const;
  bool contains(const Bytes& handle) const;

 private:
  const CircuitDesc& lookup(const Bytes& handle) const;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, CircuitDesc> table_;
};

Bytes ideal_obf(IdealRegistry& reg, const CircuitDesc& c, Rng& rng);
BitVector ideal_eval(const IdealRegistry& reg, const Bytes& handle, const BitVector& x);

// QPrO: per instance, a secret permutation pi maps PRF keys to handles;
// Eval(h, x) = F(pi^{-1}(h), x). Handles with bits above key_bits are
// malformed and evaluate under a fresh key derived from the handle.
class QPrOSim {
 public:
  QPrOSim(int key_bits, Rng& rng);

  int key_bits() const { return key_bits_; }
  std::uint64_t key_mask() const;
  std::uint64_t gen(std::size_t instance, std::uint64_t key) const;
  std::uint64_t invert(std::size_t instance, std::uint64_t handle) const;
  Bytes eval(std::size_t instance, std::uint64_t handle, const Bytes& x, std::size_t len) const;

  // QPrO[h -> k]: from now on Eval(h, .) uses key k.
  void override_handle(std::size_t instance, std::uint64_t handle, std::uint64_t key);

  // The public PRF family F.
  static Bytes prf(std::uint64_t key, const Bytes& x, std::size_t len);

 private:
  std::uint64_t round(std::size_t instance, int r, std::uint64_t half) const;
  int key_bits_;
  Bytes secret_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> overrides_;
};

// Toy one-key FE: the master secret is embedded in both keys, ciphertexts
// are authenticated encryptions of the plaintext. Enc takes its 16 bytes of
// randomness explicitly.
struct FeFunction {
  std::string id;
  std::function<Bytes(const Bytes&)> fn;
};

struct FePublicKey {
  Bytes key_id;
  Bytes secret;
};

struct FeSecretKey {
  Bytes key_id;
  Bytes secret;
  FeFunction f;
};

// `seed` (32 bytes) is the master secret.
std::pair<FePublicKey, FeSecretKey> fe_gen(FeFunction f, const Bytes& seed);
Bytes fe_enc(const FePublicKey& pk, const Bytes& z, const Bytes& r);
// Throws IntegrityError on key mismatch or a broken tag.
Bytes fe_dec(const FeSecretKey& sk, const Bytes& ct);
FePublicKey fe_public_key(const FeSecretKey& sk);

}  // namespace qmalab::obf
