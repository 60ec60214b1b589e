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

#include "qmalab/obf_primitives.hpp"

#include <mutex>

namespace qmalab::obf {

using crypto::Writer;

namespace {

std::string handle_key(const Bytes& h) { return std::string(h.begin(), h.end()); }

}  // namespace

Bytes IdealRegistry::obfuscate(const CircuitDesc& c, const Bytes& randomness) {
  Writer w;
  w.str("qmalab/ideal-obf").bytes(c.canonical()).bytes(randomness);
  Bytes h = crypto::sha256(w.out());
  h.resize(kHandleBytes);
  std::unique_lock lock(mu_);
  table_.emplace(handle_key(h), c);
  return h;
}

const CircuitDesc& IdealRegistry::lookup(const Bytes& handle) const {
  auto it = table_.find(handle_key(handle));
  if (it == table_.end()) throw MalformedInput("ideal: unknown handle");
  return it->second;
}

BitVector IdealRegistry::eval(const Bytes& handle, const BitVector& x) const {
  std::shared_lock lock(mu_);
  return lookup(handle).eval(x);
}

int IdealRegistry::input_arity(const Bytes& handle) const {
  std::shared_lock lock(mu_);
  return lookup(handle).input_arity();
}

bool IdealRegistry::contains(const Bytes& handle) const {
  std::shared_lock lock(mu_);
  return table_.count(handle_key(handle)) != 0;
}

Bytes ideal_obf(IdealRegistry& reg, const CircuitDesc& c, Rng& rng) { return reg.obfuscate(c, rng.bytes(kHandleBytes)); }

BitVector ideal_eval(const IdealRegistry& reg, const Bytes& handle, const BitVector& x) { return reg.eval(handle, x); }

QPrOSim::QPrOSim(int key_bits, Rng& rng) : key_bits_(key_bits), secret_(rng.bytes(32)) {
  if (key_bits < 8 || key_bits > 64 || key_bits % 2) throw MalformedInput("qpro: key_bits must be even, in [8,64]");
}

std::uint64_t QPrOSim::key_mask() const { return key_bits_ == 64 ? ~0ULL : (1ULL << key_bits_) - 1; }

std::uint64_t QPrOSim::round(std::size_t instance, int r, std::uint64_t half) const {
  Writer w;
  w.u64(instance).u8(static_cast<std::uint8_t>(r)).u64(half);
  const Bytes h = crypto::hmac(secret_, w.out());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(h[i]) << (8 * i);
  const int hb = key_bits_ / 2;
  return hb == 64 ? v : v & ((1ULL << hb) - 1);
}

// Four-round Feistel network over key_bits.
std::uint64_t QPrOSim::gen(std::size_t instance, std::uint64_t key) const {
  const int hb = key_bits_ / 2;
  const std::uint64_t hm = (1ULL << hb) - 1;
  key &= key_mask();
  std::uint64_t l = key & hm, r = key >> hb;
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t t = l ^ round(instance, i, r);
    l = r;
    r = t;
  }
  return l | (r << hb);
}

std::uint64_t QPrOSim::invert(std::size_t instance, std::uint64_t handle) const {
  const int hb = key_bits_ / 2;
  const std::uint64_t hm = (1ULL << hb) - 1;
  std::uint64_t l = handle & hm, r = (handle >> hb) & hm;
  for (int i = 3; i >= 0; --i) {
    const std::uint64_t t = r ^ round(instance, i, l);
    r = l;
    l = t;
  }
  return l | (r << hb);
}

Bytes QPrOSim::eval(std::size_t instance, std::uint64_t handle, const Bytes& x, std::size_t len) const {
  {
    std::shared_lock lock(mu_);
    auto it = overrides_.find({instance, handle});
    if (it != overrides_.end()) return prf(it->second, x, len);
  }
  if (handle & ~key_mask()) {
    Writer w;
    w.str("qmalab/qpro-fresh").u64(instance).u64(handle);
    const Bytes h = crypto::hmac(secret_, w.out());
    std::uint64_t k = 0;
    for (int i = 0; i < 8; ++i) k |= static_cast<std::uint64_t>(h[i]) << (8 * i);
    return prf(k & key_mask(), x, len);
  }
  return prf(invert(instance, handle), x, len);
}

void QPrOSim::override_handle(std::size_t instance, std::uint64_t handle, std::uint64_t key) {
  std::unique_lock lock(mu_);
  overrides_[{instance, handle}] = key & key_mask();
}

Bytes QPrOSim::prf(std::uint64_t key, const Bytes& x, std::size_t len) {
  Writer k;
  k.str("qmalab/prf").u64(key);
  return crypto::expand(k.out(), x, len);
}

std::pair<FePublicKey, FeSecretKey> fe_gen(FeFunction f, const Bytes& seed) {
  if (seed.size() != 32) throw MalformedInput("fe: master secret must be 32 bytes");
  Writer w;
  w.str("qmalab/fe-id").bytes(seed).str(f.id);
  Bytes id = crypto::sha256(w.out());
  id.resize(8);
  FePublicKey pk{id, seed};
  FeSecretKey sk{id, seed, std::move(f)};
  return {pk, sk};
}

Bytes fe_enc(const FePublicKey& pk, const Bytes& z, const Bytes& r) {
  Bytes ct = pk.key_id;
  const Bytes body = crypto::ae_encrypt(pk.secret, r, z);
  ct.insert(ct.end(), body.begin(), body.end());
  return ct;
}

Bytes fe_dec(const FeSecretKey& sk, const Bytes& ct) {
  if (ct.size() < sk.key_id.size() || !std::equal(sk.key_id.begin(), sk.key_id.end(), ct.begin()))
    throw IntegrityError("fe: ciphertext was made for a different key");
  const Bytes body(ct.begin() + sk.key_id.size(), ct.end());
  return sk.f.fn(crypto::ae_decrypt(sk.secret, body));
}

FePublicKey fe_public_key(const FeSecretKey& sk) { return {sk.key_id, sk.secret}; }

}  // namespace qmalab::obf
