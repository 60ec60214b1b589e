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

#include "qmalab/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

namespace qmalab::crypto {

Bytes sha256(const Bytes& data) {
  Bytes out(kDigest);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes hmac(const Bytes& key, const Bytes& data) {
  Bytes out(kDigest);
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len);
  return out;
}

Bytes expand(const Bytes& key, const Bytes& data, std::size_t len) {
  Bytes out;
  out.reserve(len + kDigest);
  Bytes block = data;
  block.resize(data.size() + 4);
  for (std::uint32_t ctr = 0; out.size() < len; ++ctr) {
    for (int i = 0; i < 4; ++i) block[data.size() + i] = static_cast<std::uint8_t>(ctr >> (8 * i));
    auto h = hmac(key, block);
    out.insert(out.end(), h.begin(), h.end());
  }
  out.resize(len);
  return out;
}

Bytes label(std::string_view s) { return Bytes(s.begin(), s.end()); }

Bytes cat(std::initializer_list<const Bytes*> parts) {
  Writer w;
  for (auto p : parts) w.bytes(*p);
  return w.take();
}

Prg::Prg(Bytes seed) : seed_(std::move(seed)) {}

void Prg::refill() {
  Writer w;
  w.str("qmalab/prg").bytes(seed_).u64(counter_++);
  buf_ = sha256(w.out());
  pos_ = 0;
}

Bytes Prg::bytes(std::size_t n) {
  Bytes out;
  out.reserve(n);
  while (out.size() < n) {
    if (pos_ == buf_.size()) refill();
    out.push_back(buf_[pos_++]);
  }
  return out;
}

std::uint64_t Prg::next_u64() {
  auto b = bytes(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t Prg::uniform_below(std::uint64_t n) {
  if (n == 0) throw MalformedInput("prg: n must be positive");
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

Bytes commit(const Bytes& payload, const Bytes& r) {
  Writer w;
  w.str("qmalab/commit").bytes(r).bytes(payload);
  return sha256(w.out());
}

namespace {

Bytes subkey(const Bytes& key, std::string_view purpose) { return hmac(key, label(purpose)); }

}  // namespace

Bytes ae_encrypt(const Bytes& key, const Bytes& nonce, const Bytes& pt) {
  if (nonce.size() != kNonce) throw MalformedInput("ae: nonce must be 16 bytes");
  Bytes out = nonce;
  const Bytes stream = expand(subkey(key, "enc"), nonce, pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) out.push_back(pt[i] ^ stream[i]);
  const Bytes tag = hmac(subkey(key, "mac"), out);
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

Bytes ae_decrypt(const Bytes& key, const Bytes& ct) {
  if (ct.size() < kAeOverhead) throw IntegrityError("ae: ciphertext too short");
  const Bytes body(ct.begin(), ct.end() - kDigest);
  const Bytes tag = hmac(subkey(key, "mac"), body);
  if (CRYPTO_memcmp(tag.data(), ct.data() + body.size(), kDigest) != 0) throw IntegrityError("ae: tag mismatch");
  const Bytes nonce(body.begin(), body.begin() + kNonce);
  const std::size_t n = body.size() - kNonce;
  const Bytes stream = expand(subkey(key, "enc"), nonce, n);
  Bytes pt(n);
  for (std::size_t i = 0; i < n; ++i) pt[i] = body[kNonce + i] ^ stream[i];
  return pt;
}

Writer& Writer::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

Writer& Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

Writer& Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

Writer& Writer::bytes(const Bytes& b) {
  u32(static_cast<std::uint32_t>(b.size()));
  return raw(b);
}

Writer& Writer::str(const std::string& s) { return bytes(Bytes(s.begin(), s.end())); }

Writer& Writer::raw(const Bytes& b) {
  out_.insert(out_.end(), b.begin(), b.end());
  return *this;
}

void Reader::need(std::size_t n) const {
  if (in_.size() - pos_ < n) throw MalformedInput("decode: truncated input");
}

std::uint8_t Reader::u8() {
  need(1);
  return in_[pos_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in_[pos_ + i];
  pos_ += 4;
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in_[pos_ + i];
  pos_ += 8;
  return v;
}

Bytes Reader::bytes() { return raw(u32()); }

std::string Reader::str() {
  auto b = bytes();
  return std::string(b.begin(), b.end());
}

Bytes Reader::raw(std::size_t n) {
  need(n);
  Bytes out(in_.begin() + pos_, in_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

void Reader::expect_done() const {
  if (!done()) throw MalformedInput("decode: trailing bytes");
}

}  // namespace qmalab::crypto
