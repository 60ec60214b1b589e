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

// Toy symmetric primitives built on SHA-256 / HMAC-SHA-256. They stand in
// for the idealized objects of the construction (PRF, PRG, commitments,
// authenticated encryption); none of them is meant for real deployments.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qmalab/common.hpp"

namespace qmalab::crypto {

inline constexpr std::size_t kDigest = 32;
inline constexpr std::size_t kNonce = 16;

Bytes sha256(const Bytes& data);
Bytes hmac(const Bytes& key, const Bytes& data);
// HMAC in counter mode, truncated to len bytes.
Bytes expand(const Bytes& key, const Bytes& data, std::size_t len);
Bytes label(std::string_view s);
Bytes cat(std::initializer_list<const Bytes*> parts);

// Counter-mode stream from a seed.
class Prg {
 public:
  explicit Prg(Bytes seed);
  std::uint64_t next_u64();
  std::uint64_t uniform_below(std::uint64_t n);
  Bytes bytes(std::size_t n);

 private:
  void refill();
  Bytes seed_;
  std::uint64_t counter_ = 0;
  Bytes buf_;
  std::size_t pos_ = 0;
};

Bytes commit(const Bytes& payload, const Bytes& r);

// nonce || (pt xor stream) || tag; decryption throws IntegrityError.
Bytes ae_encrypt(const Bytes& key, const Bytes& nonce, const Bytes& pt);
Bytes ae_decrypt(const Bytes& key, const Bytes& ct);
inline constexpr std::size_t kAeOverhead = kNonce + kDigest;

// Length-prefixed binary encoding used for every canonical form.
class Writer {
 public:
  Writer& u8(std::uint8_t v);
  Writer& u32(std::uint32_t v);
  Writer& u64(std::uint64_t v);
  Writer& bytes(const Bytes& b);
  Writer& str(const std::string& s);
  Writer& raw(const Bytes& b);
  const Bytes& out() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(const Bytes& in) : in_(in) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  Bytes bytes();
  std::string str();
  Bytes raw(std::size_t n);
  bool done() const { return pos_ == in_.size(); }
  void expect_done() const;

 private:
  void need(std::size_t n) const;
  const Bytes& in_;
  std::size_t pos_ = 0;
};

}  // namespace qmalab::crypto
