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

#include "qmalab/jllw.hpp"

namespace qmalab::obf {

using crypto::Reader;
using crypto::Writer;

namespace {

Bytes encode_bits(const BitVector& v) {
  Writer w;
  w.u32(v.size()).u64(v.word());
  return w.take();
}

BitVector decode_bits(Reader& r) {
  const int len = static_cast<int>(r.u32());
  const std::uint64_t word = r.u64();
  return BitVector(len, word);
}

// chi || 0^{D-d} as the PRF input.
Bytes pad_input(const BitVector& chi, int depth) { return encode_bits(chi.concat(BitVector::zeros(depth - chi.size()))); }

struct Plain {
  JllwFlag flag;
  BitVector chi;
  Bytes info;
};

Plain parse_plain(const Bytes& z) {
  Reader r(z);
  Plain p;
  const auto f = r.u8();
  if (f > 2) throw MalformedInput("jllw: unknown flag");
  p.flag = static_cast<JllwFlag>(f);
  p.chi = decode_bits(r);
  p.info = r.bytes();
  r.expect_done();
  return p;
}

struct NormalInfo {
  Bytes circuit;
  std::vector<std::vector<std::uint64_t>> keys;  // levels d..D-1
  Bytes seed;
};

Bytes encode_normal(const NormalInfo& n) {
  Writer w;
  w.bytes(n.circuit).u32(static_cast<std::uint32_t>(n.keys.size()));
  for (const auto& lvl : n.keys) {
    w.u32(static_cast<std::uint32_t>(lvl.size()));
    for (auto k : lvl) w.u64(k);
  }
  w.bytes(n.seed);
  return w.take();
}

NormalInfo decode_normal(const Bytes& info) {
  Reader r(info);
  NormalInfo n;
  n.circuit = r.bytes();
  const auto levels = r.u32();
  if (levels > kJllwMaxDepth) throw MalformedInput("jllw: too many key levels");
  for (std::uint32_t i = 0; i < levels; ++i) {
    const auto b = r.u32();
    if (b != kJllwBlocks) throw MalformedInput("jllw: wrong block count");
    std::vector<std::uint64_t> lvl;
    for (std::uint32_t j = 0; j < b; ++j) lvl.push_back(r.u64());
    n.keys.push_back(std::move(lvl));
  }
  n.seed = r.bytes();
  r.expect_done();
  return n;
}

Bytes expand_sim(const Bytes& info) {
  Reader r(info);
  const auto block_len = r.u32();
  const auto count = r.u32();
  if (count != kJllwBlocks) throw MalformedInput("jllw: wrong number of simulation seeds");
  Bytes v;
  for (std::uint32_t j = 0; j < count; ++j) {
    auto blk = crypto::Prg(r.bytes()).bytes(block_len);  // G_v
    v.insert(v.end(), blk.begin(), blk.end());
  }
  r.expect_done();
  return v;
}

Bytes expand_normal(int d, int depth, const FePublicKey& next_pk, const Plain& p) {
  if (p.chi.size() != d) throw MalformedInput("jllw: prefix length does not match the level");
  NormalInfo info = decode_normal(p.info);
  if (static_cast<int>(info.keys.size()) != depth - d) throw MalformedInput("jllw: key levels do not match depth");
  const Bytes sr = crypto::Prg(info.seed).bytes(4 * kJllwSeed);  // G_sr
  Bytes pair;
  for (int eta = 0; eta < 2; ++eta) {
    NormalInfo child;
    child.circuit = info.circuit;
    child.keys.assign(info.keys.begin() + 1, info.keys.end());
    child.seed.assign(sr.begin() + 2 * eta * kJllwSeed, sr.begin() + (2 * eta + 1) * kJllwSeed);
    const Bytes r(sr.begin() + (2 * eta + 1) * kJllwSeed, sr.begin() + (2 * eta + 2) * kJllwSeed);
    const BitVector chi = p.chi.concat(BitVector(1, eta));
    const Bytes ct = fe_enc(next_pk, jllw_plaintext(JllwFlag::Normal, chi, encode_normal(child)), r);
    pair.insert(pair.end(), ct.begin(), ct.end());
  }
  const std::size_t block = pair.size() / kJllwBlocks;
  const Bytes x = pad_input(p.chi, depth);
  for (int j = 0; j < kJllwBlocks; ++j) {
    const Bytes pad = QPrOSim::prf(info.keys[0][j], x, block);
    for (std::size_t i = 0; i < block; ++i) pair[j * block + i] ^= pad[i];
  }
  return pair;
}

FeFunction expand_function(int d, int depth, FePublicKey next_pk) {
  return {"jllw/expand/" + std::to_string(d), [d, depth, next_pk](const Bytes& z) -> Bytes {
            const Plain p = parse_plain(z);
            switch (p.flag) {
              case JllwFlag::Normal: return expand_normal(d, depth, next_pk, p);
              case JllwFlag::Sim: return expand_sim(p.info);
              case JllwFlag::Hyb: break;
            }
            throw UnsupportedMode("jllw: hybrid-mode expansion is a proof device and is not executable");
          }};
}

FeFunction eval_function(int depth) {
  return {"jllw/eval", [depth](const Bytes& z) -> Bytes {
            const Plain p = parse_plain(z);
            if (p.flag == JllwFlag::Sim) return p.info;
            if (p.flag != JllwFlag::Normal) throw UnsupportedMode("jllw: leaf in hybrid mode");
            if (p.chi.size() != depth) throw MalformedInput("jllw: leaf prefix is not a full input");
            const NormalInfo info = decode_normal(p.info);
            return encode_bits(CircuitDesc::decode(info.circuit).eval(p.chi));
          }};
}

std::vector<FeSecretKey> make_keys(int depth, const std::vector<Bytes>& secrets) {
  std::vector<FeSecretKey> sks(depth + 1);
  sks[depth] = fe_gen(eval_function(depth), secrets[depth]).second;
  for (int d = depth - 1; d >= 0; --d)
    sks[d] = fe_gen(expand_function(d, depth, fe_public_key(sks[d + 1])), secrets[d]).second;
  return sks;
}

}  // namespace

Bytes jllw_plaintext(JllwFlag flag, const BitVector& chi, const Bytes& info) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(flag)).raw(encode_bits(chi)).bytes(info);
  return w.take();
}

Bytes jllw_sim_leaf_info(const BitVector& y) { return encode_bits(y); }

Bytes jllw_sim_node_info(std::size_t block_len, const std::vector<Bytes>& sigmas) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(block_len)).u32(static_cast<std::uint32_t>(sigmas.size()));
  for (const auto& s : sigmas) w.bytes(s);
  return w.take();
}

Bytes KeyHandlePairs::serialize_keys() const {
  Writer w;
  w.u32(static_cast<std::uint32_t>(keys.size()));
  for (const auto& lvl : keys) {
    w.u32(static_cast<std::uint32_t>(lvl.size()));
    for (auto k : lvl) w.u64(k);
  }
  return w.take();
}

KeyHandlePairs sample_key_handle_pairs(const QPrOSim& q, std::size_t instance, int depth, Rng& rng) {
  KeyHandlePairs p;
  for (int i = 0; i < depth; ++i) {
    std::vector<std::uint64_t> ks, hs;
    for (int j = 0; j < kJllwBlocks; ++j) {
      ks.push_back(rng.next_u64() & q.key_mask());
      hs.push_back(q.gen(instance, ks.back()));
    }
    p.keys.push_back(std::move(ks));
    p.handles.push_back(std::move(hs));
  }
  return p;
}

JllwObfuscation jllw_obfuscate(const CircuitDesc& c, const KeyHandlePairs& pairs, std::size_t instance,
                               const Bytes& randomness) {
  const int depth = c.input_arity();
  if (depth < 1 || depth > kJllwMaxDepth) throw SizingError("jllw: input length must be in [1,5]");
  if (static_cast<int>(pairs.keys.size()) != depth || pairs.handles.size() != pairs.keys.size())
    throw MalformedInput("jllw: need one key/handle level per input bit");
  for (std::size_t i = 0; i < pairs.keys.size(); ++i)
    if (pairs.keys[i].size() != kJllwBlocks || pairs.handles[i].size() != kJllwBlocks)
      throw MalformedInput("jllw: need B keys and handles per level");
  crypto::Prg prg(randomness);
  std::vector<Bytes> secrets;
  for (int d = 0; d <= depth; ++d) secrets.push_back(prg.bytes(32));
  JllwObfuscation o;
  o.depth = depth;
  o.out_width = c.output_width();
  o.instance = instance;
  o.sks = make_keys(depth, secrets);
  o.handles = pairs.handles;
  NormalInfo root{c.canonical(), pairs.keys, prg.bytes(kJllwSeed)};
  const Bytes r = prg.bytes(kJllwSeed);
  o.root_ct = fe_enc(fe_public_key(o.sks[0]), jllw_plaintext(JllwFlag::Normal, BitVector(), encode_normal(root)), r);
  return o;
}

BitVector jllw_eval(const QPrOSim& q, const JllwObfuscation& o, const BitVector& x,
                    const std::optional<PadTamper>& tamper) {
  if (x.size() != o.depth) throw MalformedInput("jllw: input length differs from depth");
  Bytes ct = o.root_ct;
  for (int d = 0; d < o.depth; ++d) {
    const BitVector chi = x.slice(0, d);
    Bytes v = fe_dec(o.sks[d], ct);
    if (v.size() % kJllwBlocks) throw IntegrityError("jllw: pad / ciphertext length mismatch");
    const std::size_t block = v.size() / kJllwBlocks;
    const Bytes in = pad_input(chi, o.depth);
    for (int j = 0; j < kJllwBlocks; ++j) {
      Bytes pad = q.eval(o.instance, o.handles[d][j], in, block);
      if (tamper && tamper->level == d && tamper->byte / block == static_cast<std::size_t>(j))
        pad[tamper->byte % block] ^= 0x01;
      for (std::size_t i = 0; i < block; ++i) v[j * block + i] ^= pad[i];
    }
    const std::size_t half = v.size() / 2;
    const bool bit = x.get(d);
    ct.assign(v.begin() + (bit ? half : 0), v.begin() + (bit ? v.size() : half));
  }
  Bytes out = fe_dec(o.sks[o.depth], ct);
  Reader r(out);
  BitVector y = decode_bits(r);
  r.expect_done();
  return y;
}

std::vector<std::size_t> jllw_pad_lengths(const QPrOSim& q, const JllwObfuscation& o, const BitVector& x) {
  if (x.size() != o.depth) throw MalformedInput("jllw: input length differs from depth");
  std::vector<std::size_t> lens;
  Bytes ct = o.root_ct;
  for (int d = 0; d < o.depth; ++d) {
    Bytes v = fe_dec(o.sks[d], ct);
    lens.push_back(v.size());
    const std::size_t block = v.size() / kJllwBlocks;
    const Bytes in = pad_input(x.slice(0, d), o.depth);
    for (int j = 0; j < kJllwBlocks; ++j) {
      const Bytes pad = q.eval(o.instance, o.handles[d][j], in, block);
      for (std::size_t i = 0; i < block; ++i) v[j * block + i] ^= pad[i];
    }
    const std::size_t half = v.size() / 2;
    ct.assign(v.begin() + (x.get(d) ? half : 0), v.begin() + (x.get(d) ? v.size() : half));
  }
  return lens;
}

Bytes JllwObfuscation::serialize() const {
  Writer w;
  w.str("jllw").u32(depth).u32(out_width).u64(instance).bytes(root_ct);
  for (const auto& sk : sks) w.bytes(sk.secret);
  for (const auto& lvl : handles)
    for (auto h : lvl) w.u64(h);
  return w.take();
}

JllwObfuscation JllwObfuscation::parse(const Bytes& b) {
  Reader r(b);
  if (r.str() != "jllw") throw MalformedInput("jllw: not a JLLW obfuscation");
  JllwObfuscation o;
  o.depth = static_cast<int>(r.u32());
  if (o.depth < 1 || o.depth > kJllwMaxDepth) throw MalformedInput("jllw: bad depth");
  o.out_width = static_cast<int>(r.u32());
  o.instance = r.u64();
  o.root_ct = r.bytes();
  std::vector<Bytes> secrets;
  for (int d = 0; d <= o.depth; ++d) secrets.push_back(r.bytes());
  for (const auto& s : secrets)
    if (s.size() != 32) throw MalformedInput("jllw: bad FE key");
  o.sks = make_keys(o.depth, secrets);
  for (int d = 0; d < o.depth; ++d) {
    std::vector<std::uint64_t> lvl;
    for (int j = 0; j < kJllwBlocks; ++j) lvl.push_back(r.u64());
    o.handles.push_back(std::move(lvl));
  }
  r.expect_done();
  return o;
}

}  // namespace qmalab::obf
