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

#include "qmalab/pcobf.hpp"

#include <algorithm>

namespace qmalab::obf {

using crypto::Reader;
using crypto::Writer;

namespace {

constexpr std::size_t kChalInstance = 0;
std::size_t bundle_instance(int t) { return static_cast<std::size_t>(t) + 1; }

Bytes encode_keys(const std::vector<std::uint64_t>& keys) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(keys.size()));
  for (auto k : keys) w.u64(k);
  return w.take();
}

std::vector<std::uint64_t> decode_keys(Reader& r) {
  const auto n = r.u32();
  if (n > 4096) throw MalformedInput("pc: key bundle too large");
  std::vector<std::uint64_t> keys(n);
  for (auto& k : keys) k = r.u64();
  return keys;
}

KeyHandlePairs to_pairs(const std::vector<std::uint64_t>& keys, const std::vector<std::uint64_t>& handles) {
  if (keys.size() != handles.size() || keys.size() % kJllwBlocks) throw MalformedInput("pc: key / handle shape");
  KeyHandlePairs p;
  for (std::size_t i = 0; i < keys.size(); i += kJllwBlocks) {
    p.keys.emplace_back(keys.begin() + i, keys.begin() + i + kJllwBlocks);
    p.handles.emplace_back(handles.begin() + i, handles.begin() + i + kJllwBlocks);
  }
  return p;
}

Bytes obfuscate_bundle(const OracleWorld& w, Backend backend, const CircuitDesc& c, int t,
                       const std::vector<std::uint64_t>& keys, const std::vector<std::uint64_t>& handles,
                       const Bytes& rtilde) {
  if (backend == Backend::Jllw)
    return jllw_obfuscate(c, to_pairs(keys, handles), bundle_instance(t), rtilde).serialize();
  Writer rand;
  rand.bytes(rtilde).raw(encode_keys(keys)).raw(encode_keys(handles));
  return w.ideal->obfuscate(c, rand.out());
}

Bytes challenge(const OracleWorld& w, std::uint64_t h_star, const std::vector<Bytes>& coms,
                const std::vector<std::vector<std::uint64_t>>& handles, int lambda_cc) {
  Writer in;
  in.u32(static_cast<std::uint32_t>(coms.size()));
  for (const auto& c : coms) in.bytes(c);
  for (const auto& h : handles) in.raw(encode_keys(h));
  Bytes chal = w.qpro->eval(kChalInstance, h_star, in.out(), (lambda_cc + 7) / 8);
  if (lambda_cc % 8) chal.back() &= static_cast<std::uint8_t>((1u << (lambda_cc % 8)) - 1);
  return chal;
}

// NP statement: every unopened bundle obfuscates one circuit C with phi(C),
// under committed keys.
Bytes statement_instance(const Phi& phi, const PcObfuscation& o) {
  Writer w;
  w.str(phi.id).u32(o.lambda_cc).u8(static_cast<std::uint8_t>(o.backend)).u32(o.arity).u32(o.out_width).bytes(o.chal);
  w.u32(static_cast<std::uint32_t>(o.unopened.size()));
  for (const auto& [t, blob] : o.unopened)
    w.u32(t).bytes(o.commitments.at(t)).raw(encode_keys(o.handles.at(t))).bytes(blob);
  return w.take();
}

nizk::NpStatement make_statement(const OracleWorld& w, const Phi& phi, const PcObfuscation& o) {
  nizk::NpStatement st;
  st.relation_id = "pc-obf/" + phi.id;
  st.instance = statement_instance(phi, o);
  OracleWorld world = w;
  Phi pred = phi;
  st.relation = [world, pred](const Bytes& instance, const Bytes& witness) {
    try {
      Reader x(instance);
      x.str();
      x.u32();
      const auto backend = static_cast<Backend>(x.u8());
      const auto arity = static_cast<int>(x.u32());
      const auto width = static_cast<int>(x.u32());
      x.bytes();
      const auto count = x.u32();
      Reader wit(witness);
      const CircuitDesc c = CircuitDesc::decode(wit.bytes());
      if (c.input_arity() != arity || c.output_width() != width) return false;
      if (!pred.test(c)) return false;
      for (std::uint32_t i = 0; i < count; ++i) {
        const int t = static_cast<int>(x.u32());
        const Bytes com = x.bytes();
        const auto handles = decode_keys(x);
        const Bytes blob = x.bytes();
        const Bytes r = wit.bytes();
        const auto keys = decode_keys(wit);
        const Bytes rtilde = wit.bytes();
        if (crypto::commit(encode_keys(keys), r) != com) return false;
        if (obfuscate_bundle(world, backend, c, t, keys, handles, rtilde) != blob) return false;
      }
      return x.done() && wit.done();
    } catch (const Error&) {
      return false;
    }
  };
  return st;
}

struct Draft {
  PcObfuscation o;
  Bytes witness;
};

Draft draft(const OracleWorld& w, const PcPublicParams& pp, const CircuitDesc& c, const PcParams& params, Rng& rng,
            const PcOptions& opts) {
  if (params.lambda_cc < 1 || params.lambda_cc > 64) throw MalformedInput("pc: lambda_cc must be in [1,64]");
  const int d = c.input_arity();
  if (params.backend == Backend::Jllw && (d < 1 || d > kJllwMaxDepth))
    throw SizingError("pc: JLLW backend needs input length in [1,5]");
  Draft out;
  PcObfuscation& o = out.o;
  o.backend = params.backend;
  o.lambda_cc = params.lambda_cc;
  o.arity = d;
  o.out_width = c.output_width();
  std::vector<std::vector<std::uint64_t>> keys(params.lambda_cc);
  std::vector<Bytes> rs(params.lambda_cc);
  for (int t = 0; t < params.lambda_cc; ++t) {
    std::vector<std::uint64_t> hs;
    for (int i = 0; i < d * kJllwBlocks; ++i) {
      keys[t].push_back(rng.next_u64() & w.qpro->key_mask());
      hs.push_back(w.qpro->gen(bundle_instance(t), keys[t].back()));
    }
    if (opts.corrupt.count(t) && !hs.empty()) hs[0] = w.qpro->gen(bundle_instance(t), keys[t][0] ^ 1);
    rs[t] = rng.bytes(crypto::kNonce);
    o.commitments.push_back(crypto::commit(encode_keys(keys[t]), rs[t]));
    o.handles.push_back(std::move(hs));
  }
  o.chal = challenge(w, pp.h_star, o.commitments, o.handles, o.lambda_cc);
  Writer wit;
  wit.bytes(c.canonical());
  for (int t = 0; t < params.lambda_cc; ++t) {
    if (challenge_bit(o.chal, t)) {
      o.opened[t] = Opening{keys[t], rs[t]};
    } else {
      const Bytes rtilde = rng.bytes(kJllwSeed);
      o.unopened[t] = obfuscate_bundle(w, o.backend, c, t, keys[t], o.handles[t], rtilde);
      wit.bytes(rs[t]).raw(encode_keys(keys[t])).bytes(rtilde);
    }
  }
  out.witness = wit.take();
  return out;
}

}  // namespace

Backend parse_backend(const std::string& s) {
  if (s == "ideal") return Backend::Ideal;
  if (s == "jllw") return Backend::Jllw;
  throw MalformedInput("pc: unknown backend '" + s + "'");
}

std::string backend_name(Backend b) { return b == Backend::Ideal ? "ideal" : "jllw"; }

OracleWorld OracleWorld::create(std::uint64_t seed, int key_bits) {
  Rng rng(seed);
  OracleWorld w;
  w.ideal = std::make_shared<IdealRegistry>();
  w.qpro = std::make_shared<QPrOSim>(key_bits, rng);
  w.nizk = std::make_shared<nizk::TranscriptOracle>(rng);
  return w;
}

nlohmann::json PcPublicParams::to_json() const {
  return {{"crs", base64_encode(crs.serialize())}, {"h_star", h_star}};
}

bool challenge_bit(const Bytes& chal, int t) {
  const auto byte = static_cast<std::size_t>(t / 8);
  return byte < chal.size() && ((chal[byte] >> (t % 8)) & 1);
}

std::pair<PcPublicParams, PcTrapdoor> pc_ext0(const OracleWorld& w, Rng& rng) {
  auto [crs, sk] = nizk::np_ext0(*w.nizk, rng);
  PcPublicParams pp{crs, w.qpro->gen(kChalInstance, rng.next_u64() & w.qpro->key_mask())};
  return {pp, PcTrapdoor{sk, {}}};
}

PcPublicParams pc_setup(const OracleWorld& w, Rng& rng) { return pc_ext0(w, rng).first; }

std::pair<PcPublicParams, PcTrapdoor> pc_simgen(const OracleWorld& w, Rng& rng) {
  auto [crs, td] = nizk::np_simgen(*w.nizk, rng);
  PcPublicParams pp{crs, w.qpro->gen(kChalInstance, rng.next_u64() & w.qpro->key_mask())};
  return {pp, PcTrapdoor{td.sk, td.token}};
}

PcObfuscation pc_obfuscate(const OracleWorld& w, const PcPublicParams& pp, const Phi& phi, const CircuitDesc& c,
                           const PcParams& params, Rng& rng, const PcOptions& opts) {
  if (!phi.test(c)) throw NotAWitness("pc: circuit does not satisfy the predicate");
  Draft d = draft(w, pp, c, params, rng, opts);
  d.o.proof = nizk::np_prove(*w.nizk, pp.crs, make_statement(w, phi, d.o), d.witness, rng);
  return std::move(d.o);
}

PcObfuscation pc_simobf(const OracleWorld& w, const PcPublicParams& pp, const PcTrapdoor& td, const Phi& phi,
                        const CircuitDesc& c, const PcParams& params, Rng& rng) {
  if (td.sim_token.empty()) throw Error("pc: simulation needs a trapdoor from pc_simgen");
  Draft d = draft(w, pp, c, params, rng, {});
  d.o.proof = nizk::np_simulate(*w.nizk, pp.crs, nizk::SimTrapdoor{td.sim_token, td.sk}, make_statement(w, phi, d.o),
                                rng, d.witness);
  return std::move(d.o);
}

PcReport pc_verify(const OracleWorld& w, const PcPublicParams& pp, const Phi& phi, const PcObfuscation& o) {
  PcReport rep;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.diagnostics.push_back(why);
  };
  const auto n = static_cast<std::size_t>(o.lambda_cc);
  if (o.lambda_cc < 1 || o.commitments.size() != n || o.handles.size() != n) {
    fail("malformed_structure");
    return rep;
  }
  for (const auto& h : o.handles)
    if (h.size() != static_cast<std::size_t>(o.arity) * kJllwBlocks) {
      fail("malformed_structure");
      return rep;
    }
  if (challenge(w, pp.h_star, o.commitments, o.handles, o.lambda_cc) != o.chal) fail("chal_mismatch");
  for (int t = 0; t < o.lambda_cc; ++t) {
    const bool open = challenge_bit(o.chal, t);
    if (open != (o.opened.count(t) == 1) || open == (o.unopened.count(t) == 1)) {
      fail("open_set_mismatch");
      break;
    }
  }
  if (o.opened.size() + o.unopened.size() != n) fail("open_set_mismatch");
  for (const auto& [t, op] : o.opened) {
    if (t < 0 || t >= o.lambda_cc) continue;
    if (crypto::commit(encode_keys(op.keys), op.r) != o.commitments[t]) {
      fail("commitment_mismatch");
      continue;
    }
    if (op.keys.size() != o.handles[t].size()) {
      fail("handle_mismatch");
      continue;
    }
    for (std::size_t i = 0; i < op.keys.size(); ++i)
      if (w.qpro->gen(bundle_instance(t), op.keys[i]) != o.handles[t][i]) {
        fail("handle_mismatch");
        break;
      }
  }
  if (o.unopened.empty()) fail("no_unopened_bundles");
  if (rep.ok && !nizk::np_verify(*w.nizk, pp.crs, make_statement(w, phi, o), o.proof)) fail("proof_invalid");
  return rep;
}

BitVector pc_eval_bundle(const OracleWorld& w, const PcObfuscation& o, int t, const BitVector& x) {
  const Bytes& blob = o.unopened.at(t);
  if (o.backend == Backend::Jllw) return jllw_eval(*w.qpro, JllwObfuscation::parse(blob), x);
  return w.ideal->eval(blob, x);
}

BitVector pc_eval(const OracleWorld& w, const PcObfuscation& o, const BitVector& x) {
  if (o.unopened.empty()) throw Error("pc: every bundle was opened; nothing to evaluate");
  // std::map iterates t in increasing order, so the first value to reach
  // the top count wins ties.
  std::vector<std::pair<BitVector, int>> counts;
  for (const auto& [t, blob] : o.unopened) {
    const BitVector y = pc_eval_bundle(w, o, t, x);
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& e) { return e.first == y; });
    if (it == counts.end())
      counts.emplace_back(y, 1);
    else
      ++it->second;
  }
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

CircuitDesc pc_extract(const OracleWorld& w, const PcPublicParams& pp, const PcTrapdoor& td, const Phi& phi,
                       const PcObfuscation& o) {
  const auto rep = pc_verify(w, pp, phi, o);
  if (!rep.ok) throw ExtractionError("pc: extraction not attempted, verification failed");
  const auto st = make_statement(w, phi, o);
  const Bytes witness = nizk::np_ext1(pp.crs, td.sk, st, o.proof);
  try {
    Reader r(witness);
    return CircuitDesc::decode(r.bytes());
  } catch (const MalformedInput& e) {
    throw ExtractionError(std::string("pc: extracted witness does not parse: ") + e.what());
  }
}

nlohmann::json PcObfuscation::to_json() const {
  nlohmann::json j;
  j["backend"] = backend_name(backend);
  j["lambda_cc"] = lambda_cc;
  j["arity"] = arity;
  j["out_width"] = out_width;
  j["commitments"] = nlohmann::json::array();
  for (const auto& c : commitments) j["commitments"].push_back(base64_encode(c));
  j["handles"] = handles;
  j["chal"] = base64_encode(chal);
  j["unopened"] = nlohmann::json::object();
  for (const auto& [t, blob] : unopened) j["unopened"][std::to_string(t)] = base64_encode(blob);
  j["opened"] = nlohmann::json::object();
  for (const auto& [t, op] : opened)
    j["opened"][std::to_string(t)] = {{"keys", op.keys}, {"r", base64_encode(op.r)}};
  j["proof"] = proof.to_json();
  return j;
}

PcObfuscation PcObfuscation::from_json(const nlohmann::json& j) {
  try {
    PcObfuscation o;
    o.backend = parse_backend(j.at("backend").get<std::string>());
    o.lambda_cc = j.at("lambda_cc").get<int>();
    o.arity = j.at("arity").get<int>();
    o.out_width = j.at("out_width").get<int>();
    for (const auto& c : j.at("commitments")) o.commitments.push_back(base64_decode(c.get<std::string>()));
    o.handles = j.at("handles").get<std::vector<std::vector<std::uint64_t>>>();
    o.chal = base64_decode(j.at("chal").get<std::string>());
    for (const auto& [k, v] : j.at("unopened").items()) o.unopened[std::stoi(k)] = base64_decode(v.get<std::string>());
    for (const auto& [k, v] : j.at("opened").items())
      o.opened[std::stoi(k)] =
          Opening{v.at("keys").get<std::vector<std::uint64_t>>(), base64_decode(v.at("r").get<std::string>())};
    o.proof = nizk::NpProof::from_json(j.at("proof"));
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("pc: bad transcript JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw MalformedInput("pc: bundle index is not a number");
  }
}

}  // namespace qmalab::obf
