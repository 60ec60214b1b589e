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

#include "qmalab/protocol.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>

namespace qmalab::protocol {

using crypto::Reader;
using crypto::Writer;
using gf2::BitVector;

void Config::validate() const {
  if (!(gamma > 0 && gamma < gamma_prime && gamma_prime < 1))
    throw MalformedInput("protocol: need 0 < gamma < gamma' < 1");
  if (k < 2) throw MalformedInput("protocol: k must be at least 2");
  if (lambda_code < 1) throw MalformedInput("protocol: lambda_code must be positive");
  if (lambda_cc < 1 || lambda_cc > 64) throw MalformedInput("protocol: lambda_cc must be in [1,64]");
  if (prg_seed_bits < 1 || prg_seed_bits > 12) throw MalformedInput("protocol: prg_seed_bits must be in [1,12]");
  if (!(thresholds.a > thresholds.b)) throw MalformedInput("protocol: need a > b");
}

nlohmann::json Config::to_json() const {
  return {{"k", k},
          {"lambda_code", lambda_code},
          {"gamma", gamma},
          {"gamma_prime", gamma_prime},
          {"lambda_cc", lambda_cc},
          {"backend", obf::backend_name(backend)},
          {"prg_seed_bits", prg_seed_bits},
          {"a", thresholds.a},
          {"b", thresholds.b}};
}

Config Config::from_json(const nlohmann::json& j) {
  Config c;
  try {
    c.k = j.value("k", c.k);
    c.lambda_code = j.value("lambda_code", c.lambda_code);
    c.gamma = j.value("gamma", c.gamma);
    c.gamma_prime = j.value("gamma_prime", c.gamma_prime);
    c.lambda_cc = j.value("lambda_cc", c.lambda_cc);
    c.backend = obf::parse_backend(j.value("backend", std::string("ideal")));
    c.prg_seed_bits = j.value("prg_seed_bits", c.prg_seed_bits);
    c.thresholds.a = j.value("a", c.thresholds.a);
    c.thresholds.b = j.value("b", c.thresholds.b);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("protocol: bad config: ") + e.what());
  }
  c.validate();
  return c;
}

Bytes prg_expand(const Bytes& seed, std::size_t len) {
  Writer w;
  w.str("qmalab/G").bytes(seed);
  return crypto::Prg(w.take()).bytes(len);
}

std::vector<std::size_t> permutation_for_seed(std::size_t len, std::uint64_t r) {
  Writer w;
  w.u64(r);
  crypto::Prg prg(prg_expand(w.out(), 32));
  std::vector<std::size_t> perm(len);
  for (std::size_t i = 0; i < len; ++i) perm[i] = i;
  for (std::size_t i = len; i > 1; --i) std::swap(perm[i - 1], perm[prg.uniform_below(i)]);
  return perm;
}

permver::PermutingVerifier make_verifier(const zx::HamiltonianInstance& h, const Config& cfg) {
  return permver::build(h, cfg.k, cfg.thresholds);
}

namespace {

const char* kKindM = "csa-ver-m";
const char* kKindNull = "csa-ver-null";

std::uint64_t double_bits(double d) { return std::bit_cast<std::uint64_t>(d); }

class VerMCircuit : public circ::CircuitImpl {
 public:
  VerMCircuit(csa::CSAKey key, permver::PermutingVerifier v, int seed_bits, bool null)
      : key_(std::move(key)), v_(std::move(v)), seed_bits_(seed_bits), null_(null) {
    m_ = v_.total_qubits();
    if (key_.n() != m_) throw MalformedInput("protocol: key size differs from the verifier's qubit count");
    if (seed_bits < 1 || seed_bits > 12) throw MalformedInput("protocol: seed bits out of range");
    arg_ = std::max(m_, seed_bits_);
    arity_ = 1 + arg_ + key_.physical_qubits();
    if (arity_ > gf2::kMaxAmbient) throw SizingError("protocol: circuit input exceeds 64 bits");
    if (!null_) {
      for (std::uint64_t r = 0; r < (1ULL << seed_bits_); ++r) {
        auto perm = permutation_for_seed(v_.len(), r);
        auto sm = permver::samp_perm(v_, perm);
        thetas_.push_back(sm.theta.word());
        fs_.push_back(std::move(sm.f));
      }
    }
  }

  std::string kind() const override { return null_ ? kKindNull : kKindM; }
  int input_arity() const override { return arity_; }
  int output_width() const override { return 1; }

  BitVector eval(const BitVector& x) const override {
    const std::uint64_t w = x.word();
    const std::uint64_t arg = (w >> 1) & ((1ULL << arg_) - 1);
    const std::uint64_t s = w >> (1 + arg_);
    if (!(w & 1)) {
      const std::uint64_t theta = arg & ((1ULL << m_) - 1);
      for (int i = 0; i < key_.n(); ++i)
        if (!key_.ver_block(i, (theta >> i) & 1, key_.block_bits(i, s))) return BitVector(1, 0);
      return BitVector(1, 1);
    }
    if (null_) return BitVector(1, 0);
    const std::uint64_t r = arg & ((1ULL << seed_bits_) - 1);
    const std::uint64_t theta = thetas_[r];
    std::uint64_t m = 0;
    for (int i = 0; i < key_.n(); ++i) {
      const int d = key_.decode_block(i, (theta >> i) & 1, key_.block_bits(i, s));
      if (d == csa::CSAKey::kBottom) return BitVector(1, 0);
      m |= static_cast<std::uint64_t>(d) << i;
    }
    return BitVector(1, fs_[r](m) ? 0 : 1);  // 1 - f
  }

  void encode(Writer& w) const override {
    w.str(key_.to_json().dump()).raw(verifier_bytes(v_, seed_bits_));
  }

  static Bytes verifier_bytes(const permver::PermutingVerifier& v, int seed_bits) {
    Writer w;
    w.str(v.instance().to_json().dump())
        .u32(v.k())
        .u64(double_bits(v.thresholds().a))
        .u64(double_bits(v.thresholds().b))
        .u32(seed_bits);
    return w.take();
  }

  const csa::CSAKey& key() const { return key_; }
  const permver::PermutingVerifier& verifier() const { return v_; }
  int seed_bits() const { return seed_bits_; }
  bool is_null() const { return null_; }

 private:
  csa::CSAKey key_;
  permver::PermutingVerifier v_;
  int seed_bits_;
  bool null_;
  int m_ = 0, arg_ = 0, arity_ = 0;
  std::vector<std::uint64_t> thetas_;
  std::vector<sim::BasisPredicate> fs_;
};

std::shared_ptr<const circ::CircuitImpl> decode_ver(Reader& r, bool null) {
  auto key = csa::CSAKey::from_json(nlohmann::json::parse(r.str(), nullptr, false));
  const auto inst = nlohmann::json::parse(r.str(), nullptr, false);
  if (inst.is_discarded()) throw MalformedInput("protocol: bad instance in circuit");
  auto h = zx::HamiltonianInstance::from_json(inst);
  const int k = static_cast<int>(r.u32());
  const double a = std::bit_cast<double>(r.u64());
  const double b = std::bit_cast<double>(r.u64());
  const int seed_bits = static_cast<int>(r.u32());
  return std::make_shared<VerMCircuit>(std::move(key), permver::build(h, k, {a, b}), seed_bits, null);
}

void ensure_registered() {
  static std::once_flag once;
  std::call_once(once, [] {
    circ::register_kind(kKindM, [](Reader& r) { return decode_ver(r, false); });
    circ::register_kind(kKindNull, [](Reader& r) { return decode_ver(r, true); });
  });
}

int physical_for(const permver::PermutingVerifier& v, const Config& cfg) {
  return v.total_qubits() * (2 * cfg.lambda_code + 1);
}

void check_size(const permver::PermutingVerifier& v, const Config& cfg) {
  const int phys = physical_for(v, cfg);
  if (phys > kMaxProofQubits)
    throw SizingError("protocol: m(2 lambda+1) = " + std::to_string(phys) + " exceeds the cap of 14 qubits");
}

std::uint64_t circuit_input(int arg_bits, int sel, std::uint64_t arg, std::uint64_t s) {
  return static_cast<std::uint64_t>(sel) | (arg << 1) | (s << (1 + arg_bits));
}

nlohmann::json state_json(const StateVector& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : s.amps()) amps.push_back({a.real(), a.imag()});
  return {{"qubits", s.num_qubits()}, {"amplitudes", amps}};
}

StateVector state_from_json(const nlohmann::json& j) {
  const int n = j.at("qubits").get<int>();
  std::vector<sim::Complex> amps;
  for (const auto& a : j.at("amplitudes")) amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return StateVector::from_amplitudes(n, std::move(amps));
}

}  // namespace

circ::CircuitDesc m_circuit(const csa::CSAKey& key, const permver::PermutingVerifier& v, int seed_bits) {
  ensure_registered();
  return circ::CircuitDesc(std::make_shared<VerMCircuit>(key, v, seed_bits, false));
}

circ::CircuitDesc null_m_circuit(const csa::CSAKey& key, const permver::PermutingVerifier& v, int seed_bits) {
  ensure_registered();
  return circ::CircuitDesc(std::make_shared<VerMCircuit>(key, v, seed_bits, true));
}

std::optional<csa::CSAKey> circuit_key(const circ::CircuitDesc& c) {
  if (auto* impl = dynamic_cast<const VerMCircuit*>(&c.impl())) return impl->key();
  return std::nullopt;
}

obf::Phi phi_for(const permver::PermutingVerifier& v, const Config& cfg) {
  ensure_registered();
  const Bytes params = VerMCircuit::verifier_bytes(v, cfg.prg_seed_bits);
  Writer id;
  id.raw(params).u32(cfg.lambda_code);
  const std::string tag = "qma-ver-m/" + to_hex(crypto::sha256(id.out())).substr(0, 16);
  const int lambda = cfg.lambda_code;
  return {tag, [params, lambda](const circ::CircuitDesc& c) {
            auto* impl = dynamic_cast<const VerMCircuit*>(&c.impl());
            if (!impl || impl->is_null()) return false;
            return impl->key().lambda() == lambda &&
                   VerMCircuit::verifier_bytes(impl->verifier(), impl->seed_bits()) == params;
          }};
}

nlohmann::json Proof::to_json() const { return {{"state", state_json(state)}, {"obfuscation", obf.to_json()}}; }

Proof Proof::from_json(const nlohmann::json& j) {
  try {
    return {state_from_json(j.at("state")), obf::PcObfuscation::from_json(j.at("obfuscation"))};
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("protocol: bad proof JSON: ") + e.what());
  }
}

std::pair<Crs, obf::PcTrapdoor> ext0(const obf::OracleWorld& w, Rng& rng) {
  auto [pp, td] = obf::pc_ext0(w, rng);
  return {Crs{pp}, td};
}

Crs setup(const obf::OracleWorld& w, Rng& rng) { return ext0(w, rng).first; }

Proof prove_entangled(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h,
                      const StateVector& witness, const Config& cfg, Rng& rng) {
  cfg.validate();
  const auto v = make_verifier(h, cfg);
  check_size(v, cfg);
  if (witness.num_qubits() != v.total_qubits()) throw MalformedInput("protocol: witness has the wrong qubit count");
  auto key = csa::keygen(cfg.lambda_code, v.total_qubits(), rng);
  Proof p{csa::enc(key, witness), {}};
  const obf::PcParams params{cfg.lambda_cc, cfg.backend};
  p.obf = obf::pc_obfuscate(w, crs.pp, phi_for(v, cfg), m_circuit(key, v, cfg.prg_seed_bits), params, rng);
  return p;
}

Proof prove(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h,
            const StateVector& witness_copy, const Config& cfg, Rng& rng) {
  const auto v = make_verifier(h, cfg);
  check_size(v, cfg);
  if (witness_copy.num_qubits() != h.qubits()) throw MalformedInput("protocol: witness copy has the wrong qubit count");
  StateVector full = witness_copy;
  for (std::size_t c = 1; c < v.len(); ++c) full = sim::tensor(full, witness_copy);
  return prove_entangled(w, crs, h, full, cfg, rng);
}

ati::MixturePOVM verifier_povm(const obf::OracleWorld& w, const obf::PcObfuscation& o,
                               const permver::PermutingVerifier& v, const Config& cfg, int physical_qubits, Rng& rng) {
  const int m = v.total_qubits();
  const int arg_bits = std::max(m, cfg.prg_seed_bits);
  const std::size_t dim = std::size_t{1} << physical_qubits;
  const int block = physical_qubits / m;
  auto table = [&](int sel, std::uint64_t arg) {
    auto t = std::make_shared<std::vector<std::uint8_t>>(dim);
    for (std::uint64_t s = 0; s < dim; ++s)
      (*t)[s] = obf::pc_eval(w, o, BitVector(o.arity, circuit_input(arg_bits, sel, arg, s))).get(0);
    return t;
  };
  const auto v0 = table(0, 0);
  const auto v1 = table(0, (1ULL << m) - 1);
  const std::uint64_t all = dim - 1;

  // Pi v = H V1 H V0 v and its adjoint V0 H V1 H.
  auto pi = [v0, v1, all](ati::Vec x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!(*v0)[i]) x(i) = 0;
    std::vector<sim::Complex> a(x.data(), x.data() + x.size());
    sim::apply_hadamard(a, all);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(*v1)[i]) a[i] = 0;
    sim::apply_hadamard(a, all);
    return a;
  };
  auto pi_adj = [v0, v1, all](std::vector<sim::Complex> a) {
    sim::apply_hadamard(a, all);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(*v1)[i]) a[i] = 0;
    sim::apply_hadamard(a, all);
    ati::Vec x = Eigen::Map<ati::Vec>(a.data(), a.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!(*v0)[i]) x(i) = 0;
    return x;
  };

  // Seeds r that select the same permutation share one oracle table.
  std::map<std::vector<std::size_t>, std::pair<std::uint64_t, int>> groups;
  for (std::uint64_t r = 0; r < (1ULL << cfg.prg_seed_bits); ++r) {
    auto [it, fresh] = groups.try_emplace(permutation_for_seed(v.len(), r), r, 0);
    ++it->second.second;
  }
  ati::MixturePOVM povm(dim);
  for (const auto& [perm, rep] : groups) {
    const auto [r, count] = rep;
    const auto mt = table(1, r);
    std::uint64_t mask = 0;
    const auto theta = permver::samp_perm(v, perm).theta;
    for (int i = 0; i < m; ++i)
      if (theta.get(i)) mask |= ((1ULL << block) - 1) << (i * block);
    povm.add(static_cast<double>(count), [pi, pi_adj, mt, mask](const ati::Vec& x) {
      auto a = pi(x);
      sim::apply_hadamard(a, mask);
      for (std::size_t i = 0; i < a.size(); ++i)
        if ((*mt)[i]) a[i] = 0;  // I - M
      sim::apply_hadamard(a, mask);
      return pi_adj(std::move(a));
    });
  }
  povm.set_support(ati::orthonormal_range(
      [pi_adj](const ati::Vec& x) { return pi_adj(std::vector<sim::Complex>(x.data(), x.data() + x.size())); }, dim,
      (std::size_t{1} << m) + 8, rng));
  return povm;
}

VerifyOutcome verify(const obf::OracleWorld& w, const Crs& crs, const zx::HamiltonianInstance& h, const Proof& proof,
                     const Config& cfg, Rng& rng) {
  cfg.validate();
  VerifyOutcome out;
  const auto v = make_verifier(h, cfg);
  check_size(v, cfg);
  const int phys = physical_for(v, cfg);
  if (proof.state.num_qubits() != phys) {
    out.diagnostics.push_back("state_size_mismatch");
    return out;
  }
  const auto rep = obf::pc_verify(w, crs.pp, phi_for(v, cfg), proof.obf);
  if (!rep.ok) {
    out.diagnostics = rep.diagnostics;
    return out;
  }
  if (proof.obf.arity != 1 + std::max(v.total_qubits(), cfg.prg_seed_bits) + phys) {
    out.diagnostics.push_back("arity_mismatch");
    return out;
  }
  const auto povm = verifier_povm(w, proof.obf, v, cfg, phys, rng);
  const auto spec = ati::spectral_decomposition(povm);
  const auto t = ati::threshold_measure(spec, proof.state, cfg.ati_gamma(), rng);
  out.accept = t.accept;
  out.prob_accept = t.prob_accept;
  out.eigenvalue = t.eigenvalue;
  if (!t.accept) out.diagnostics.push_back("threshold_rejected");
  if (t.post) out.residual = Proof{*t.post, proof.obf};
  return out;
}

StateVector ext1(const obf::OracleWorld& w, const Crs& crs, const obf::PcTrapdoor& td,
                 const zx::HamiltonianInstance& h, const Proof& residual, const Config& cfg) {
  ensure_registered();
  const auto v = make_verifier(h, cfg);
  const auto c = obf::pc_extract(w, crs.pp, td, phi_for(v, cfg), residual.obf);
  const auto key = circuit_key(c);
  if (!key) throw ExtractionError("protocol: extracted circuit carries no key");
  if (key->physical_qubits() != residual.state.num_qubits())
    throw ExtractionError("protocol: extracted key does not match the state size");
  const std::uint64_t all = key->hadamard_mask(BitVector::ones(key->n()));
  auto p0 = sim::project_predicate(residual.state, csa::ver_predicate(*key, BitVector::zeros(key->n())));
  if (!p0.post_one) throw ExtractionError("protocol: state fails Ver in the computational basis");
  auto s = std::move(*p0.post_one);
  sim::apply_hadamard(s.mutable_amps(), all);
  auto p1 = sim::project_predicate(s, csa::ver_predicate(*key, BitVector::ones(key->n())));
  if (!p1.post_one) throw ExtractionError("protocol: state fails Ver in the Hadamard basis");
  s = std::move(*p1.post_one);
  sim::apply_hadamard(s.mutable_amps(), all);
  try {
    return csa::enc_adjoint(*key, s);
  } catch (const IntegrityError& e) {
    throw ExtractionError(e.what());
  }
}

Simulation simulate(const obf::OracleWorld& w, const zx::HamiltonianInstance& h, const Config& cfg, Rng& rng) {
  cfg.validate();
  const auto v = make_verifier(h, cfg);
  check_size(v, cfg);
  auto [pp, td] = obf::pc_simgen(w, rng);
  auto key = csa::keygen(cfg.lambda_code, v.total_qubits(), rng);
  Simulation sim{Crs{pp}, td, Proof{csa::enc(key, StateVector::zero(v.total_qubits())), {}}};
  const obf::PcParams params{cfg.lambda_cc, cfg.backend};
  sim.proof.obf =
      obf::pc_simobf(w, pp, td, phi_for(v, cfg), null_m_circuit(key, v, cfg.prg_seed_bits), params, rng);
  return sim;
}

std::vector<double> per_copy_acceptance(const zx::HamiltonianInstance& h, const StateVector& state) {
  const int ell = h.qubits();
  if (state.num_qubits() % ell) throw MalformedInput("protocol: state is not a whole number of copies");
  const int copies = state.num_qubits() / ell;
  const Eigen::MatrixXcd e = zx::acceptance_operator(h);
  const std::size_t d = std::size_t{1} << ell;
  std::vector<double> out;
  for (int c = 0; c < copies; ++c) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    const std::uint64_t mask = (d - 1) << (c * ell);
    for (std::size_t i = 0; i < state.dim(); ++i) {
      if (state[i] == sim::Complex{}) continue;
      const std::size_t rest = i & ~mask, a = (i & mask) >> (c * ell);
      for (std::size_t b = 0; b < d; ++b) {
        const std::size_t j = rest | (b << (c * ell));
        rho(a, b) += state[i] * std::conj(state[j]);
      }
    }
    out.push_back((e * rho).trace().real());
  }
  return out;
}

double family_acceptance(const permver::PermutingVerifier& v, const StateVector& state, const Config& cfg) {
  double acc = 0;
  const std::uint64_t seeds = 1ULL << cfg.prg_seed_bits;
  std::map<std::vector<std::size_t>, int> groups;
  for (std::uint64_t r = 0; r < seeds; ++r) ++groups[permutation_for_seed(v.len(), r)];
  for (const auto& [perm, count] : groups) {
    auto sm = permver::samp_perm(v, perm);
    acc += count * sim::measure_zx(state, sm.theta, sm.f).prob_accept;
  }
  return acc / static_cast<double>(seeds);
}

}  // namespace qmalab::protocol
