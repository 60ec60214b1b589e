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

#include "qmalab/csa.hpp"

#include <cmath>
#include <sstream>

namespace qmalab::csa {

namespace {
constexpr int kTableBlockLimit = 16;
}

BlockKey make_block(Subspace s, BitVector delta, BitVector x, BitVector z) {
  const int amb = s.ambient();
  if (delta.size() != amb || x.size() != amb || z.size() != amb)
    throw MalformedInput("csa: block vectors must match the subspace ambient dimension");
  BlockKey b;
  auto dd = gf2::dual_decomposition(s, delta);  // rejects Delta in S
  b.s_delta = s.with(delta);
  b.s_perp = s.dual();
  b.s = std::move(s);
  b.delta = delta;
  b.x = x;
  b.z = z;
  b.s_hat = std::move(dd.s_hat);
  b.delta_hat = dd.delta_hat;
  return b;
}

CSAKey::CSAKey(int lambda, std::vector<BlockKey> blocks) : lambda_(lambda), blocks_(std::move(blocks)) {
  if (lambda < 1) throw MalformedInput("csa: lambda must be >= 1");
  if (blocks_.empty()) throw MalformedInput("csa: key has no blocks");
  const int b = block_size();
  if (static_cast<long>(b) * n() > gf2::kMaxAmbient) throw SizingError("csa: n*(2 lambda+1) exceeds 64");
  for (const auto& blk : blocks_)
    if (blk.s.ambient() != b || blk.s.dim() != lambda) throw MalformedInput("csa: block subspace has wrong shape");
  if (b <= kTableBlockLimit) {
    const std::size_t size = std::size_t{1} << b;
    for (int t = 0; t < 2; ++t) {
      dec_table_[t].resize(n());
      ver_table_[t].resize(n());
    }
    for (int i = 0; i < n(); ++i) {
      const auto& blk = blocks_[i];
      for (int t = 0; t < 2; ++t) {
        dec_table_[t][i].resize(size);
        ver_table_[t][i].resize(size);
      }
      for (std::uint64_t v = 0; v < size; ++v) {
        const std::uint64_t u0 = v ^ blk.x.word(), u1 = v ^ blk.z.word();
        dec_table_[0][i][v] = blk.s.contains_word(u0) ? 0 : blk.s.contains_word(u0 ^ blk.delta.word()) ? 1 : kBottom;
        dec_table_[1][i][v] =
            blk.s_hat.contains_word(u1) ? 0 : blk.s_hat.contains_word(u1 ^ blk.delta_hat.word()) ? 1 : kBottom;
        ver_table_[0][i][v] = blk.s_delta.contains_word(u0);
        ver_table_[1][i][v] = blk.s_perp.contains_word(u1);
      }
    }
  }
}

std::uint64_t CSAKey::block_bits(int i, std::uint64_t physical) const {
  const int b = block_size();
  return (physical >> (i * b)) & ((1ULL << b) - 1);
}

int CSAKey::decode_block(int i, bool theta, std::uint64_t v) const {
  if (!dec_table_[theta].empty()) return dec_table_[theta][i][v];
  const auto& blk = blocks_[i];
  if (!theta) {
    const std::uint64_t u = v ^ blk.x.word();
    return blk.s.contains_word(u) ? 0 : blk.s.contains_word(u ^ blk.delta.word()) ? 1 : kBottom;
  }
  const std::uint64_t u = v ^ blk.z.word();
  return blk.s_hat.contains_word(u) ? 0 : blk.s_hat.contains_word(u ^ blk.delta_hat.word()) ? 1 : kBottom;
}

bool CSAKey::ver_block(int i, bool theta, std::uint64_t v) const {
  if (!ver_table_[theta].empty()) return ver_table_[theta][i][v];
  const auto& blk = blocks_[i];
  return theta ? blk.s_perp.contains_word(v ^ blk.z.word()) : blk.s_delta.contains_word(v ^ blk.x.word());
}

std::uint64_t CSAKey::hadamard_mask(const BitVector& theta) const {
  if (theta.size() != n()) throw MalformedInput("csa: theta length differs from logical qubit count");
  const int b = block_size();
  std::uint64_t mask = 0;
  for (int i = 0; i < n(); ++i)
    if (theta.get(i)) mask |= ((1ULL << b) - 1) << (i * b);
  return mask;
}

nlohmann::json CSAKey::to_json() const {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : blocks_) blocks.push_back({{"S", b.s}, {"delta", b.delta}, {"x", b.x}, {"z", b.z}});
  return {{"lambda", lambda_}, {"n", n()}, {"blocks", blocks}};
}

CSAKey CSAKey::from_json(const nlohmann::json& j) {
  try {
    std::vector<BlockKey> blocks;
    for (const auto& b : j.at("blocks"))
      blocks.push_back(make_block(b.at("S").get<Subspace>(), b.at("delta").get<BitVector>(),
                                  b.at("x").get<BitVector>(), b.at("z").get<BitVector>()));
    if (static_cast<int>(blocks.size()) != j.at("n").get<int>()) throw MalformedInput("csa: block count != n");
    return CSAKey(j.at("lambda").get<int>(), std::move(blocks));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("csa: bad key JSON: ") + e.what());
  }
}

CSAKey keygen(int lambda, int n, Rng& rng) {
  if (lambda < 1 || n < 1) throw MalformedInput("csa: lambda and n must be positive");
  const int b = 2 * lambda + 1;
  if (static_cast<long>(b) * n > gf2::kMaxAmbient) throw SizingError("csa: n*(2 lambda+1) exceeds 64");
  std::vector<BlockKey> blocks;
  for (int i = 0; i < n; ++i) {
    auto s = gf2::sample_subspace(lambda, b, rng);
    auto delta = gf2::sample_outside(s, rng);
    auto x = gf2::sample_vector(b, rng);
    auto z = gf2::sample_vector(b, rng);
    blocks.push_back(make_block(std::move(s), delta, x, z));
  }
  return CSAKey(lambda, std::move(blocks));
}

namespace {

std::uint64_t concat_words(const CSAKey& key, BitVector BlockKey::*field) {
  std::uint64_t w = 0;
  for (int i = 0; i < key.n(); ++i) w |= (key.blocks()[i].*field).word() << (i * key.block_size());
  return w;
}

// Adds amp * |S_i + b_i Delta_i ...> (before the Pauli mask) into out.
void add_coset_product(const CSAKey& key, std::uint64_t logical, sim::Complex amp, std::vector<sim::Complex>& out) {
  const int b = key.block_size();
  std::vector<std::uint64_t> acc{0};
  for (int i = 0; i < key.n(); ++i) {
    const auto& blk = key.blocks()[i];
    const std::uint64_t shift = ((logical >> i) & 1) ? blk.delta.word() : 0;
    const auto elems = blk.s.elements();
    std::vector<std::uint64_t> next;
    next.reserve(acc.size() * elems.size());
    for (auto a : acc)
      for (auto e : elems) next.push_back(a | ((e ^ shift) << (i * b)));
    acc = std::move(next);
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(acc.size()));
  for (auto v : acc) out[v] += amp * norm;
}

}  // namespace

StateVector enc(const CSAKey& key, const StateVector& logical) {
  if (logical.num_qubits() != key.n()) throw MalformedInput("csa: logical state has wrong qubit count");
  const int phys = key.physical_qubits();
  sim::check_qubits(phys);
  std::vector<sim::Complex> out(std::size_t{1} << phys);
  for (std::size_t l = 0; l < logical.dim(); ++l)
    if (logical[l] != sim::Complex{}) add_coset_product(key, l, logical[l], out);
  sim::apply_pauli(out, concat_words(key, &BlockKey::x), concat_words(key, &BlockKey::z));
  return StateVector::from_amplitudes(phys, std::move(out));
}

StateVector enc_basis(const CSAKey& key, std::uint64_t logical) {
  return enc(key, StateVector::basis(key.n(), logical));
}

BasisPredicate dec_predicate(const CSAKey& key, const BitVector& theta, const BasisPredicate& f) {
  if (theta.size() != key.n() || f.arity != key.n())
    throw MalformedInput("csa: theta / predicate arity differ from logical qubit count");
  const std::uint64_t th = theta.word();
  return {key.physical_qubits(), [key, th, f](std::uint64_t v) {
            std::uint64_t m = 0;
            for (int i = 0; i < key.n(); ++i) {
              const int d = key.decode_block(i, (th >> i) & 1, key.block_bits(i, v));
              if (d == CSAKey::kBottom) return false;
              m |= static_cast<std::uint64_t>(d) << i;
            }
            return f(m);
          }};
}

BasisPredicate ver_predicate(const CSAKey& key, const BitVector& theta) {
  if (theta.size() != key.n()) throw MalformedInput("csa: theta length differs from logical qubit count");
  const std::uint64_t th = theta.word();
  return {key.physical_qubits(), [key, th](std::uint64_t v) {
            for (int i = 0; i < key.n(); ++i)
              if (!key.ver_block(i, (th >> i) & 1, key.block_bits(i, v))) return false;
            return true;
          }};
}

sim::ZXOutcome logical_measure(const CSAKey& key, const BitVector& theta, const BasisPredicate& f,
                               const StateVector& encoded) {
  if (encoded.num_qubits() != key.physical_qubits()) throw MalformedInput("csa: encoded state has wrong size");
  return sim::measure_zx(encoded, BitVector(key.physical_qubits(), key.hadamard_mask(theta)),
                         dec_predicate(key, theta, f));
}

double logical_measure_deviation(const CSAKey& key, const BitVector& theta, const BasisPredicate& f) {
  const auto dec = dec_predicate(key, theta, f);
  const std::uint64_t mask = key.hadamard_mask(theta);
  double worst = 0;
  for (std::uint64_t b = 0; b < (1ULL << key.n()); ++b) {
    auto lhs = enc_basis(key, b).amps();
    sim::apply_hadamard(lhs, mask);
    sim::project_in_place(lhs, dec);
    sim::apply_hadamard(lhs, mask);
    auto logical = StateVector::basis(key.n(), b).amps();
    sim::apply_hadamard(logical, theta.word());
    sim::project_in_place(logical, f);
    sim::apply_hadamard(logical, theta.word());
    std::vector<sim::Complex> rhs(lhs.size());
    for (std::uint64_t a = 0; a < logical.size(); ++a) {
      if (std::abs(logical[a]) < 1e-15) continue;
      const auto ea = enc_basis(key, a);
      for (std::size_t u = 0; u < rhs.size(); ++u) rhs[u] += logical[a] * ea[u];
    }
    for (std::size_t u = 0; u < rhs.size(); ++u) worst = std::max(worst, std::abs(lhs[u] - rhs[u]));
  }
  return worst;
}

double codespace_projector_check(const CSAKey& key) {
  const int phys = key.physical_qubits();
  if (phys > kMaxCheckQubits) throw SizingError("csa: codespace check capped at 12 physical qubits");
  const std::size_t dim = std::size_t{1} << phys;
  std::vector<StateVector> code;
  for (std::uint64_t l = 0; l < (1ULL << key.n()); ++l) code.push_back(enc_basis(key, l));
  const auto v0 = ver_predicate(key, BitVector::zeros(key.n()));
  const auto v1 = ver_predicate(key, BitVector::ones(key.n()));
  const std::uint64_t all = key.hadamard_mask(BitVector::ones(key.n()));
  double worst = 0;
  std::vector<sim::Complex> col(dim);
  for (std::size_t v = 0; v < dim; ++v) {
    std::fill(col.begin(), col.end(), sim::Complex{});
    if (v0(v)) {
      col[v] = 1;
      sim::apply_hadamard(col, all);
      sim::project_in_place(col, v1);
      sim::apply_hadamard(col, all);
    }
    for (std::size_t u = 0; u < dim; ++u) {
      sim::Complex lhs{};
      for (const auto& c : code) lhs += c[u] * std::conj(c[v]);
      worst = std::max(worst, std::abs(lhs - col[u]));
    }
  }
  return worst;
}

double codespace_weight(const CSAKey& key, const StateVector& encoded) {
  if (encoded.num_qubits() != key.physical_qubits()) throw MalformedInput("csa: encoded state has wrong size");
  double w = 0;
  for (std::uint64_t l = 0; l < (1ULL << key.n()); ++l) w += std::norm(enc_basis(key, l).inner(encoded));
  return w;
}

StateVector enc_adjoint(const CSAKey& key, const StateVector& encoded) {
  if (encoded.num_qubits() != key.physical_qubits()) throw MalformedInput("csa: encoded state has wrong size");
  std::vector<sim::Complex> logical(std::size_t{1} << key.n());
  double w = 0;
  for (std::uint64_t l = 0; l < logical.size(); ++l) {
    logical[l] = enc_basis(key, l).inner(encoded);
    w += std::norm(logical[l]);
  }
  if (1.0 - w > kLeakageTol) {
    std::ostringstream os;
    os << "csa: state leaves the codespace (codespace weight " << w << ")";
    throw IntegrityError(os.str());
  }
  return StateVector::normalized(key.n(), std::move(logical));
}

}  // namespace qmalab::csa
