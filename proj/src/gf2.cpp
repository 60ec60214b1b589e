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

#include "qmalab/gf2.hpp"

#include <algorithm>

namespace qmalab::gf2 {

namespace {

std::uint64_t low_mask(int len) { return len >= 64 ? ~0ULL : ((1ULL << len) - 1); }

void check_len(int len) {
  if (len < 0 || len > kMaxAmbient) throw SizingError("gf2: length " + std::to_string(len) + " outside [0,64]");
}

}  // namespace

BitVector::BitVector(int len, std::uint64_t bits) : bits_(bits), len_(len) {
  check_len(len);
  if (bits & ~low_mask(len)) throw MalformedInput("gf2: bits set beyond vector length");
}

BitVector BitVector::ones(int len) { return BitVector(len, low_mask(len)); }

BitVector BitVector::unit(int len, int i) {
  if (i < 0 || i >= len) throw MalformedInput("gf2: unit index out of range");
  return BitVector(len, 1ULL << i);
}

BitVector BitVector::parse(const std::string& s) {
  check_len(static_cast<int>(s.size()));
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      w |= 1ULL << i;
    else if (s[i] != '0')
      throw MalformedInput("gf2: bit string contains '" + std::string(1, s[i]) + "'");
  }
  return BitVector(static_cast<int>(s.size()), w);
}

void BitVector::set(int i, bool v) {
  if (v)
    bits_ |= 1ULL << i;
  else
    bits_ &= ~(1ULL << i);
}

int BitVector::weight() const { return __builtin_popcountll(bits_); }

std::string BitVector::str() const {
  std::string s(len_, '0');
  for (int i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitVector BitVector::concat(const BitVector& tail) const {
  check_len(len_ + tail.len_);
  return BitVector(len_ + tail.len_, bits_ | (tail.len_ ? tail.bits_ << len_ : 0));
}

BitVector BitVector::slice(int from, int count) const {
  if (from < 0 || count < 0 || from + count > len_) throw MalformedInput("gf2: slice out of range");
  return BitVector(count, count == 0 ? 0 : (bits_ >> from) & low_mask(count));
}

BitVector BitVector::operator^(const BitVector& o) const {
  if (len_ != o.len_) throw MalformedInput("gf2: length mismatch");
  return BitVector(len_, bits_ ^ o.bits_);
}

BitVector& BitVector::operator^=(const BitVector& o) { return *this = *this ^ o; }

bool BitVector::lex_less(const BitVector& o) const {
  std::uint64_t diff = bits_ ^ o.bits_;
  if (!diff) return false;
  int first = __builtin_ctzll(diff);
  return !get(first);  // first differing coordinate: 0 < 1
}

int dot(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw MalformedInput("gf2: length mismatch in dot");
  return dot_words(a.word(), b.word());
}

std::vector<BitVector> rref(const std::vector<BitVector>& rows) {
  if (rows.empty()) return {};
  const int len = rows.front().size();
  std::vector<std::uint64_t> m;
  for (const auto& r : rows) {
    if (r.size() != len) throw MalformedInput("gf2: rows of different length");
    m.push_back(r.word());
  }
  std::size_t rank = 0;
  for (int col = 0; col < len && rank < m.size(); ++col) {
    const std::uint64_t bit = 1ULL << col;
    auto it = std::find_if(m.begin() + rank, m.end(), [&](std::uint64_t w) { return w & bit; });
    if (it == m.end()) continue;
    std::swap(*it, m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != rank && (m[r] & bit)) m[r] ^= m[rank];
    ++rank;
  }
  std::vector<BitVector> out;
  for (std::size_t r = 0; r < rank; ++r) out.emplace_back(len, m[r]);
  return out;
}

Subspace Subspace::span(int ambient, const std::vector<BitVector>& gens) {
  check_len(ambient);
  for (const auto& g : gens)
    if (g.size() != ambient) throw MalformedInput("gf2: generator length differs from ambient");
  Subspace s(ambient);
  s.basis_ = rref(gens);
  for (const auto& b : s.basis_) s.pivot_masks_.push_back(b.word() & (~b.word() + 1));
  return s;
}

Subspace Subspace::full(int ambient) {
  std::vector<BitVector> gens;
  for (int i = 0; i < ambient; ++i) gens.push_back(BitVector::unit(ambient, i));
  return span(ambient, gens);
}

std::uint64_t Subspace::reduce(std::uint64_t v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (v & pivot_masks_[i]) v ^= basis_[i].word();
  return v;
}

BitVector Subspace::reduce(const BitVector& v) const {
  if (v.size() != ambient_) throw MalformedInput("gf2: vector length differs from ambient");
  return BitVector(ambient_, reduce(v.word()));
}

Subspace Subspace::with(const BitVector& v) const {
  auto gens = basis_;
  gens.push_back(v);
  return span(ambient_, gens);
}

Subspace Subspace::dual() const {
  // For RREF rows with pivots P, each free coordinate f yields the dual
  // vector e_f + sum_{rows r with bit f} e_{pivot(r)}.
  std::uint64_t pivots = 0;
  for (auto p : pivot_masks_) pivots |= p;
  std::vector<BitVector> gens;
  for (int f = 0; f < ambient_; ++f) {
    if (pivots >> f & 1) continue;
    std::uint64_t w = 1ULL << f;
    for (std::size_t r = 0; r < basis_.size(); ++r)
      if (basis_[r].get(f)) w |= pivot_masks_[r];
    gens.emplace_back(ambient_, w);
  }
  return span(ambient_, gens);
}

std::vector<std::uint64_t> Subspace::elements() const {
  if (dim() > 24) throw SizingError("gf2: refusing to enumerate subspace of dim > 24");
  std::vector<std::uint64_t> out(1ULL << dim());
  for (std::size_t mask = 1; mask < out.size(); ++mask) {
    int low = __builtin_ctzll(mask);
    out[mask] = out[mask & (mask - 1)] ^ basis_[low].word();
  }
  return out;
}

bool Subspace::operator==(const Subspace& o) const {
  if (ambient_ != o.ambient_ || basis_.size() != o.basis_.size()) return false;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].word() != o.basis_[i].word()) return false;
  return true;
}

BitVector sample_vector(int len, Rng& rng) { return BitVector(len, rng.next_u64() & low_mask(len)); }

Subspace sample_subspace(int dim, int ambient, Rng& rng) {
  check_len(ambient);
  if (dim < 0 || dim > ambient) throw MalformedInput("gf2: subspace dimension outside [0, ambient]");
  // Rejection over ordered bases: every subspace has the same number of
  // ordered bases, so the accepted span is uniform.
  for (;;) {
    std::vector<BitVector> gens;
    for (int i = 0; i < dim; ++i) gens.push_back(sample_vector(ambient, rng));
    Subspace s = Subspace::span(ambient, gens);
    if (s.dim() == dim) return s;
  }
}

BitVector sample_outside(const Subspace& s, Rng& rng) {
  if (s.dim() == s.ambient()) throw MalformedInput("gf2: subspace is the whole space");
  for (;;) {
    BitVector v = sample_vector(s.ambient(), rng);
    if (!s.contains(v)) return v;
  }
}

DualDecomposition dual_decomposition(const Subspace& s, const BitVector& delta) {
  if (delta.size() != s.ambient()) throw MalformedInput("gf2: Delta length differs from ambient");
  if (s.contains(delta)) throw MalformedInput("gf2: Delta lies in S");
  DualDecomposition out;
  out.s_hat = s.with(delta).dual();
  const Subspace s_perp = s.dual();
  for (const auto& b : s_perp.basis()) {
    if (!out.s_hat.contains(b)) {
      // S^perp \ s_hat is the single coset b + s_hat; reducing by the RREF
      // basis gives its lexicographic minimum.
      out.delta_hat = out.s_hat.reduce(b);
      return out;
    }
  }
  throw Error("gf2: dual decomposition failed (inconsistent dimensions)");
}

bool coset_member(const BitVector& v, const Subspace& s, const BitVector& shift) {
  return s.contains(v ^ shift);
}

void to_json(nlohmann::json& j, const BitVector& v) { j = v.str(); }

void from_json(const nlohmann::json& j, BitVector& v) {
  if (!j.is_string()) throw MalformedInput("gf2: expected a bit string");
  v = BitVector::parse(j.get<std::string>());
}

void to_json(nlohmann::json& j, const Subspace& s) {
  j = nlohmann::json{{"ambient", s.ambient()}, {"basis", s.basis()}};
}

void from_json(const nlohmann::json& j, Subspace& s) {
  if (!j.is_object() || !j.contains("ambient") || !j.contains("basis"))
    throw MalformedInput("gf2: subspace needs 'ambient' and 'basis'");
  const int ambient = j.at("ambient").get<int>();
  std::vector<BitVector> gens;
  for (const auto& e : j.at("basis")) gens.push_back(e.get<BitVector>());
  s = Subspace::span(ambient, gens);
}

}  // namespace qmalab::gf2
