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

// Linear algebra over GF(2) for ambient dimension <= 64.
//
// Vectors are stored little-endian: coordinate i is bit i of the word. The
// string form writes coordinate 0 first, so "100" is e_0. "Lexicographic"
// always means the string order.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmalab/common.hpp"

namespace qmalab::gf2 {

inline constexpr int kMaxAmbient = 64;

class BitVector {
 public:
  BitVector() = default;
  BitVector(int len, std::uint64_t bits);
  static BitVector zeros(int len) { return BitVector(len, 0); }
  static BitVector ones(int len);
  static BitVector unit(int len, int i);
  static BitVector parse(const std::string& s);

  int size() const { return len_; }
  std::uint64_t word() const { return bits_; }
  bool get(int i) const { return (bits_ >> i) & 1u; }
  void set(int i, bool v);
  int weight() const;
  bool is_zero() const { return bits_ == 0; }
  std::string str() const;

  // Concatenation: this occupies the low coordinates.
  BitVector concat(const BitVector& tail) const;
  BitVector slice(int from, int count) const;

  BitVector operator^(const BitVector& o) const;
  BitVector& operator^=(const BitVector& o);
  bool operator==(const BitVector& o) const = default;
  // String (lexicographic) order, for equal lengths.
  bool lex_less(const BitVector& o) const;

 private:
  std::uint64_t bits_ = 0;
  int len_ = 0;
};

int dot(const BitVector& a, const BitVector& b);
inline int dot_words(std::uint64_t a, std::uint64_t b) { return __builtin_parityll(a & b); }

// Reduced row echelon form. Pivots are taken in coordinate order, zero rows
// are dropped and duplicate rows collapse.
std::vector<BitVector> rref(const std::vector<BitVector>& rows);

class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int ambient) : ambient_(ambient) {}
  static Subspace span(int ambient, const std::vector<BitVector>& gens);
  static Subspace full(int ambient);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<BitVector>& basis() const { return basis_; }

  // Unique coset representative with zeros at every pivot coordinate; this
  // is also the lexicographically smallest element of v + S.
  std::uint64_t reduce(std::uint64_t v) const;
  BitVector reduce(const BitVector& v) const;
  bool contains(const BitVector& v) const { return reduce(v.word()) == 0; }
  bool contains_word(std::uint64_t v) const { return reduce(v) == 0; }

  Subspace with(const BitVector& v) const;
  // {v : v.s = 0 for all s in S}
  Subspace dual() const;
  // All 2^dim elements (dim <= 24).
  std::vector<std::uint64_t> elements() const;

  bool operator==(const Subspace& o) const;

 private:
  int ambient_ = 0;
  std::vector<BitVector> basis_;  // RREF rows
  std::vector<std::uint64_t> pivot_masks_;
};

// Uniform over all dim-dimensional subspaces of F_2^ambient.
Subspace sample_subspace(int dim, int ambient, Rng& rng);
// Uniform over F_2^ambient \ S.
BitVector sample_outside(const Subspace& s, Rng& rng);
BitVector sample_vector(int len, Rng& rng);

struct DualDecomposition {
  Subspace s_hat;         // (S + span{Delta})^perp
  BitVector delta_hat;    // lexicographically smallest of S^perp \ s_hat
};

DualDecomposition dual_decomposition(const Subspace& s, const BitVector& delta);

// v in S + shift
bool coset_member(const BitVector& v, const Subspace& s, const BitVector& shift);

void to_json(nlohmann::json& j, const BitVector& v);
void from_json(const nlohmann::json& j, BitVector& v);
void to_json(nlohmann::json& j, const Subspace& s);
// Expects {"ambient": n, "basis": ["..."]}.
void from_json(const nlohmann::json& j, Subspace& s);

}  // namespace qmalab::gf2
