#include <map>
#include <set>

#include "doctest.h"
#include "qmalab/gf2.hpp"

using namespace qmalab;
using namespace qmalab::gf2;

namespace {
BitVector bv(const char* s) { return BitVector::parse(s); }
}

TEST_CASE("rref basics") {
  auto r = rref({bv("11"), bv("01")});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == bv("10"));
  CHECK(r[1] == bv("01"));

  CHECK(rref({bv("000"), bv("101")}).size() == 1);
  auto dup = rref({bv("110"), bv("110"), bv("011")});
  CHECK(dup.size() == 2);
  CHECK(dup[0] == bv("101"));
  CHECK(dup[1] == bv("011"));
}

TEST_CASE("bit strings are little-endian and validated") {
  auto v = bv("100");
  CHECK(v.word() == 1);
  CHECK(v.str() == "100");
  CHECK_THROWS_AS(BitVector::parse("10x"), MalformedInput);
  CHECK_THROWS_AS(BitVector::parse(std::string(65, '0')), SizingError);
  CHECK(bv("010").lex_less(bv("100")));
  CHECK_FALSE(bv("100").lex_less(bv("010")));
}

TEST_CASE("dual decomposition worked examples") {
  {
    auto s = Subspace::span(3, {bv("100")});
    auto d = dual_decomposition(s, bv("010"));
    CHECK(d.s_hat == Subspace::span(3, {bv("001")}));
    CHECK(d.delta_hat == bv("010"));
  }
  {
    Subspace s(3);
    auto d = dual_decomposition(s, bv("100"));
    CHECK(d.s_hat.dim() == 2);
    for (std::uint64_t w = 0; w < 8; ++w) CHECK(d.s_hat.contains(BitVector(3, w)) == ((w & 1) == 0));
    CHECK(d.delta_hat == bv("100"));
  }
  CHECK_THROWS_AS(dual_decomposition(Subspace::span(3, {bv("100")}), bv("100")), MalformedInput);
}

TEST_CASE("dual properties on random subspaces") {
  Rng rng(7);
  for (int amb = 1; amb <= 9; ++amb) {
    for (int dim = 0; dim < amb; ++dim) {
      for (int rep = 0; rep < 5; ++rep) {
        auto s = sample_subspace(dim, amb, rng);
        CHECK(s.dim() == dim);
        CHECK(s.dual().dual() == s);
        CHECK(s.dual().dim() == amb - dim);
        auto delta = sample_outside(s, rng);
        auto d = dual_decomposition(s, delta);
        CHECK(d.s_hat.dim() == amb - dim - 1);
        // delta_hat is the lexicographic minimum of S^perp \ s_hat.
        auto sperp = s.dual();
        std::optional<BitVector> best;
        for (std::uint64_t w = 0; w < (1ULL << amb); ++w) {
          BitVector v(amb, w);
          if (sperp.contains(v) && !d.s_hat.contains(v) && (!best || v.lex_less(*best))) best = v;
        }
        REQUIRE(best);
        CHECK(d.delta_hat == *best);
        CHECK(dot(delta, d.delta_hat) == 1);
      }
    }
  }
}

TEST_CASE("sample_subspace is uniform") {
  Rng rng(11);
  std::map<std::uint64_t, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[sample_subspace(1, 2, rng).basis()[0].word()]++;
  REQUIRE(counts.size() == 3);
  for (auto& [w, c] : counts) CHECK(std::abs(c / double(n) - 1.0 / 3) < 0.02);
}

TEST_CASE("coset membership") {
  auto s = Subspace::span(3, {bv("110")});
  CHECK(coset_member(bv("011"), s, bv("101")));
  CHECK(coset_member(bv("101"), s, bv("101")));
  CHECK_FALSE(coset_member(bv("001"), s, bv("101")));
}

TEST_CASE("json round trip") {
  auto s = Subspace::span(4, {bv("1100"), bv("0011")});
  nlohmann::json j = s;
  CHECK(j["basis"][0] == "1100");
  CHECK(j.get<Subspace>() == s);
  CHECK_THROWS_AS(nlohmann::json({{"ambient", 2}, {"basis", {"102"}}}).get<Subspace>(), MalformedInput);
  CHECK_THROWS_AS(nlohmann::json({{"ambient", 3}, {"basis", {"10"}}}).get<Subspace>(), MalformedInput);
}
