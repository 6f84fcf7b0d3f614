#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "k3db/enumerate.hpp"
#include "k3db/formulas.hpp"
#include "k3db/singularity.hpp"

using namespace k3db;

namespace {

// Independent enumeration for small bounds: walk the full product space
// of per-type counts with an odometer and keep the vectors whose rank
// fits.  No pruning, no recursion over elements.
std::set<std::string> brute_k3_baskets(int bound, bool include_empty) {
  auto types = singularity_types(bound);
  int budget = bound - 1;
  std::vector<int> cap(types.size()), counts(types.size(), 0);
  for (size_t i = 0; i < types.size(); ++i) cap[i] = budget / (types[i].r - 1);

  std::set<std::string> out;
  for (;;) {
    int rank = 0;
    for (size_t i = 0; i < types.size(); ++i) rank += counts[i] * (types[i].r - 1);
    if (rank <= budget) {
      Basket b;
      for (size_t i = 0; i < types.size(); ++i)
        for (int k = 0; k < counts[i]; ++k) b.push_back(types[i]);
      if (!b.empty() || include_empty) out.insert(basket_str(make_basket(std::move(b))));
    }
    size_t i = 0;
    while (i < counts.size() && counts[i] == cap[i]) counts[i++] = 0;
    if (i == counts.size()) break;
    ++counts[i];
  }
  return out;
}

}  // namespace

TEST_CASE("modular inverse", "[basket]") {
  CHECK(inverse_mod(4, 13) == 10);
  CHECK(inverse_mod(3, 13) == 9);
  CHECK(inverse_mod(7, 17) == 5);
  CHECK(inverse_mod(1, 2) == 1);
  CHECK_THROWS_AS(inverse_mod(6, 15), NotCoprime);
  for (int r = 2; r <= 40; ++r)
    for (int a = 1; a < r; ++a) {
      if (std::gcd(a, r) != 1) continue;
      int b = inverse_mod(a, r);
      CHECK((a * b) % r == 1);
      CHECK(inverse_mod(b, r) == a);
    }
}

TEST_CASE("singularity canonical form", "[basket]") {
  CHECK(QuotientSingularity(13, 10) == QuotientSingularity(13, 3));
  CHECK(QuotientSingularity(5, 7).a == 2);
  CHECK(QuotientSingularity(5, -2).a == 2);
  CHECK(QuotientSingularity(2, 1).a == 1);
  CHECK_THROWS_AS(QuotientSingularity(4, 2), NotCoprime);
  CHECK_THROWS_AS(QuotientSingularity(5, 5), NotCoprime);
  CHECK_THROWS_AS(QuotientSingularity(1, 1), NotCoprime);
  // Canonicalisation is idempotent.
  for (int r = 2; r <= 20; ++r)
    for (int a = 1; a < r; ++a) {
      if (std::gcd(a, r) != 1) continue;
      QuotientSingularity s(r, a);
      QuotientSingularity t(s.r, s.a);
      CHECK(s == t);
      CHECK(s.a * 2 <= s.r);
    }
}

TEST_CASE("basket parse and print", "[basket]") {
  CHECK(basket_str(basket_parse("13/10, 2/1, 5/2")) == "2/1,5/2,13/3");
  CHECK(basket_parse("").empty());
  CHECK(basket_parse("  ").empty());
  CHECK_THROWS_AS(basket_parse("4/2"), NotCoprime);
  CHECK_THROWS_AS(basket_parse("0/1"), NotCoprime);
  CHECK_THROWS_AS(basket_parse("5"), IoError);
  CHECK_THROWS_AS(basket_parse("5/"), IoError);
  CHECK_THROWS_AS(basket_parse(",5/2"), IoError);
  CHECK(curve_basket_parse("3, 2, 7") == CurveBasket{2, 3, 7});
  CHECK_THROWS_AS(curve_basket_parse("1"), IoError);
  // Round trip on every canonical type up to index 15.
  for (const auto& s : singularity_types(15)) {
    Basket b{s, s};
    CHECK(basket_parse(basket_str(b)) == b);
  }
}

TEST_CASE("rank and validity", "[basket]") {
  CHECK(k3_rank(basket_parse("2/1,5/1,13/3")) == 17);
  CHECK(k3_rank({}) == 0);
  CHECK(k3_basket_valid(basket_parse("2/1,5/1,13/3")));
  CHECK(k3_basket_valid(basket_parse("7/2,7/2,8/3")));  // rank 19, the cap
  CHECK_FALSE(k3_basket_valid(basket_parse("7/2,7/2,9/2")));
  CHECK(fano_basket_valid(basket_parse("11/3,11/3")));
  CHECK_FALSE(fano_basket_valid(basket_parse("13/4,13/4")));
}

TEST_CASE("enumeration matches the brute-force product walk", "[basket]") {
  for (int bound = 2; bound <= 7; ++bound) {
    for (bool include_empty : {true, false}) {
      auto brute = brute_k3_baskets(bound, include_empty);
      auto fancy = enumerate_k3_baskets(bound, include_empty);
      std::set<std::string> got;
      for (const auto& item : fancy.items) got.insert(basket_str(item.basket));
      REQUIRE(got.size() == fancy.items.size());
      REQUIRE(got == brute);
    }
  }
}

TEST_CASE("enumeration order and counts", "[basket]") {
  auto e = enumerate_k3_baskets(12);
  CHECK(e.items.size() == 329);
  int rank11 = 0;
  for (const auto& item : e.items) {
    if (k3_rank(item.basket) == 11) ++rank11;
    CHECK(k3_rank(item.basket) <= 11);
  }
  CHECK(rank11 == 109);
  CHECK(e.items.front().basket.empty());
  // Ascending (rank, size, lex) order.
  for (size_t i = 1; i < e.items.size(); ++i) {
    const Basket& x = e.items[i - 1].basket;
    const Basket& y = e.items[i].basket;
    int rx = k3_rank(x), ry = k3_rank(y);
    bool ordered = rx < ry || (rx == ry && x.size() < y.size()) ||
                   (rx == ry && x.size() == y.size() &&
                    std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end()));
    REQUIRE(ordered);
  }
}

TEST_CASE("minimal genus", "[basket]") {
  Basket b = basket_parse("4/1,5/2,5/2");
  CHECK(degree(Kind::K3, -1, b) == Rational(-17, 20));
  CHECK(degree(Kind::K3, 0, b) == Rational(23, 20));
  CHECK(min_genus(Kind::K3, b) == 0);
  CHECK(min_genus(Kind::K3, {}) == 2);
  // Degree grows by exactly 2 per genus step.
  for (int g = -1; g < 4; ++g)
    CHECK(degree(Kind::K3, g + 1, b) - degree(Kind::K3, g, b) == Rational(2));
}

TEST_CASE("fano basket walk", "[basket]") {
  int count = 0;
  bool saw_empty = false, saw_big = false;
  for_each_fano_basket(4, nullptr, [&](const Basket& b) {
    ++count;
    if (b.empty()) saw_empty = true;
    Rational s(0);
    for (const auto& e : b) s += Rational(e.r) - Rational(1, e.r);
    CHECK(s < Rational(4));
    if (b.size() == 2 && b[0].r == 2 && b[1].r == 2) saw_big = true;
  });
  CHECK(saw_empty);
  CHECK(saw_big);
  // The cap prunes by partial degree sums without losing any basket
  // whose full sum fits.
  Rational cap(3);
  std::set<std::string> capped, filtered;
  for_each_fano_basket(4, &cap, [&](const Basket& b) { capped.insert(basket_str(b)); });
  for_each_fano_basket(4, nullptr, [&](const Basket& b) {
    Rational s(0);
    for (const auto& e : b) {
      int bb = inverse_mod(e.a, e.r);
      s += Rational(bb * (e.r - bb), e.r);
    }
    if (s <= cap) filtered.insert(basket_str(b));
  });
  CHECK(capped == filtered);
}
