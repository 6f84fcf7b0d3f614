#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "k3db/formulas.hpp"
#include "k3db/hilbert.hpp"
#include "k3db/poly.hpp"
#include "k3db/rational.hpp"

using namespace k3db;

namespace {

// Brute-force coefficients of prod 1/(1 - t^e): counts of ways to write
// n as an ordered tuple of multiples, one per factor.  Recursive and
// independent of the stride-sum used by expr_expand.
void count_products(const std::vector<int>& exps, size_t i, int n, int horizon,
                    std::vector<long long>& out) {
  if (i == exps.size()) {
    ++out[static_cast<size_t>(n)];
    return;
  }
  for (int k = n; k <= horizon; k += exps[i]) count_products(exps, i + 1, k, horizon, out);
}

std::vector<long long> partition_coeffs(const std::vector<int>& exps, int horizon) {
  std::vector<long long> out(static_cast<size_t>(horizon) + 1, 0);
  count_products(exps, 0, 0, horizon, out);
  return out;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-50, 50);
  std::uniform_int_distribution<long long> den(1, 30);
  return Rational(num(rng), den(rng));
}

Poly random_poly(std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  int d = deg(rng);
  std::vector<Rational> c;
  for (int i = 0; i <= d; ++i) c.push_back(random_rational(rng));
  return Poly(std::move(c));
}

}  // namespace

TEST_CASE("rational invariants and arithmetic", "[qseries]") {
  SECTION("canonical form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4).num() == BigInt(-1));
    CHECK(Rational(2, -4).den() == BigInt(2));
    CHECK(Rational(0, 7).den() == BigInt(1));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  }
  SECTION("cross-multiplied oracle") {
    std::mt19937_64 rng(20240901);
    for (int i = 0; i < 500; ++i) {
      Rational a = random_rational(rng), b = random_rational(rng);
      Rational s = a + b;
      // (a + b) b_den a_den == a_num b_den + b_num a_den
      CHECK(s.num() * a.den() * b.den() == (a.num() * b.den() + b.num() * a.den()) * s.den());
      Rational p = a * b;
      CHECK(p.num() * a.den() * b.den() == a.num() * b.num() * p.den());
      if (!b.is_zero()) {
        Rational q = a / b;
        CHECK(q * b == a);
      }
    }
  }
  SECTION("strings") {
    CHECK(Rational(9, 130).str() == "9/130");
    CHECK(Rational(-17, 20).str_pq() == "-17/20");
    CHECK(Rational(5).str() == "5");
    CHECK(Rational(5).str_pq() == "5/1");
    CHECK(Rational::parse(" -17/20 ") == Rational(-17, 20));
    CHECK(Rational::parse("42") == Rational(42));
    CHECK_THROWS_AS(Rational::parse("x/y"), IoError);
  }
}

TEST_CASE("polynomial arithmetic", "[qseries]") {
  SECTION("product agrees with evaluation") {
    std::mt19937_64 rng(77001);
    for (int i = 0; i < 60; ++i) {
      Poly a = random_poly(rng, 8), b = random_poly(rng, 8);
      Poly ab = a * b;
      for (long long x : {-3LL, -1LL, 2LL, 5LL}) {
        auto eval = [&](const Poly& p) {
          Rational acc(0), pw(1);
          for (int e = 0; e <= p.degree(); ++e) {
            acc += p.coeff(e) * pw;
            pw *= Rational(x);
          }
          return acc;
        };
        CHECK(eval(ab) == eval(a) * eval(b));
      }
    }
  }
  SECTION("divmod identity") {
    std::mt19937_64 rng(77002);
    for (int i = 0; i < 60; ++i) {
      Poly a = random_poly(rng, 10);
      Poly d = random_poly(rng, 4);
      if (d.is_zero()) continue;
      auto [q, r] = divmod(a, d);
      CHECK(q * d + r == a);
      CHECK(r.degree() < d.degree());
    }
  }
  SECTION("print and parse round trip") {
    std::mt19937_64 rng(77003);
    for (int i = 0; i < 40; ++i) {
      std::uniform_int_distribution<int> deg(0, 12), coeff(-5, 5);
      Poly p;
      for (int e = deg(rng); e >= 0; --e) p.set_coeff(e, Rational(coeff(rng)));
      for (bool asc : {false, true}) {
        CHECK(poly_parse(poly_str(p, asc)) == p);
      }
    }
    CHECK(poly_str(Poly::zero()) == "0");
    CHECK(poly_parse("0").is_zero());
    Poly golden = poly_parse("t^48 - t^36 + 2*t^26 - t + 1");
    CHECK(golden.coeff(48) == Rational(1));
    CHECK(golden.coeff(36) == Rational(-1));
    CHECK(golden.coeff(26) == Rational(2));
    CHECK(golden.coeff(1) == Rational(-1));
    CHECK(golden.coeff(0) == Rational(1));
    CHECK(poly_str(golden) == "t^48 - t^36 + 2*t^26 - t + 1");
    CHECK(poly_str(golden, true) == "1 - t + 2*t^26 - t^36 + t^48");
  }
}

TEST_CASE("denominator products", "[qseries]") {
  CHECK(lcm(CycloDenominator({1, 1}), CycloDenominator({1, 2})) == CycloDenominator({1, 1, 2}));
  CHECK(lcm(CycloDenominator{}, CycloDenominator({1})) == CycloDenominator({1}));
  CHECK(diff(CycloDenominator({1, 1, 2}), CycloDenominator({1, 2})) == CycloDenominator({1}));
  CHECK_THROWS_AS(diff(CycloDenominator({1}), CycloDenominator({2})), std::domain_error);
  Poly p = cyclo_poly(CycloDenominator({1, 2}));
  CHECK(p == poly_parse("t^3 - t^2 - t + 1"));
}

TEST_CASE("series expansion against partition brute force", "[qseries]") {
  std::mt19937_64 rng(41005);
  for (int i = 0; i < 30; ++i) {
    std::uniform_int_distribution<int> nfac(1, 4), expd(1, 6);
    std::vector<int> exps;
    for (int k = nfac(rng); k > 0; --k) exps.push_back(expd(rng));
    int horizon = 18;
    auto brute = partition_coeffs(exps, horizon);
    auto got = expr_expand(HilbertSeries{Poly::one(), CycloDenominator(exps)}, horizon);
    for (int n = 0; n <= horizon; ++n)
      REQUIRE(got[static_cast<size_t>(n)] == Rational(brute[static_cast<size_t>(n)]));
  }
}

TEST_CASE("expression sum expands to the sum of expansions", "[qseries]") {
  std::mt19937_64 rng(41006);
  for (int i = 0; i < 40; ++i) {
    std::uniform_int_distribution<int> nfac(0, 3), expd(1, 5);
    auto random_expr = [&] {
      std::vector<int> exps;
      for (int k = nfac(rng); k > 0; --k) exps.push_back(expd(rng));
      return HilbertSeries{random_poly(rng, 6), CycloDenominator(exps)};
    };
    HilbertSeries a = random_expr(), b = random_expr();
    HilbertSeries s = expr_add(a, b);
    auto ea = expr_expand(a, 20), eb = expr_expand(b, 20), es = expr_expand(s, 20);
    for (int n = 0; n <= 20; ++n)
      REQUIRE(es[static_cast<size_t>(n)] ==
              ea[static_cast<size_t>(n)] + eb[static_cast<size_t>(n)]);
  }
}

TEST_CASE("expression equality by cross-multiplication", "[qseries]") {
  // (1 - t^2) / ((1-t)(1-t^2)) == 1/(1-t)
  HilbertSeries a{Poly::one() - Poly::monomial(2), CycloDenominator({1, 2})};
  HilbertSeries b{Poly::one(), CycloDenominator({1})};
  CHECK(expr_equal(a, b));
  HilbertSeries c{Poly::one(), CycloDenominator({2})};
  CHECK_FALSE(expr_equal(a, c));
}

TEST_CASE("clear_denominator", "[qseries]") {
  SECTION("curve example against the series-prefix route") {
    HilbertSeries p = hilbert_curve(3, {2});
    std::vector<int> w{1, 1, 1, 2};
    Poly n = clear_denominator(p, w);
    // Independent route: multiply the expanded series by the weight
    // factors and watch every coefficient beyond the numerator degree
    // vanish.
    int deg = 1 + 1 + 1 + 2 + 1;
    int horizon = deg + 12;
    auto series = expr_expand(p, horizon);
    Poly m = Poly::one();
    for (int x : w) m *= Poly::one() - Poly::monomial(x);
    std::vector<Rational> prod(static_cast<size_t>(horizon) + 1, Rational(0));
    for (int i = 0; i <= horizon; ++i)
      for (int j = 0; j <= std::min(i, m.degree()); ++j)
        prod[static_cast<size_t>(i)] += m.coeff(j) * series[static_cast<size_t>(i - j)];
    for (int i = 0; i <= horizon; ++i) {
      CHECK(prod[static_cast<size_t>(i)] == n.coeff(i));
      if (i > deg) CHECK(prod[static_cast<size_t>(i)].is_zero());
    }
    CHECK(n.degree() == deg);
  }
  SECTION("K3 surface with three singular points") {
    Basket b = basket_parse("3/1,4/1,11/2");
    Poly n = clear_denominator(hilbert_k3(-1, b), {2, 3, 4, 11});
    CHECK(n == poly_parse("-t^20 - t^15 - t^13 - t^11 + t^9 + t^7 + t^5 + 1"));
  }
  SECTION("insufficient weights throw") {
    Basket b = basket_parse("3/1,4/1,11/2");
    CHECK_THROWS_AS(clear_denominator(hilbert_k3(-1, b), {2}), NotPolynomial);
  }
}
