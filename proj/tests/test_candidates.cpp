#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "k3db/candidate.hpp"
#include "k3db/enumerate.hpp"

using namespace k3db;

namespace {

struct Golden {
  int genus;
  const char* basket;
  std::vector<int> weights;
  int codim;
  const char* numerator;
  Rational degree;
};

const Golden kGolden[] = {
    {-1, "2/1,5/1,13/3", {3, 4, 5, 6, 7, 10, 13}, 4,
     "t^48 - t^36 - t^35 - t^34 - t^33 - t^32 - t^31 - t^30"
     " + t^27 + 2*t^26 + 2*t^25 + 2*t^24 + 2*t^23 + 2*t^22 + t^21"
     " - t^18 - t^17 - t^16 - t^15 - t^14 - t^13 - t^12 + 1",
     Rational(9, 130)},
    {-1, "2/1,3/1,5/1,10/3", {3, 4, 5, 6, 7, 10}, 3,
     "-t^35 + t^23 + t^22 + t^21 + t^20 + t^19"
     " - t^16 - t^15 - t^14 - t^13 - t^12 + 1",
     Rational(1, 15)},
    {-1, "2/1,17/7", {3, 4, 7, 10, 17}, 2, "t^41 - t^21 - t^20 + 1", Rational(1, 34)},
    {-1, "17/5", {2, 3, 5, 5, 7, 12, 17}, 4,
     "t^51 - t^41 - t^39 - t^37 - t^36"
     " + t^29 + t^27 + t^26 + t^25 + t^24 + t^22"
     " - t^15 - t^14 - t^12 - t^10 + 1",
     Rational(2, 17)},
    {-1, "2/1,3/1,3/1,3/1,4/1,5/1", {3, 4, 5, 6}, 1, "-t^18 + 1", Rational(1, 20)},
};

// Re-expansion of numerator / prod (1 - t^w) must reproduce the series.
void check_reexpansion(const CandidateRecord& rec) {
  int sigma = 0;
  for (int w : rec.weights) sigma += w;
  auto direct = expr_expand(hilbert_series(rec.kind, rec.genus, rec.basket), 2 * sigma);
  auto cleared =
      expr_expand(HilbertSeries{rec.numerator, CycloDenominator(rec.weights)}, 2 * sigma);
  REQUIRE(direct == cleared);
}

}  // namespace

TEST_CASE("reference candidates", "[candidates]") {
  for (const auto& row : kGolden) {
    INFO("basket " << row.basket);
    auto rec = make_candidate(Kind::K3, row.genus, basket_parse(row.basket));
    CHECK(rec.weights == row.weights);
    CHECK(rec.codim == row.codim);
    CHECK(rec.numerator == poly_parse(row.numerator));
    CHECK(poly_str(rec.numerator) == row.numerator);
    CHECK(rec.degree == row.degree);
    check_reexpansion(rec);
    CHECK(gorenstein_check(rec.numerator, rec.weights, Kind::K3));
  }
}

TEST_CASE("classical complete intersections", "[candidates]") {
  auto sextic = make_candidate(Kind::K3, 2, {});
  CHECK(sextic.weights == std::vector<int>{1, 1, 1, 3});
  CHECK(sextic.numerator == poly_parse("-t^6 + 1"));
  CHECK(sextic.codim == 1);
  auto quartic = make_candidate(Kind::K3, 3, {});
  CHECK(quartic.weights == std::vector<int>{1, 1, 1, 1});
  CHECK(quartic.numerator == poly_parse("-t^4 + 1"));
}

TEST_CASE("deduction is deterministic and self-consistent", "[candidates]") {
  auto e = enumerate_k3_baskets(8);
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<size_t> pick(0, e.items.size() - 1);
  for (int i = 0; i < 20; ++i) {
    const auto& item = e.items[pick(rng)];
    auto a = deduce_weights(Kind::K3, item.min_genus, item.basket);
    auto b = deduce_weights(Kind::K3, item.min_genus, item.basket);
    REQUIRE(a == b);
    auto rec = make_candidate(Kind::K3, item.min_genus, item.basket);
    REQUIRE(rec.weights == a);
    check_reexpansion(rec);
    CHECK(gorenstein_check(rec.numerator, rec.weights, rec.kind));
    CHECK(rec.codim >= 1);
    CHECK(rec.numerator.integer_coeffs());
  }
}

TEST_CASE("numerator symmetry check", "[candidates]") {
  CHECK(gorenstein_check(poly_parse("-t^18 + 1"), {3, 4, 5, 6}, Kind::K3));
  CHECK(gorenstein_check(poly_parse("t^41 - t^21 - t^20 + 1"), {3, 4, 7, 10, 17}, Kind::K3));
  CHECK(gorenstein_check(poly_parse("-t^44 + 1"), {1, 4, 5, 13, 22}, Kind::Fano));
  // Wrong degree, wrong sign pattern, broken symmetry.
  CHECK_FALSE(gorenstein_check(poly_parse("-t^17 + 1"), {3, 4, 5, 6}, Kind::K3));
  CHECK_FALSE(gorenstein_check(poly_parse("t^18 + 1"), {3, 4, 5, 6}, Kind::K3));
  CHECK_FALSE(gorenstein_check(poly_parse("t^41 - t^22 - t^20 + 1"), {3, 4, 7, 10, 17}, Kind::K3));
}

TEST_CASE("impossible data yields no candidate", "[candidates]") {
  // Genus 0 with no basket has negative degree; every weight multiset
  // fails validation.
  CHECK_THROWS_AS(make_candidate(Kind::K3, 0, {}), NoCandidate);
  CHECK_THROWS_AS(deduce_weights(Kind::Curve, 2, {}), std::invalid_argument);
}

TEST_CASE("overrides force extra generators", "[candidates]") {
  auto ov = Overrides::parse("# forced weight for the test\n2; ; 5\n");
  CHECK(ov.size() == 1);
  REQUIRE(ov.find(2, {}) != nullptr);
  CHECK(*ov.find(2, {}) == std::vector<int>{5});
  CHECK(ov.find(3, {}) == nullptr);

  auto rec = make_candidate(Kind::K3, 2, {}, ov);
  CHECK(rec.weights == std::vector<int>{1, 1, 1, 3, 5});
  CHECK(rec.numerator == poly_parse("t^11 - t^6 - t^5 + 1"));
  check_reexpansion(rec);

  CHECK_THROWS_AS(Overrides::parse("2; ;"), IoError);
  CHECK_THROWS_AS(Overrides::parse("2; 2/1"), IoError);
  CHECK_THROWS_AS(Overrides::parse("x; 2/1; 3"), IoError);
  CHECK_THROWS_AS(Overrides::parse("2; 2/1; 0"), IoError);
}

TEST_CASE("record display block", "[candidates]") {
  auto rec = make_candidate(Kind::K3, -1, basket_parse("2/1,3/1,3/1,3/1,4/1,5/1"));
  CHECK(candidate_block(rec) ==
        "Codimension 1 K3 surface with data\n"
        "  Weights: [ 3, 4, 5, 6 ]\n"
        "  Numerator: -t^18 + 1\n"
        "  Basket: [ 2, 1 ], [ 3, 1 ], [ 3, 1 ], [ 3, 1 ], [ 4, 1 ], [ 5, 1 ]\n");
  rec.id = 107;
  rec.name = "Reid1(39)";
  CHECK(candidate_block(rec) ==
        "Codimension 1 K3 surface, number 107, Reid1(39), with data\n"
        "  Weights: [ 3, 4, 5, 6 ]\n"
        "  Numerator: -t^18 + 1\n"
        "  Basket: [ 2, 1 ], [ 3, 1 ], [ 3, 1 ], [ 3, 1 ], [ 4, 1 ], [ 5, 1 ]\n");
}
