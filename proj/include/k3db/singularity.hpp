#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "k3db/errors.hpp"
#include "k3db/rational.hpp"

namespace k3db {

// Kind of polarised variety a numerical datum describes.
enum class Kind { Curve, K3, Fano };

inline std::string kind_str(Kind k) {
  switch (k) {
    case Kind::Curve: return "curve";
    case Kind::K3: return "k3";
    case Kind::Fano: return "fano";
  }
  return "?";
}

inline Kind kind_parse(const std::string& s) {
  if (s == "curve") return Kind::Curve;
  if (s == "k3") return Kind::K3;
  if (s == "fano") return Kind::Fano;
  throw IoError("unknown kind '" + s + "'");
}

// Smallest positive b with a*b == 1 mod r.  Requires gcd(a, r) == 1.
inline int inverse_mod(int a, int r) {
  a %= r;
  if (a < 0) a += r;
  int t = 0, new_t = 1, rr = r, new_r = a;
  while (new_r != 0) {
    int q = rr / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    rr -= q * new_r;
    std::swap(rr, new_r);
  }
  if (rr != 1) throw NotCoprime("inverse_mod: gcd(" + std::to_string(a) + "," + std::to_string(r) + ") != 1");
  return t < 0 ? t + r : t;
}

// Cyclic quotient singularity of index r and weight a, stored in the
// canonical form 1 <= a <= r - a, gcd(a, r) = 1.  The types [r, a] and
// [r, r-a] describe the same polarised germ.
struct QuotientSingularity {
  int r = 0;
  int a = 0;

  QuotientSingularity() = default;
  QuotientSingularity(int index, int weight) : r(index), a(weight) {
    if (r < 2) throw NotCoprime("QuotientSingularity: index " + std::to_string(r) + " < 2");
    a %= r;
    if (a < 0) a += r;
    if (a == 0 || std::gcd(a, r) != 1)
      throw NotCoprime("QuotientSingularity: " + std::to_string(r) + "/" + std::to_string(weight) +
                       " not coprime");
    if (a > r - a) a = r - a;
  }

  friend bool operator==(const QuotientSingularity& x, const QuotientSingularity& y) {
    return x.r == y.r && x.a == y.a;
  }
  friend bool operator<(const QuotientSingularity& x, const QuotientSingularity& y) {
    return x.r != y.r ? x.r < y.r : x.a < y.a;
  }
};

// Multiset of quotient singularities, kept sorted by (r, a).
using Basket = std::vector<QuotientSingularity>;

// Orbifold points of a curve carry only their order r >= 2; sorted.
using CurveBasket = std::vector<int>;

inline Basket make_basket(std::vector<QuotientSingularity> elems) {
  std::sort(elems.begin(), elems.end());
  return elems;
}

// Sum of r - 1 over the basket: the rank contributed to the resolution
// lattice.
inline int k3_rank(const Basket& b) {
  int rank = 0;
  for (const auto& s : b) rank += s.r - 1;
  return rank;
}

// A K3 basket must fit in the K3 lattice: rank + 1 <= 20.
inline bool k3_basket_valid(const Basket& b) { return k3_rank(b) <= 19; }

// A Fano basket must satisfy sum (r - 1/r) < 24.
inline bool fano_basket_valid(const Basket& b) {
  Rational s(0);
  for (const auto& e : b) s += Rational(e.r) - Rational(1, e.r);
  return s < Rational(24);
}

// "r/a,r/a,..." with elements in canonical order; empty basket prints "".
inline std::string basket_str(const Basket& b) {
  std::string out;
  for (const auto& e : b) {
    if (!out.empty()) out += ",";
    out += std::to_string(e.r) + "/" + std::to_string(e.a);
  }
  return out;
}

// Parses the basket grammar "r/a,r/a,...".  Whitespace is ignored;
// tokens must be coprime pairs with r >= 2.  Empty input is the empty
// basket.
inline Basket basket_parse(const std::string& text) {
  Basket b;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    auto slash = tok.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size())
      throw IoError("basket_parse: bad token '" + tok + "'");
    int r, a;
    try {
      r = std::stoi(tok.substr(0, slash));
      a = std::stoi(tok.substr(slash + 1));
    } catch (const std::exception&) {
      throw IoError("basket_parse: bad token '" + tok + "'");
    }
    b.emplace_back(r, a);
    tok.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '\t') continue;
    if (ch == ',') {
      if (tok.empty()) throw IoError("basket_parse: empty token in '" + text + "'");
      flush();
    } else {
      tok += ch;
    }
  }
  flush();
  return make_basket(std::move(b));
}

// Parses a curve basket "r,r,..." of bare orders r >= 2.
inline CurveBasket curve_basket_parse(const std::string& text) {
  CurveBasket b;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    int r;
    try {
      r = std::stoi(tok);
    } catch (const std::exception&) {
      throw IoError("curve_basket_parse: bad token '" + tok + "'");
    }
    if (r < 2) throw IoError("curve_basket_parse: order " + tok + " < 2");
    b.push_back(r);
    tok.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '\t') continue;
    if (ch == ',') {
      if (tok.empty()) throw IoError("curve_basket_parse: empty token in '" + text + "'");
      flush();
    } else {
      tok += ch;
    }
  }
  flush();
  std::sort(b.begin(), b.end());
  return b;
}

}  // namespace k3db
