#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "k3db/errors.hpp"
#include "k3db/rational.hpp"

namespace k3db {

// Dense univariate polynomial over Rational in the formal variable t.
// Invariant: coefficient vector has no trailing zero, so the zero
// polynomial is the empty vector and degree() is -1 for it.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly zero() { return Poly(); }
  static Poly one() { return constant(1); }
  static Poly constant(Rational v) {
    Poly p;
    if (!v.is_zero()) p.c_.push_back(std::move(v));
    return p;
  }
  static Poly monomial(int exp, Rational coeff = Rational(1)) {
    Poly p;
    if (!coeff.is_zero()) {
      p.c_.assign(static_cast<size_t>(exp) + 1, Rational(0));
      p.c_.back() = std::move(coeff);
    }
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  const Rational& coeff(int exp) const {
    static const Rational kZero(0);
    if (exp < 0 || exp >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(exp)];
  }

  void set_coeff(int exp, Rational v) {
    if (exp >= static_cast<int>(c_.size())) {
      if (v.is_zero()) return;
      c_.resize(static_cast<size_t>(exp) + 1, Rational(0));
    }
    c_[static_cast<size_t>(exp)] = std::move(v);
    trim();
  }

  const std::vector<Rational>& coeffs() const { return c_; }

  bool integer_coeffs() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& v) { return v.is_integer(); });
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += -o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator*(const Rational& s, Poly p) {
    for (auto& v : p.c_) v *= s;
    p.trim();
    return p;
  }

  // Multiplication by t^k.
  Poly shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    Poly r;
    r.c_.assign(c_.size() + static_cast<size_t>(k), Rational(0));
    std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Quotient and remainder with deg(rem) < deg(divisor).
  friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    Poly q, r = num;
    const int dd = den.degree();
    const Rational& lead = den.c_.back();
    while (!r.is_zero() && r.degree() >= dd) {
      int shift = r.degree() - dd;
      Rational f = r.c_.back() / lead;
      q.set_coeff(shift, q.coeff(shift) + f);
      r -= f * den.shifted(shift);
    }
    return {q, r};
  }

  // The reversal t^n p(1/t) where n = degree(); zero maps to zero.
  Poly reversed() const {
    Poly r = *this;
    std::reverse(r.c_.begin(), r.c_.end());
    r.trim();
    return r;
  }

 private:
  std::vector<Rational> c_;

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
};

// Prints in the descending-degree style "t^48 - 2*t^36 + t - 1", or
// ascending when asked.  Coefficient 1 is suppressed, exponent 1 prints
// as "t", exponent 0 prints as a bare number, zero prints as "0".
inline std::string poly_str(const Poly& p, bool ascending = false) {
  if (p.is_zero()) return "0";
  std::string out;
  auto emit = [&](int exp) {
    const Rational& v = p.coeff(exp);
    if (v.is_zero()) return;
    bool neg = v.sign() < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    Rational mag = neg ? -v : v;
    if (exp == 0) {
      out += mag.str();
    } else {
      if (mag != Rational(1)) out += mag.str() + "*";
      out += exp == 1 ? "t" : "t^" + std::to_string(exp);
    }
  };
  if (ascending) {
    for (int e = 0; e <= p.degree(); ++e) emit(e);
  } else {
    for (int e = p.degree(); e >= 0; --e) emit(e);
  }
  return out;
}

// Inverse of poly_str for either ordering; accepts arbitrary spacing.
inline Poly poly_parse(const std::string& text) {
  Poly p;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw IoError("poly_parse: empty input");
  bool first = true;
  while (i < text.size()) {
    int sign = 1;
    skip_ws();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw IoError("poly_parse: expected '+' or '-' in '" + text + "'");
    }
    first = false;
    std::string digits;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
    Rational coeff = digits.empty() ? Rational(1) : Rational(BigInt(digits));
    skip_ws();
    if (i < text.size() && text[i] == '*') {
      ++i;
      skip_ws();
    }
    int exp = 0;
    if (i < text.size() && text[i] == 't') {
      ++i;
      exp = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::string e;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) e += text[i++];
        if (e.empty()) throw IoError("poly_parse: missing exponent in '" + text + "'");
        exp = std::stoi(e);
      }
    } else if (digits.empty()) {
      throw IoError("poly_parse: bare sign in '" + text + "'");
    }
    p.set_coeff(exp, p.coeff(exp) + Rational(sign) * coeff);
    skip_ws();
  }
  if (p.is_zero() && text.find('0') == std::string::npos)
    throw IoError("poly_parse: no terms in '" + text + "'");
  return p;
}

}  // namespace k3db
