#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "k3db/errors.hpp"

namespace k3db {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number.  Invariants: den > 0 and gcd(num, den) == 1;
// zero is stored as 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

  // Requires is_integer() and a value that fits in long long.
  long long as_int() const {
    if (den_ != 1) throw std::domain_error("Rational::as_int: not an integer: " + str());
    return static_cast<long long>(num_);
  }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rational& operator+=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
      num_ += o.num_;
      return *this;
    }
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
      num_ -= o.num_;
      return *this;
    }
    return *this += -o;
  }
  Rational& operator*=(const Rational& o) {
    num_ *= o.num_;
    if (den_ == 1 && o.den_ == 1) return *this;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // "p" when integral, otherwise "p/q".
  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // Always "p/q", the canonical serialisation form.
  std::string str_pq() const { return num_.str() + "/" + den_.str(); }

  // Accepts "p" or "p/q" with optional surrounding whitespace.
  static Rational parse(const std::string& text) {
    auto first = text.find_first_not_of(" \t");
    auto last = text.find_last_not_of(" \t");
    if (first == std::string::npos) throw IoError("Rational::parse: empty string");
    std::string s = text.substr(first, last - first + 1);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s));
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw IoError("Rational::parse: bad rational '" + text + "'");
    }
  }

 private:
  BigInt num_, den_;

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
};

}  // namespace k3db
