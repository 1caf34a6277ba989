#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "tpms/error.hpp"

namespace tpms {

/// Exact rational number with 64-bit numerator/denominator, always reduced
/// and with a positive denominator. Exponents derived from triangle groups and
/// the tabulated constraint coefficients live here so identities like
/// sum(a_i) == 0 hold exactly.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design of arithmetic
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "rational with zero denominator");
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(Rational a, Rational b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    return {a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_};
  }
  friend Rational operator-(Rational a) { return {-a.num_, a.den_}; }
  friend Rational operator-(Rational a, Rational b) { return a + (-b); }
  friend Rational operator*(Rational a, Rational b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t n = (g1 ? a.num_ / g1 : a.num_) * (g2 ? b.num_ / g2 : b.num_);
    const std::int64_t d = (g2 ? a.den_ / g2 : a.den_) * (g1 ? b.den_ / g1 : b.den_);
    return {n, d};
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "rational division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational& operator+=(Rational o) { return *this = *this + o; }
  Rational& operator-=(Rational o) { return *this = *this - o; }
  Rational& operator*=(Rational o) { return *this = *this * o; }

  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(Rational a, Rational b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(Rational a, Rational b) { return b < a; }
  friend bool operator<=(Rational a, Rational b) { return !(b < a); }
  friend bool operator>=(Rational a, Rational b) { return !(a < b); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(Rational r) { return r < Rational(0) ? -r : r; }

/// Least common multiple of the denominators, used to clear a linear relation
/// to integer coefficients.
inline std::int64_t common_denominator(std::initializer_list<Rational> xs) {
  std::int64_t l = 1;
  for (const Rational& x : xs) l = std::lcm(l, x.den());
  return l;
}

}  // namespace tpms
