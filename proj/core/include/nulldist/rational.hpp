#pragma once

#include <cstdint>
#include <string>

namespace nulldist {

/// Exact fraction over 128-bit integers, always normalized with a positive denominator.
/// Sums use the lcm of denominators so intermediate products stay well inside the range
/// needed by the fractal breakpoint recursions (denominators up to 2^30 3^30).
class Rational {
 public:
  __extension__ using Int = __int128;

  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int n, Int d);

  Int num() const { return num_; }
  Int den() const { return den_; }
  double to_double() const;
  std::string str() const;

  Rational operator-() const { return {-num_, den_}; }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  Rational abs() const { return {num_ < 0 ? -num_ : num_, den_}; }

 private:
  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace nulldist
