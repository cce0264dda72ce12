#include "nulldist/rational.hpp"

#include <algorithm>

#include "nulldist/errors.hpp"

namespace nulldist {

namespace {

using Int = Rational::Int;

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int checked_mul(Int a, Int b) {
  Int out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw NumericError("rational arithmetic overflow");
  return out;
}

Int checked_add(Int a, Int b) {
  Int out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw NumericError("rational arithmetic overflow");
  return out;
}

std::string to_string(Int v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    const int digit = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

Rational::Rational(Int n, Int d) {
  if (d == 0) throw NumericError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const Int g = gcd(n, d);
  num_ = g > 1 ? n / g : n;
  den_ = g > 1 ? d / g : d;
}

double Rational::to_double() const {
  // Split so that large numerators keep their leading bits.
  const Int q = num_ / den_;
  const Int r = num_ % den_;
  return static_cast<double>(q) + static_cast<double>(r) / static_cast<double>(den_);
}

std::string Rational::str() const {
  return den_ == 1 ? to_string(num_) : to_string(num_) + "/" + to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const Int g = gcd(a.den_, b.den_);
  const Int da = a.den_ / g;
  const Int db = b.den_ / g;
  const Int lcm = checked_mul(da, b.den_);
  return {checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da)), lcm};
}

Rational operator*(const Rational& a, const Rational& b) {
  const Int g1 = gcd(a.num_, b.den_);
  const Int g2 = gcd(b.num_, a.den_);
  const Int s1 = g1 == 0 ? 1 : g1;
  const Int s2 = g2 == 0 ? 1 : g2;
  return {checked_mul(a.num_ / s1, b.num_ / s2), checked_mul(a.den_ / s2, b.den_ / s1)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw NumericError("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

bool operator<(const Rational& a, const Rational& b) { return (a - b).num_ < 0; }

}  // namespace nulldist
