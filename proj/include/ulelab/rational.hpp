#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ulelab {

// Exact arithmetic used throughout the sampling layer. Distality floors like
// 2/(3 k^7) drop below double resolution already at k ~ 500, so every
// certification path works in reduced fractions with arbitrary-precision
// integers and converts to double only at the numeric boundary.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline BigInt rational_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt rational_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt pow_big(const BigInt& base, unsigned exp) {
  BigInt r = 1, b = base;
  while (exp) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace ulelab
