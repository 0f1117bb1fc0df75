#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace carterlab {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

// Accepts "p", "-p", "p/q".
inline Rational rational_from_string(const std::string& s) { return Rational(s); }

inline Rational rational_pow(Rational base, unsigned e) {
  Rational out = 1;
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

}  // namespace carterlab
