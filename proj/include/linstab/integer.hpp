#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "linstab/errors.hpp"

namespace linstab {

using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<Int>;

inline constexpr Int kPosInf = std::numeric_limits<Int>::max();
inline constexpr Int kNegInf = std::numeric_limits<Int>::min();

inline Int checked_add(Int x, Int y) {
  Int r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int x, Int y) {
  Int r;
  if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int x, Int y) {
  Int r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

// Mathematical modulus: result in [0, m) for m > 0.
inline Int floor_mod(Int x, Int m) {
  Int r = x % m;
  return r < 0 ? r + m : r;
}

inline Int floor_div(Int x, Int m) {
  Int q = x / m;
  if ((x % m != 0) && ((x < 0) != (m < 0))) --q;
  return q;
}

inline Int gcd(Int a, Int b) { return std::gcd(a, b); }

inline Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / std::gcd(a, b), b < 0 ? -b : b);
}

inline Int ipow(Int base, int exp) {
  Int r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

/// Euler's totient by trial division.
inline Int euler_phi(Int n) {
  Int result = n;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Multiplicative order of x modulo m; requires gcd(x, m) = 1 and m >= 1.
inline Int multiplicative_order(Int x, Int m) {
  if (m == 1) return 1;
  if (std::gcd(floor_mod(x, m), m) != 1) throw PreconditionError("multiplicative order needs a unit");
  Int r = floor_mod(x, m);
  Int acc = r;
  Int k = 1;
  while (acc != 1) {
    acc = static_cast<Int>((static_cast<__int128>(acc) * r) % m);
    ++k;
  }
  return k;
}

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// floor(log2(q)) for q > 0, exact.
inline Int floor_log2(const BigInt& num, const BigInt& den) {
  // largest e with 2^e <= num/den
  Int e = 0;
  if (num >= den) {
    BigInt d = den;
    while (d * 2 <= num) {
      d *= 2;
      ++e;
    }
  } else {
    BigInt n = num;
    while (n < den) {
      n *= 2;
      --e;
    }
  }
  return e;
}

}  // namespace linstab
