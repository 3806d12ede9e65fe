#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "linstab/integer.hpp"

namespace linstab {

using BigRational = boost::multiprecision::cpp_rational;

/// u + v*sqrt(d) with d squarefree (d = 0 for plain rationals). Exact arithmetic in Q(sqrt d).
class Surd {
 public:
  Surd() = default;
  Surd(BigRational u) : u_(std::move(u)) {}  // NOLINT(google-explicit-constructor)
  static Surd sqrt(Int n);                    // reduces n = k^2 * d

  const BigRational& rational_part() const { return u_; }
  const BigRational& surd_part() const { return v_; }
  Int radicand() const { return d_; }
  bool is_rational() const { return v_ == 0; }

  friend Surd operator+(const Surd& x, const Surd& y);
  friend Surd operator-(const Surd& x, const Surd& y);
  friend Surd operator*(const Surd& x, const Surd& y);
  friend Surd operator/(const Surd& x, const Surd& y);
  Surd operator-() const;

  /// -1, 0 or 1, decided exactly.
  int sign() const;
  BigInt floor() const;
  double approx() const;
  std::string to_string() const;  // e.g. "-1+sqrt(2)", "1/2*sqrt(3)"

  friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }
  friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }

 private:
  Surd(BigRational u, BigRational v, Int d);
  static Int common_radicand(const Surd& x, const Surd& y);

  BigRational u_{0};
  BigRational v_{0};
  Int d_ = 0;
};

/// Distance from x to the nearest integer.
Surd distance_to_integer(const Surd& x);

}  // namespace linstab
