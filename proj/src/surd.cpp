#include "linstab/surd.hpp"

#include <cmath>

#include "linstab/errors.hpp"

namespace linstab {

namespace {

int rational_sign(const BigRational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

}  // namespace

Surd::Surd(BigRational u, BigRational v, Int d) : u_(std::move(u)), v_(std::move(v)), d_(d) {
  if (v_ == 0) d_ = 0;
}

Surd Surd::sqrt(Int n) {
  if (n < 0) throw SemanticError("square root of a negative number");
  Int k = 1, d = 1, rest = n;
  for (Int p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      k *= p;
    }
  }
  d = rest;
  if (n == 0) return Surd();
  if (d == 1) return Surd(BigRational(k));
  return Surd(BigRational(0), BigRational(k), d);
}

Int Surd::common_radicand(const Surd& x, const Surd& y) {
  if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_)
    throw SemanticError("square roots of different radicands cannot be mixed");
  return x.d_ != 0 ? x.d_ : y.d_;
}

Surd operator+(const Surd& x, const Surd& y) {
  return Surd(x.u_ + y.u_, x.v_ + y.v_, Surd::common_radicand(x, y));
}

Surd operator-(const Surd& x, const Surd& y) {
  return Surd(x.u_ - y.u_, x.v_ - y.v_, Surd::common_radicand(x, y));
}

Surd Surd::operator-() const { return Surd(-u_, -v_, d_); }

Surd operator*(const Surd& x, const Surd& y) {
  const Int d = Surd::common_radicand(x, y);
  return Surd(x.u_ * y.u_ + x.v_ * y.v_ * d, x.u_ * y.v_ + x.v_ * y.u_, d);
}

Surd operator/(const Surd& x, const Surd& y) {
  const Int d = Surd::common_radicand(x, y);
  const BigRational norm = y.u_ * y.u_ - y.v_ * y.v_ * d;
  if (norm == 0) throw SemanticError("division by zero");
  const Surd conj(y.u_ / norm, -y.v_ / norm, d);
  return x * conj;
}

int Surd::sign() const {
  const int su = rational_sign(u_);
  const int sv = rational_sign(v_);
  if (sv == 0 || d_ == 0) return su;
  if (su == 0 || su == sv) return sv;
  // Opposite signs: compare u^2 with v^2 d.
  const BigRational lhs = u_ * u_;
  const BigRational rhs = v_ * v_ * d_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? su : sv;
}

double Surd::approx() const {
  return static_cast<double>(u_) + static_cast<double>(v_) * std::sqrt(static_cast<double>(d_));
}

BigInt Surd::floor() const {
  BigInt n(static_cast<long long>(std::floor(approx())));
  while ((*this - Surd(BigRational(n))).sign() < 0) --n;
  while ((*this - Surd(BigRational(n + 1))).sign() >= 0) ++n;
  return n;
}

std::string Surd::to_string() const {
  auto q = [](const BigRational& r) { return r.str(); };
  if (v_ == 0) return q(u_);
  std::string s;
  if (u_ != 0) s = q(u_) + (v_ > 0 ? "+" : "-");
  else if (v_ < 0) s = "-";
  const BigRational av = v_ < 0 ? BigRational(-v_) : v_;
  if (av != 1) s += q(av) + "*";
  return s + "sqrt(" + std::to_string(d_) + ")";
}

Surd distance_to_integer(const Surd& x) {
  const Surd frac = x - Surd(BigRational(x.floor()));
  const Surd other = Surd(BigRational(1)) - frac;
  return other < frac ? other : frac;
}

}  // namespace linstab
