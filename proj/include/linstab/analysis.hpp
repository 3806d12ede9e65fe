#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linstab/epset.hpp"
#include "linstab/truncated.hpp"

namespace linstab {

struct DensityReport {
  std::optional<Rational> exact_density;              // EPSet input: |pos_tail| / period
  std::vector<std::pair<Int, Rational>> profile;      // (n, |A cap [1,n]| / n)
  std::vector<std::pair<Int, Rational>> sup_profile;  // running maximum of profile

  std::string to_csv() const;  // n,ratio,running_max
};

DensityReport density_profile(const EPSet& s, std::span<const Int> samples);
DensityReport density_profile(const TruncatedSet& s, std::span<const Int> samples);

struct FreimanResult {
  Int lhs = 0;  // |X + X|
  Int rhs = 0;  // min(3k - 3, k + max X)
  bool holds = false;
};

/// Finite X of nonnegative integers with 0 in X, gcd(X) = 1 and |X| >= 2.
FreimanResult freiman_check(std::span<const Int> x);

struct DoublingDensityResult {
  Rational density;      // upper density of X
  Rational sum_density;  // upper density of X + X
  Rational required;     // 3d/2 when d <= 1/2, else (1 + d)/2
  bool holds = false;
};

/// Density form of the 3k-3 consequence, exact for X inside N with 0 in X and gcd(X) = 1.
DoublingDensityResult doubling_density_check(const EPSet& x);

struct GapBoundReport {
  Int a = 0;
  Int b = 0;
  Rational density;
  Rational threshold;            // a / (a + 1)
  bool precondition_met = false;  // density > threshold
  EPSet forward;                  // aX - bX
  EPSet backward;                 // bX - aX
  GapResult forward_gap;
  GapResult backward_gap;
  bool holds = false;  // both gaps bounded by a
};

/// Gaps of aX - bX and bX - aX against the bound a. Requires a >= b >= 1; the density
/// hypothesis is reported, not enforced.
GapBoundReport gap_bound_check(const EPSet& x, Int a, Int b, const Limits& limits = default_limits());

struct KneserReport {
  int k = 0;
  EPSet sumset;  // X k
  Rational density;         // d(X)
  Rational sumset_density;  // d(Xk)
  int branch = 0;           // 1, 2, or 0 when no witness was found
  // Branch 2 witness.
  Int g = 0;
  EPSet closure;  // X' = X + gN
  Rational closure_density;
  bool contains_input = false;
  bool semi_periodic = false;
  bool tail_contained = false;  // large elements of X'k lie in Xk
  bool density_inequality = false;
  std::vector<Int> candidates_tried;
};

/// X inside N with positive lower density (nonempty positive tail).
KneserReport kneser_dichotomy(const EPSet& x, int k, const Limits& limits = default_limits());

/// True when every sufficiently large element of s lies in t.
bool tail_contained(const EPSet& s, const EPSet& t);

/// {a - a' : a >= a', a, a' in A} for A inside N.
EPSet dplus(const EPSet& a, const Limits& limits = default_limits());

struct StabilityTime {
  std::optional<Int> t;       // absent when max_k was exhausted
  std::vector<EPSet> iterates;  // D+_0 = A, D+_1, ...
};

StabilityTime stability_time(const EPSet& a, Int max_k, const Limits& limits = default_limits());

/// offset + scale * log2(arg), kept symbolic so comparisons stay exact.
struct LogBound {
  Int offset = 0;
  Int scale = 1;
  Rational arg{1};

  double value() const;
  /// t <= offset + scale * log2(arg)
  bool admits(Int t) const;
  std::string to_string() const;
};

struct StabilityBounds {
  LogBound stewart_tijdeman;  // 2 log2(1/d)
  LogBound ruzsa;             // 2 + log2(1/d - 1)
};

/// Requires 0 < density <= 1/2.
StabilityBounds stability_bounds(const Rational& density);

}  // namespace linstab
