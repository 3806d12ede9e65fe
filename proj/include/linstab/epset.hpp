#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linstab/bitmap.hpp"
#include "linstab/integer.hpp"

namespace linstab {

/// Resource limits applied by set operations.
struct Limits {
  std::size_t window_cap = std::size_t{1} << 20;  // max explicit window length
  Int period_cap = Int{1} << 20;                  // max representation modulus
};

/// Process-wide default limits; the CLI overrides them from the environment.
Limits& default_limits();

/// Any (not necessarily canonical) representation of an eventually periodic set.
///
/// x is a member iff
///   x < lo  and (x mod period) in neg_tail, or
///   lo <= x <= hi and window[x - lo], or
///   x > hi  and (x mod period) in pos_tail.
struct RawEPSet {
  Int period = 1;
  Int lo = 0;
  Int hi = -1;
  std::vector<bool> window;    // length hi - lo + 1
  std::vector<bool> neg_tail;  // length period
  std::vector<bool> pos_tail;  // length period

  bool contains(Int x) const;
};

/// An eventually periodic subset of the integers, always held in canonical form:
/// minimal period, maximal lo and minimal hi. Two EPSets are equal as sets iff
/// their canonical fields are identical.
class EPSet {
 public:
  /// The empty set.
  EPSet();

  static EPSet empty() { return EPSet(); }
  static EPSet integers();
  static EPSet naturals();  // {0, 1, 2, ...}
  static EPSet finite(std::span<const Int> elems);
  static EPSet finite(std::initializer_list<Int> elems) {
    return finite(std::span<const Int>(elems.begin(), elems.size()));
  }
  /// r + gZ (both directions).
  static EPSet progression(Int r, Int g);
  /// {x : x = r (mod g), x >= max(r, n0)}.
  static EPSet up_progression(Int r, Int g, Int n0);
  /// {x : x = r (mod g), x <= min(r, n1)}.
  static EPSet down_progression(Int r, Int g, Int n1);

  Int period() const noexcept { return period_; }
  Int lo() const noexcept { return lo_; }
  Int hi() const noexcept { return hi_; }
  const Bitmap& window() const noexcept { return window_; }
  const Bitmap& neg_mask() const noexcept { return neg_; }
  const Bitmap& pos_mask() const noexcept { return pos_; }
  std::vector<Int> neg_tail() const;
  std::vector<Int> pos_tail() const;

  bool contains(Int x) const;
  bool is_empty() const;
  bool is_finite() const { return neg_.none() && pos_.none(); }
  /// S + g = S for g = period(), i.e. a union of full residue classes.
  bool is_fully_periodic() const { return window_.empty() && neg_ == pos_; }
  bool bounded_below() const { return neg_.none(); }

  /// Members within [from, to], ascending.
  std::vector<Int> elements_in(Int from, Int to) const;
  /// All members of a finite set, ascending.
  std::vector<Int> elements() const;

  RawEPSet raw() const;
  std::size_t hash() const noexcept;

  /// Canonical text in the set grammar; round-trips through parse_set_expression.
  std::string to_string() const;

  friend bool operator==(const EPSet& a, const EPSet& b) {
    return a.period_ == b.period_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.window_ == b.window_ &&
           a.neg_ == b.neg_ && a.pos_ == b.pos_;
  }

 private:
  friend EPSet canonicalize(const RawEPSet& raw, const Limits& limits);
  friend class EPSetBuilder;

  Int period_ = 1;
  Int lo_ = 0;
  Int hi_ = -1;
  Bitmap window_;
  Bitmap neg_{1};
  Bitmap pos_{1};
};

/// Unique canonical representative of the set described by `raw`.
EPSet canonicalize(const RawEPSet& raw, const Limits& limits = default_limits());

bool equals(const EPSet& s, const EPSet& t);
bool membership(const EPSet& s, Int x);

/// {n x : x in s}; n must be nonzero.
EPSet dilate(const EPSet& s, Int n, const Limits& limits = default_limits());
EPSet negate(const EPSet& s);
EPSet translate(const EPSet& s, Int c);
EPSet set_union(const EPSet& s, const EPSet& t, const Limits& limits = default_limits());
/// s intersected with [0, infinity).
EPSet restrict_nonnegative(const EPSet& s, const Limits& limits = default_limits());
/// {x + y : x in s, y in t}, exact.
EPSet minkowski_sum(const EPSet& s, const EPSet& t, const Limits& limits = default_limits());
/// k-fold sumset s + s + ... + s (k >= 1).
EPSet sumset_power(const EPSet& s, int k, const Limits& limits = default_limits());

bool is_subset(const EPSet& s, const EPSet& t);
/// s + g = s.
bool is_fully_periodic_mod(const EPSet& s, Int g);
/// s + g is contained in s.
bool is_semi_periodic_mod(const EPSet& s, Int g);

/// Density of the positive side: |pos_tail| / period.
Rational upper_density(const EPSet& s);

struct GapResult {
  bool unbounded = false;
  Int value = 0;  // largest difference between consecutive members; meaningful when !unbounded
  std::size_t members_seen = 0;
};

/// Largest gap between consecutive members lying in [from, to] (open ends when absent).
/// Unbounded when the range is open above and the set has no positive tail.
GapResult max_gap(const EPSet& s, std::optional<Int> from = std::nullopt,
                  std::optional<Int> to = std::nullopt);

}  // namespace linstab

template <>
struct std::hash<linstab::EPSet> {
  std::size_t operator()(const linstab::EPSet& s) const noexcept { return s.hash(); }
};
