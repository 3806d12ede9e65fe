#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linstab/bitmap.hpp"
#include "linstab/epset.hpp"
#include "linstab/integer.hpp"

namespace linstab {

/// A subset of Z/gZ.
class ResidueSet {
 public:
  explicit ResidueSet(Int modulus);
  ResidueSet(Int modulus, const std::vector<Int>& elems);  // elements reduced mod g

  /// The subgroup step*G = {0, step, 2*step, ...}; step must divide g.
  static ResidueSet subgroup(Int modulus, Int step);
  static ResidueSet whole(Int modulus) { return subgroup(modulus, 1); }

  Int modulus() const noexcept { return g_; }
  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  bool contains(Int x) const { return bits_.test(static_cast<std::size_t>(floor_mod(x, g_))); }
  std::vector<Int> elements() const;
  const Bitmap& bits() const noexcept { return bits_; }

  void insert(Int x) { bits_.set(static_cast<std::size_t>(floor_mod(x, g_))); }
  ResidueSet translated(Int c) const;
  ResidueSet scaled(Int k) const;
  /// Sumset u + v within the same group.
  ResidueSet plus(const ResidueSet& other) const;
  /// Image under the projection Z/gZ -> Z/hZ for h | g.
  ResidueSet reduced(Int h) const;
  /// True when every element is a multiple of `step` (membership in step*G).
  bool within_subgroup(Int step) const;

  std::string to_string() const;  // "mod g {e1,e2,...}"

  friend bool operator==(const ResidueSet& x, const ResidueSet& y) { return x.g_ == y.g_ && x.bits_ == y.bits_; }

 private:
  Int g_;
  Bitmap bits_;
};

/// {a x + b y : x, y in u}.
ResidueSet gamma_mod(const ResidueSet& u, Int a, Int b);

/// Step d of the period P(u) = dG, the largest subgroup with u + P(u) = u. |P(u)| = g / d.
Int period_step(const ResidueSet& u);
/// P(u) as a residue set.
ResidueSet period(const ResidueSet& u);

struct CardinalityCheck {
  std::size_t size = 0;        // |U|
  std::size_t image_size = 0;  // |aU + bU|
  bool holds = false;          // |aU + bU| >= |U|
};

/// Requires gcd(a, b) = 1.
CardinalityCheck cardinality_check(const ResidueSet& u, Int a, Int b);

/// U = translation + V + X + H with V in a1*G, X in b1*G, H = a1*b1*G.
struct DecompositionCertificate {
  Int modulus = 1;
  Int translation = 0;  // U - translation contains 0
  Int a1 = 1;
  Int b1 = 1;
  ResidueSet v{1};
  ResidueSet x{1};
  Int h_step = 1;  // H = h_step * G, equals a1 * b1

  ResidueSet h() const { return ResidueSet::subgroup(modulus, h_step); }
  /// Re-checks every invariant against the translated input.
  bool verify(const ResidueSet& u, Int a, Int b) const;
};

struct DecompositionFailure {
  std::string hypothesis;  // which condition failed
  std::string detail;
};

using DecompositionResult = std::variant<DecompositionCertificate, DecompositionFailure>;

/// Constructive structure of a set with |aU + bU| = |U| (translated so that 0 lies in U):
/// quotient by the period, split the quotient into components over cosets of b1*G,
/// and read V and X off the components.
DecompositionResult decompose_equality_case(const ResidueSet& u, Int a, Int b);

struct ResidueOrbit {
  std::vector<ResidueSet> iterates;  // iterates[0] = u; the orbit is iterates[onset..] repeating
  std::size_t onset = 0;
  std::size_t length = 0;
  bool cardinality_preserved = false;    // every iterate has |U| elements
  std::optional<bool> length_divides_phi;  // set when cardinality_preserved
  Int phi_product = 1;                   // phi(a) * phi(b)
};

/// Iterates U -> aU + bU until a repeat; requires gcd(a, b) = 1.
ResidueOrbit residue_orbit(const ResidueSet& u, Int a, Int b, std::size_t max_steps);

struct Lemma52Report {
  bool hypotheses_hold = false;
  std::string failed_hypothesis;  // empty when hypotheses hold
  Int required_step = 0;          // g / gcd(g, b)
  bool containment_holds = false;
  std::vector<Int> witnesses;  // elements with their multiples of required_step
};

/// For X containing 0, aperiodic, with aX + bX = aX: checks X lies in (g / gcd(g, b)) G.
Lemma52Report lemma52_check(const ResidueSet& x, Int a, Int b);

struct Lemma51Report {
  Int g = 1;
  Int g_prime = 1;
  Int modulus = 1;  // gcd(g, g')
  EPSet difference;
  bool fully_periodic = false;
};

/// Verifies S - T is fully periodic mod gcd(g, g') for S semi-periodic mod g and T mod g'.
Lemma51Report lemma51_fully_periodic(const EPSet& s, Int g, const EPSet& t, Int g_prime);

/// Maximal prime-power part of g over primes dividing a.
Int coprime_split(Int g, Int a);

}  // namespace linstab
