#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linstab/epset.hpp"
#include "linstab/integer.hpp"

namespace linstab {

/// The set map X -> aX - bX with a, b >= 1.
struct LinearOp {
  Int a = 1;
  Int b = 1;

  LinearOp() = default;
  LinearOp(Int a_, Int b_);

  bool coprime() const { return gcd(a, b) == 1; }
  friend bool operator==(const LinearOp&, const LinearOp&) = default;
};

/// Ordered operations applied left to right. A cyclic sequence repeats `ops` forever.
struct OpSequence {
  std::vector<LinearOp> ops;
  Int bound = 1;  // every a_j, b_j <= bound
  bool cyclic = false;

  OpSequence() = default;
  explicit OpSequence(std::vector<LinearOp> ops_, bool cyclic_ = false);
  OpSequence(std::vector<LinearOp> ops_, Int bound_, bool cyclic_ = false);

  /// Number of explicitly listed operations.
  std::size_t size() const { return ops.size(); }
  bool empty() const { return ops.empty(); }
  /// Operation applied at step k (0-based); requires k < size() unless cyclic.
  const LinearOp& at(std::size_t k) const;
  /// Steps available: size() for finite sequences, unbounded for cyclic ones.
  bool has_step(std::size_t k) const { return cyclic ? !ops.empty() : k < ops.size(); }
  bool all_coprime() const;
  Int max_entry() const;

  std::string to_string() const;
  friend bool operator==(const OpSequence&, const OpSequence&) = default;
};

/// Signed coefficient -> number of partitions I, J of [1, s] producing it.
struct CoefficientExpansion {
  std::map<BigInt, BigInt> terms;

  BigInt total_multiplicity() const;
  BigInt positive_multiplicity() const;
  BigInt negative_multiplicity() const;
};

EPSet apply_linear_op(const LinearOp& op, const EPSet& s, const Limits& limits = default_limits());

/// Applies the first `steps` operations of `seq` (all of them when absent) in order.
EPSet apply_composition(const OpSequence& seq, const EPSet& s, std::optional<std::size_t> steps = std::nullopt,
                        const Limits& limits = default_limits());

/// Expansion of the composed operation as a signed sum of dilates of X.
CoefficientExpansion compose_coefficients(const OpSequence& seq);

struct DominantPair {
  bool sufficient_depth = false;  // t >= 2 log2(m) + 4L + 2
  Int t = 0;
  Int bound = 0;  // L
  BigInt alpha = 0;
  BigInt alpha_multiplicity = 0;
  BigInt beta = 0;
  BigInt beta_multiplicity = 0;
  BigInt pigeonhole_count = 0;  // ceil(2^(t-1) / (4t/L)^L)
  BigInt coefficient_cap = 0;   // L^t
  bool counts_reach_pigeonhole = false;
  bool counts_reach_m = false;
  bool within_cap = false;
};

/// Most frequent positive coefficient alpha and negative coefficient -beta of the
/// composed expansion (ties go to the smaller value), with the counting checks.
/// When the depth hypothesis fails, only `sufficient_depth`, `t` and `bound` are set.
DominantPair dominant_coefficient_pair(const OpSequence& seq, const BigInt& m);

}  // namespace linstab
