#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linstab/epset.hpp"
#include "linstab/linops.hpp"
#include "linstab/surd.hpp"
#include "linstab/truncated.hpp"

namespace linstab {

// {ab m + 1 : m >= 0} under Gamma_{a,b}: the k-th iterate is the full class (a-b)^k mod ab.
struct ApCounterexample {
  Int a = 0;
  Int b = 0;
  Int modulus = 1;       // ab
  Int ratio = 0;         // a - b
  Int cycle_length = 1;  // multiplicative order of a - b mod ab
  bool stable = false;   // a == b + 1
  EPSet initial;

  EPSet predicted(Int k) const;  // k >= 1
};

/// Requires gcd(a, b) = 1 and a > b >= 1.
ApCounterexample ap_counterexample(Int a, Int b);

struct ApOrbitCheck {
  ApCounterexample construction;
  Int steps = 0;
  bool matches = false;
  std::optional<Int> first_mismatch;
  bool observed_stable = false;  // some k >= 1 with Gamma_{k+1} = Gamma_k
};

/// Exact iteration for k = 1..steps against the predicted classes.
ApOrbitCheck check_ap_counterexample(Int a, Int b, Int steps, const Limits& limits = default_limits());

struct ScaledDivergenceReport {
  Int d = 0;
  LinearOp op{1, 1};  // (d a', d b')
  std::vector<EPSet> iterates;       // Gamma_k(N), k = 0..steps
  std::vector<bool> divisible;       // Gamma_k inside d^k Z
  std::vector<Int> min_nonzero_abs;  // 0 when the iterate is {0} or empty
  bool pairwise_distinct = false;
  bool holds = false;
};

/// Iterates Gamma_{d a', d b'} on N. Requires d >= 2 and gcd(a', b') = 1.
ScaledDivergenceReport scaled_divergence(Int d, Int a_prime, Int b_prime, Int steps,
                                         const Limits& limits = default_limits());

/// {a in [1, N] : ||alpha a|| < delta / 2}, decided exactly in Q(sqrt D).
TruncatedSet bohr_truncation(const Surd& alpha, const Rational& delta, Int n);

struct DistinctnessWitness {
  std::size_t later = 0;    // iterate index s
  std::size_t earlier = 0;  // iterate index s' < s
  Int element = 0;          // in the s-th iterate of the truncation
  std::string distance;     // ||alpha x||, exact
  std::string bound;        // every element of the s'-th iterate is closer than this
};

struct BohrIteratesReport {
  std::vector<LinearOp> ops;
  Rational delta;  // prod 1 / (a_i + b_i)
  TruncatedSet base;
  double density = 0;          // |A cap [1, N]| / N
  std::vector<EPSet> iterates;  // compositions of length 0..t applied to the truncation
  std::vector<DistinctnessWitness> witnesses;
  bool all_distinct = false;  // every pair certified distinct
};

/// Builds the Bohr-set truncation for the given ops and certifies that the t + 1
/// compositions are pairwise distinct using the norm bound on each iterate.
BohrIteratesReport bohr_iterates_check(const Surd& alpha, const std::vector<LinearOp>& ops, Int n,
                                           const Limits& limits = default_limits());

/// i^i for i = 1..k.
std::vector<Rational> self_power_sequence(Int k);

/// Union of the open intervals (x_i, x_i (1 + delta)) with N, up to `horizon` (default: end of the last block).
TruncatedSet sparse_interval_union(const std::vector<Rational>& xs, const Rational& delta,
                                   std::optional<Int> horizon = std::nullopt);

struct GapGrowthEntry {
  std::size_t blocks = 0;     // prefix length j
  Int exact_limit = 0;        // aA - bA is exact on [0, exact_limit] for the prefix
  std::optional<Int> max_gap;  // between consecutive members inside [0, exact_limit]
  Rational right_end_density;  // |A cap [1, m]| / m at the end m of block j (0 when empty)
};

struct GapGrowthReport {
  Int a = 0;
  Int b = 0;
  Rational delta;
  bool delta_below_threshold = false;  // delta < a/b - 1
  bool separated = false;              // blocks grow fast enough for the exact limits
  std::vector<GapGrowthEntry> entries;  // prefixes 1..|xs|-1
  bool strictly_increasing = false;     // over the entries that have a gap
};

/// Gaps of aA - bA for growing prefixes of the interval union. The last x is used only
/// to bound the region where the prefix is exact.
GapGrowthReport sparse_gap_growth(const std::vector<Rational>& xs, const Rational& delta, Int a, Int b,
                                  const Limits& limits = default_limits());

struct ParityFlip {
  std::vector<int> bits;
  OpSequence ops;
  EPSet base;                    // 1 + 3Z
  std::vector<EPSet> predicted;  // index k: A or -A by parity of the first k bits
};

ParityFlip parity_flip_sequence(const std::vector<int>& bits);

struct ParityFlipCheck {
  ParityFlip fixture;
  std::vector<EPSet> observed;  // exact iterates, index 0 = base
  bool matches_prediction = false;
  std::vector<std::size_t> literal_mismatches;  // k where "A if bit k is 0, else -A" is wrong
};

ParityFlipCheck check_parity_flip(const std::vector<int>& bits, const Limits& limits = default_limits());

}  // namespace linstab
