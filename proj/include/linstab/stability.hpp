#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linstab/epset.hpp"
#include "linstab/linops.hpp"

namespace linstab {

struct Cycle {
  std::size_t onset = 0;
  std::size_t length = 0;
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct PeriodicityOnset {
  std::size_t k0 = 0;
  Int g = 1;
  friend bool operator==(const PeriodicityOnset&, const PeriodicityOnset&) = default;
};

struct IterationTrace {
  std::vector<EPSet> iterates;  // index 0 = input
  std::size_t distinct_count = 0;
  std::optional<Cycle> cycle;  // only when the ops are constant from the onset on
  // The (iterate, op) state repeats: every later iterate is a copy of an earlier one,
  // so distinct_count is final for any horizon.
  std::optional<Cycle> recurrence;
  std::optional<PeriodicityOnset> periodicity_onset;
  std::optional<std::string> resource_flag;
  std::size_t computed_steps = 0;  // iterates produced by set arithmetic rather than copied
  std::size_t hash_collisions = 0;  // equal hashes with different canonical forms

  bool complete() const { return !resource_flag.has_value(); }
  std::size_t steps() const { return iterates.empty() ? 0 : iterates.size() - 1; }
};

struct TraceOptions {
  // Stop at the first recurrence instead of copying it forward to max_k.
  bool stop_when_closed = false;
  Int onset_g_max = Int{1} << 20;
};

/// Gamma_k(s) for k = 0..max_k, or fewer when a finite sequence runs out or a cap is hit.
IterationTrace iterate_trace(const EPSet& s, const OpSequence& seq, std::size_t max_k,
                             const Limits& limits = default_limits(), const TraceOptions& options = {});

/// Number of distinct sets in the trace, input included.
std::size_t t_stability_count(const IterationTrace& trace);

/// Smallest k0, then smallest g <= g_max, with translate(Gamma_k, g) = Gamma_k for all recorded k >= k0.
std::optional<PeriodicityOnset> full_periodicity_onset(const IterationTrace& trace, Int g_max);

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct Theorem61Options {
  std::size_t max_steps = 200000;
};

struct Theorem61Report {
  Rational beta;  // 1 / upper density
  Int L = 0;
  Rational c;
  Int K = 0;
  BigInt g_bound;  // L^(K+1)
  std::optional<std::size_t> observed_k0;  // empirical K': first step of full periodicity
  std::optional<Int> observed_g;           // modulus from observed_k0 on
  std::optional<Int> g_at_K;               // minimal modulus for the iterates from step K on
  std::size_t distinct_count = 0;
  std::optional<BigInt> bound;  // K + g^3 L^2 with g = g_at_K
  std::size_t horizon = 0;      // steps required
  std::size_t traced_steps = 0;
  bool closed = false;        // orbit recurrence reached inside the trace
  bool periodic_part = false;  // (i)
  bool stable_part = false;    // (ii)
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::string> resource_flag;
};

/// floor(c (log2(beta) + L)) computed exactly; beta >= 1, c > 0.
Int theorem61_K(const Rational& beta, Int L, const Rational& c);

/// Requires positive upper density, L >= 2 and coprime ops with entries <= L. A finite
/// sequence needs at least K operations; the family is then its own prefix iterates.
Theorem61Report theorem61_verify(const EPSet& a, const OpSequence& seq, Int L, const Rational& c = Rational(10),
                                 const Limits& limits = default_limits(), const Theorem61Options& options = {});

struct NamedSequence {
  std::string kind;  // constant, alternating or random
  OpSequence seq;
};

/// Sets of positive upper density: progressions, unions of up to three classes, shifted half-lines.
std::vector<EPSet> stability_fixture_sets();

/// Constant, alternating and pseudo-random length-30 cyclic sequences over coprime pairs <= L.
std::vector<NamedSequence> stability_fixture_sequences(Int L, std::uint64_t seed);

}  // namespace linstab
