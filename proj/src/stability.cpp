#include "linstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>

namespace linstab {

namespace {

// Smallest p dividing the list length such that the cyclic list is p-periodic.
std::size_t cyclic_period(const std::vector<LinearOp>& ops) {
  const std::size_t n = ops.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = ops[i] == ops[i - p];
    if (ok) return p;
  }
  return n;
}

struct OccurrenceIndex {
  // hash -> indices of distinct representatives; each representative keeps its occurrences
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  std::vector<std::vector<std::size_t>> occurrences;
  std::vector<std::size_t> rep_at;  // iterate index -> representative

  std::size_t insert(const std::vector<EPSet>& iterates, std::size_t k, std::size_t& collisions) {
    auto& bucket = buckets[iterates[k].hash()];
    for (std::size_t r : bucket) {
      if (iterates[occurrences[r].front()] == iterates[k]) {
        occurrences[r].push_back(k);
        rep_at.push_back(r);
        return r;
      }
      ++collisions;
    }
    bucket.push_back(occurrences.size());
    occurrences.push_back({k});
    rep_at.push_back(occurrences.size() - 1);
    return occurrences.size() - 1;
  }
};

bool fixed_by_all(const EPSet& x, const std::vector<LinearOp>& ops, const Limits& limits) {
  std::vector<LinearOp> seen;
  for (const auto& op : ops) {
    if (std::find(seen.begin(), seen.end(), op) != seen.end()) continue;
    seen.push_back(op);
    if (!(apply_linear_op(op, x, limits) == x)) return false;
  }
  return true;
}

const EPSet& iterate_at(const IterationTrace& t, std::size_t k) {
  if (k < t.iterates.size()) return t.iterates[k];
  const Cycle& r = *t.recurrence;
  return t.iterates[r.onset + (k - r.onset) % r.length];
}

}  // namespace

IterationTrace iterate_trace(const EPSet& s, const OpSequence& seq, std::size_t max_k, const Limits& limits,
                             const TraceOptions& options) {
  IterationTrace t;
  const std::size_t n = seq.cyclic ? max_k : std::min(max_k, seq.size());
  t.iterates.reserve(n + 1);
  t.iterates.push_back(s);
  OccurrenceIndex index;
  index.insert(t.iterates, 0, t.hash_collisions);

  const std::size_t period = seq.cyclic ? cyclic_period(seq.ops) : 0;
  // First step from which the remaining finite ops are all equal.
  std::size_t const_from = n;
  if (!seq.cyclic && n > 0) {
    const_from = n - 1;
    while (const_from > 0 && seq.ops[const_from - 1] == seq.ops[n - 1]) --const_from;
  }
  auto constant_from = [&](std::size_t i) { return seq.cyclic ? period == 1 : i >= const_from; };

  for (std::size_t k = 0; k < n; ++k) {
    try {
      t.iterates.push_back(apply_linear_op(seq.at(k), t.iterates.back(), limits));
    } catch (const ResourceLimitError& e) {
      t.resource_flag = e.what();
      break;
    } catch (const OverflowError& e) {
      t.resource_flag = e.what();
      break;
    }
    ++t.computed_steps;
    const std::size_t j = k + 1;
    const std::size_t r = index.insert(t.iterates, j, t.hash_collisions);
    const auto& occ = index.occurrences[r];
    if (occ.size() < 2) continue;

    std::optional<std::size_t> onset;
    bool constant = false;
    const std::size_t prev = occ[occ.size() - 2];
    if (constant_from(prev)) {
      onset = prev;
      constant = true;
    } else if (seq.cyclic) {
      for (auto it = occ.rbegin() + 1; it != occ.rend(); ++it) {
        if ((j - *it) % period == 0) {
          onset = *it;
          break;
        }
      }
    }
    if (!onset && prev + 1 == j && fixed_by_all(t.iterates[j], seq.ops, limits)) {
      onset = prev;
      constant = true;
    }
    if (!onset) continue;

    t.recurrence = Cycle{*onset, j - *onset};
    if (constant) t.cycle = t.recurrence;
    if (!options.stop_when_closed) {
      for (std::size_t m = j + 1; m <= n; ++m) t.iterates.push_back(t.iterates[m - t.recurrence->length]);
    }
    break;
  }
  t.distinct_count = index.occurrences.size();
  t.periodicity_onset = full_periodicity_onset(t, options.onset_g_max);
  return t;
}

std::size_t t_stability_count(const IterationTrace& trace) { return trace.distinct_count; }

std::optional<PeriodicityOnset> full_periodicity_onset(const IterationTrace& trace, Int g_max) {
  std::optional<PeriodicityOnset> best;
  Int g = 1;
  for (std::size_t k = trace.iterates.size(); k-- > 0;) {
    const EPSet& x = trace.iterates[k];
    if (!x.is_fully_periodic() || x.period() > g_max) break;
    const Int next = static_cast<Int>(std::min<__int128>(static_cast<__int128>(g / gcd(g, x.period())) * x.period(),
                                                         static_cast<__int128>(g_max) + 1));
    if (next > g_max) break;
    g = next;
    best = PeriodicityOnset{k, g};
  }
  if (!best) return best;
  std::unordered_set<EPSet> checked;
  for (std::size_t k = best->k0; k < trace.iterates.size(); ++k) {
    const EPSet& x = trace.iterates[k];
    if (!checked.insert(x).second) continue;
    if (!(translate(x, best->g) == x)) return std::nullopt;
  }
  return best;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Int theorem61_K(const Rational& beta, Int L, const Rational& c) {
  if (beta < 1) throw PreconditionError("beta must be at least 1");
  if (c <= 0) throw PreconditionError("c must be positive");
  const Int p = c.numerator();
  const Int q = c.denominator();
  const auto up = static_cast<unsigned>(p);
  const BigInt num = boost::multiprecision::pow(BigInt(beta.numerator()), up);
  const BigInt den = boost::multiprecision::pow(BigInt(beta.denominator()), up);
  // m <= c (log2 beta + L)  iff  2^(q m - p L) <= beta^p
  auto admits = [&](Int m) {
    const Int e = checked_sub(checked_mul(q, m), checked_mul(p, L));
    if (e >= 0) return (den << static_cast<unsigned>(e)) <= num;
    return den <= (num << static_cast<unsigned>(-e));
  };
  Int m = static_cast<Int>(std::floor(to_double(c) * (std::log2(to_double(beta)) + static_cast<double>(L))));
  while (!admits(m)) --m;
  while (admits(m + 1)) ++m;
  return m;
}

Theorem61Report theorem61_verify(const EPSet& a, const OpSequence& seq, Int L, const Rational& c,
                                 const Limits& limits, const Theorem61Options& options) {
  if (L < 2) throw PreconditionError("L must be at least 2");
  if (seq.empty()) throw PreconditionError("empty operation sequence");
  if (!seq.all_coprime()) throw PreconditionError("every operation must have gcd(a, b) = 1");
  if (seq.max_entry() > L) throw PreconditionError("an operation exceeds L");
  const Rational density = upper_density(a);
  if (density <= 0) throw PreconditionError("the set must have positive upper density");

  Theorem61Report r;
  r.L = L;
  r.c = c;
  r.beta = Rational(1) / density;
  r.K = theorem61_K(r.beta, L, c);
  if (r.K < 1) throw PreconditionError("K must be positive");
  r.g_bound = boost::multiprecision::pow(BigInt(L), static_cast<unsigned>(r.K + 1));
  const auto K = static_cast<std::size_t>(r.K);
  if (!seq.cyclic && seq.size() < K) throw PreconditionError("a finite sequence needs at least K operations");
  const std::size_t available = seq.cyclic ? options.max_steps : std::min(options.max_steps, seq.size());

  TraceOptions topts;
  topts.stop_when_closed = true;
  topts.onset_g_max = limits.period_cap;
  auto finish = [&](const IterationTrace& t) {
    r.traced_steps = t.computed_steps;
    r.distinct_count = t.distinct_count;
    r.closed = t.recurrence.has_value();
    r.resource_flag = t.resource_flag;
    if (t.periodicity_onset) {
      r.observed_k0 = t.periodicity_onset->k0;
      r.observed_g = t.periodicity_onset->g;
    }
  };

  if (K > available) {
    r.horizon = K;
    r.resource_flag = "step cap below K";
    return r;
  }
  const IterationTrace first = iterate_trace(a, seq, K, limits, topts);
  finish(first);
  if (!first.complete()) return r;

  // Moduli of every iterate from step K on; a closed orbit covers all later steps.
  auto tail_modulus = [&](const IterationTrace& t) -> std::optional<Int> {
    std::size_t end = t.iterates.size();
    if (t.recurrence) end = std::max(K, t.recurrence->onset) + t.recurrence->length;
    Int g = 1;
    for (std::size_t k = K; k < end; ++k) {
      const EPSet& x = iterate_at(t, k);
      if (!x.is_fully_periodic()) return std::nullopt;
      g = lcm(g, x.period());
      if (g > limits.period_cap) return std::nullopt;
    }
    return g;
  };

  const auto gK = tail_modulus(first);
  if (!gK || BigInt(*gK) > r.g_bound) {
    r.horizon = K;
    r.verdict = Verdict::Fail;
    return r;
  }

  const BigInt bound = BigInt(r.K) + BigInt(*gK) * *gK * *gK * L * L;
  const BigInt needed = bound + 1;
  const std::size_t want = needed > BigInt(available) ? available : static_cast<std::size_t>(needed);
  r.horizon = needed > BigInt(std::numeric_limits<std::size_t>::max()) ? std::numeric_limits<std::size_t>::max()
                                                                         : static_cast<std::size_t>(needed);
  const IterationTrace second = first.recurrence ? first : iterate_trace(a, seq, want, limits, topts);
  finish(second);

  r.g_at_K = tail_modulus(second);
  r.periodic_part = r.g_at_K && BigInt(*r.g_at_K) <= r.g_bound && r.observed_k0 && *r.observed_k0 <= K;
  if (!r.periodic_part) {
    r.verdict = second.complete() ? Verdict::Fail : Verdict::Inconclusive;
    return r;
  }
  r.bound = BigInt(r.K) + BigInt(*r.g_at_K) * *r.g_at_K * *r.g_at_K * L * L;
  r.stable_part = BigInt(r.distinct_count) <= *r.bound;
  if (!r.stable_part) {
    r.verdict = Verdict::Fail;
  } else if (r.closed || BigInt(second.steps()) >= needed || (!seq.cyclic && second.steps() == seq.size())) {
    r.verdict = Verdict::Pass;
  } else {
    r.verdict = Verdict::Inconclusive;
    if (!r.resource_flag) r.resource_flag = "step cap reached before the horizon";
  }
  return r;
}

std::vector<EPSet> stability_fixture_sets() {
  auto up = [](Int r, Int g, Int n0 = 0) { return EPSet::up_progression(r, g, n0); };
  auto classes = [&](std::initializer_list<Int> rs, Int g, Int n0 = 0) {
    EPSet out;
    for (Int r : rs) out = set_union(out, up(r, g, n0));
    return out;
  };
  return {
      EPSet::naturals(),
      up(1, 2),
      up(1, 3, 1),
      up(2, 3),
      up(0, 4),
      up(3, 5),
      up(2, 7),
      EPSet::progression(1, 3),
      EPSet::integers(),
      classes({0, 1}, 5),
      classes({0, 2}, 7),
      classes({1, 2, 4}, 7),
      classes({0, 3}, 8),
      classes({1, 5, 6}, 9),
      classes({2, 3}, 6, 10),
      up(0, 1, 5),
      up(0, 1, 17),
      up(4, 6, 30),
      set_union(EPSet::finite({0, 1, 2}), up(10, 6)),
      set_union(EPSet::finite({3}), up(0, 4, 20)),
      set_union(EPSet::down_progression(0, 2, 0), up(1, 3)),
      classes({0, 1, 3}, 10, 4),
  };
}

std::vector<NamedSequence> stability_fixture_sequences(Int L, std::uint64_t seed) {
  std::vector<LinearOp> pairs;
  for (Int a = 1; a <= L; ++a)
    for (Int b = 1; b <= L; ++b)
      if (gcd(a, b) == 1) pairs.emplace_back(a, b);
  std::vector<NamedSequence> out;
  out.push_back({"constant", OpSequence({LinearOp(L, L - 1)}, L, true)});
  out.push_back({"alternating", OpSequence({LinearOp(2, 1), L == 2 ? LinearOp(1, 2) : LinearOp(L, L - 1)}, L, true)});
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(L));
  std::vector<LinearOp> ops;
  for (int i = 0; i < 30; ++i) ops.push_back(pairs[rng() % pairs.size()]);
  out.push_back({"random", OpSequence(std::move(ops), L, true)});
  return out;
}

}  // namespace linstab
