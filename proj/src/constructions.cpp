#include "linstab/constructions.hpp"

#include <algorithm>

namespace linstab {

namespace {

Int pow_mod(Int base, Int exp, Int m) {
  Int r = 1 % m;
  Int x = floor_mod(base, m);
  while (exp > 0) {
    if (exp & 1) r = static_cast<Int>(static_cast<__int128>(r) * x % m);
    x = static_cast<Int>(static_cast<__int128>(x) * x % m);
    exp >>= 1;
  }
  return r;
}

Int floor_rational(const Rational& q) { return floor_div(q.numerator(), q.denominator()); }
Int ceil_rational(const Rational& q) { return -floor_div(-q.numerator(), q.denominator()); }

BigRational to_big(const Rational& q) { return BigRational(q.numerator()) / BigRational(q.denominator()); }

struct Block {
  Int lo = 0;
  Int hi = -1;  // empty when hi < lo
};

// Integers strictly inside (x, x (1 + delta)).
Block open_block(const Rational& x, const Rational& delta) {
  return Block{floor_rational(x) + 1, ceil_rational(x * (1 + delta)) - 1};
}

std::string rational_text(const Rational& q) { return to_string(q); }

}  // namespace

EPSet ApCounterexample::predicted(Int k) const {
  if (k < 1) throw PreconditionError("the predicted orbit starts at k = 1");
  return EPSet::progression(pow_mod(ratio, k, modulus), modulus);
}

ApCounterexample ap_counterexample(Int a, Int b) {
  if (b < 1 || a <= b) throw PreconditionError("the construction needs a > b >= 1");
  if (gcd(a, b) != 1) throw PreconditionError("the construction needs gcd(a, b) = 1");
  ApCounterexample c;
  c.a = a;
  c.b = b;
  c.modulus = checked_mul(a, b);
  c.ratio = a - b;
  c.cycle_length = multiplicative_order(c.ratio, c.modulus);
  c.stable = a == b + 1;
  c.initial = EPSet::up_progression(1, c.modulus, 1);
  return c;
}

ApOrbitCheck check_ap_counterexample(Int a, Int b, Int steps, const Limits& limits) {
  ApOrbitCheck r;
  r.construction = ap_counterexample(a, b);
  r.steps = steps;
  const LinearOp op(a, b);
  EPSet current = r.construction.initial;
  for (Int k = 1; k <= steps; ++k) {
    EPSet next = apply_linear_op(op, current, limits);
    if (k >= 2 && next == current) r.observed_stable = true;
    if (!r.first_mismatch && !(next == r.construction.predicted(k))) r.first_mismatch = k;
    current = std::move(next);
  }
  r.matches = !r.first_mismatch.has_value();
  return r;
}

ScaledDivergenceReport scaled_divergence(Int d, Int a_prime, Int b_prime, Int steps, const Limits& limits) {
  if (d < 2) throw PreconditionError("the common factor d must be at least 2");
  if (gcd(a_prime, b_prime) != 1) throw PreconditionError("a' and b' must be coprime");
  ScaledDivergenceReport r;
  r.d = d;
  r.op = LinearOp(checked_mul(d, a_prime), checked_mul(d, b_prime));
  r.iterates.push_back(EPSet::naturals());
  for (Int k = 1; k <= steps; ++k) r.iterates.push_back(apply_linear_op(r.op, r.iterates.back(), limits));
  bool ok = true;
  Int dk = 1;
  for (std::size_t k = 0; k < r.iterates.size(); ++k) {
    if (k > 0) dk = checked_mul(dk, d);
    const EPSet& s = r.iterates[k];
    const bool div = is_subset(s, EPSet::progression(0, dk));
    r.divisible.push_back(div);
    Int found = 0;
    const Int reach = std::max(std::abs(s.lo()), std::abs(s.hi())) + s.period() + 1;
    for (Int x = 1; x <= reach; ++x) {
      if (s.contains(x) || s.contains(-x)) {
        found = x;
        break;
      }
    }
    r.min_nonzero_abs.push_back(found);
    ok = ok && div && (found == 0 || found >= dk);
  }
  r.pairwise_distinct = true;
  for (std::size_t i = 0; i < r.iterates.size(); ++i)
    for (std::size_t j = i + 1; j < r.iterates.size(); ++j)
      if (r.iterates[i] == r.iterates[j]) r.pairwise_distinct = false;
  r.holds = ok && r.pairwise_distinct;
  return r;
}

TruncatedSet bohr_truncation(const Surd& alpha, const Rational& delta, Int n) {
  if (delta <= 0 || delta > 1) throw PreconditionError("delta must lie in (0, 1]");
  if (n < 1) throw PreconditionError("the horizon N must be positive");
  TruncatedSet t;
  t.horizon = n;
  t.construction = "bohr";
  t.params = {{"alpha", alpha.to_string()}, {"delta", rational_text(delta)}, {"N", std::to_string(n)}};
  const Surd threshold(to_big(delta) / 2);
  for (Int a = 1; a <= n; ++a)
    if (distance_to_integer(alpha * Surd(BigRational(a))) < threshold) t.elems.push_back(a);
  return t;
}

BohrIteratesReport bohr_iterates_check(const Surd& alpha, const std::vector<LinearOp>& ops, Int n,
                                           const Limits& limits) {
  if (ops.empty()) throw PreconditionError("at least one operation is needed");
  BohrIteratesReport r;
  r.ops = ops;
  Int prod = 1;
  for (const auto& op : ops) prod = checked_mul(prod, op.a + op.b);
  r.delta = Rational(1, prod);
  r.base = bohr_truncation(alpha, r.delta, n);
  r.density = static_cast<double>(r.base.count_up_to(n)) / static_cast<double>(n);
  r.iterates.push_back(r.base.as_epset());
  for (const auto& op : ops) r.iterates.push_back(apply_linear_op(op, r.iterates.back(), limits));

  // Every element x of the s-th iterate of the full set has ||alpha x|| < delta/2 * prod_{i<=s}(a_i + b_i).
  std::vector<BigRational> bounds{to_big(r.delta) / 2};
  for (const auto& op : ops) bounds.push_back(bounds.back() * (op.a + op.b));

  r.all_distinct = true;
  for (std::size_t s = 1; s < r.iterates.size(); ++s) {
    const auto elems = r.iterates[s].elements();
    for (std::size_t earlier = 0; earlier < s; ++earlier) {
      const Surd bound(bounds[earlier]);
      bool found = false;
      for (Int x : elems) {
        const Surd dist = distance_to_integer(alpha * Surd(BigRational(x)));
        if (!(dist < bound)) {
          r.witnesses.push_back(DistinctnessWitness{s, earlier, x, dist.to_string(), bound.to_string()});
          found = true;
          break;
        }
      }
      r.all_distinct = r.all_distinct && found;
    }
  }
  return r;
}

std::vector<Rational> self_power_sequence(Int k) {
  std::vector<Rational> xs;
  for (Int i = 1; i <= k; ++i) xs.emplace_back(ipow(i, static_cast<int>(i)));
  return xs;
}

TruncatedSet sparse_interval_union(const std::vector<Rational>& xs, const Rational& delta, std::optional<Int> horizon) {
  if (delta <= 0) throw PreconditionError("delta must be positive");
  if (xs.empty()) throw PreconditionError("at least one interval is needed");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0) throw PreconditionError("interval starts must be positive");
    if (i > 0 && xs[i] <= xs[i - 1]) throw PreconditionError("interval starts must increase strictly");
  }
  TruncatedSet t;
  t.construction = "sparse";
  t.horizon = horizon.value_or(ceil_rational(xs.back() * (1 + delta)));
  std::string list;
  for (const auto& x : xs) list += (list.empty() ? "" : ",") + rational_text(x);
  t.params = {{"delta", rational_text(delta)}, {"xs", list}, {"N", std::to_string(t.horizon)}};
  for (const auto& x : xs) {
    const Block blk = open_block(x, delta);
    for (Int v = std::max<Int>(blk.lo, 0); v <= std::min(blk.hi, t.horizon); ++v) t.elems.push_back(v);
  }
  std::sort(t.elems.begin(), t.elems.end());
  t.elems.erase(std::unique(t.elems.begin(), t.elems.end()), t.elems.end());
  return t;
}

GapGrowthReport sparse_gap_growth(const std::vector<Rational>& xs, const Rational& delta, Int a, Int b,
                                  const Limits& limits) {
  if (b < 1 || a < 1) throw PreconditionError("a and b must be positive");
  if (xs.size() < 2) throw PreconditionError("at least two interval starts are needed");
  GapGrowthReport r;
  r.a = a;
  r.b = b;
  r.delta = delta;
  r.delta_below_threshold = delta < Rational(a, b) - 1;
  const TruncatedSet full = sparse_interval_union(xs, delta);

  // Members of aA - bA involving a later block p are either negative (when b x_p >= a x_q (1 + delta)
  // for every earlier q) or exceed a x_p - b x_p (1 + delta).
  r.separated = true;
  for (std::size_t p = 1; p < xs.size(); ++p)
    for (std::size_t q = 0; q < p; ++q)
      if (xs[p] * b < xs[q] * (1 + delta) * a) r.separated = false;

  for (std::size_t j = 1; j < xs.size(); ++j) {
    GapGrowthEntry e;
    e.blocks = j;
    Rational limit = xs[j] * a - xs[j] * (1 + delta) * b;
    for (std::size_t p = j + 1; p < xs.size(); ++p) limit = std::min(limit, xs[p] * a - xs[p] * (1 + delta) * b);
    e.exact_limit = floor_rational(limit);

    const std::vector<Rational> prefix(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(j));
    const TruncatedSet part = sparse_interval_union(prefix, delta);
    const Block last = open_block(xs[j - 1], delta);
    if (last.hi >= last.lo && last.hi >= 1)
      e.right_end_density = Rational(full.count_up_to(last.hi), last.hi);
    if (!part.elems.empty() && e.exact_limit >= 0) {
      const EPSet s = part.as_epset();
      const EPSet image = minkowski_sum(dilate(s, a, limits), dilate(s, -b, limits), limits);
      const auto members = image.elements_in(0, e.exact_limit);
      if (members.size() >= 2) {
        Int gap = 0;
        for (std::size_t i = 1; i < members.size(); ++i) gap = std::max(gap, members[i] - members[i - 1]);
        e.max_gap = gap;
      }
    }
    r.entries.push_back(std::move(e));
  }
  std::vector<Int> gaps;
  for (const auto& e : r.entries)
    if (e.max_gap) gaps.push_back(*e.max_gap);
  r.strictly_increasing = gaps.size() >= 2;
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] <= gaps[i - 1]) r.strictly_increasing = false;
  return r;
}

ParityFlip parity_flip_sequence(const std::vector<int>& bits) {
  ParityFlip f;
  f.bits = bits;
  std::vector<LinearOp> ops;
  for (int bit : bits) {
    if (bit != 0 && bit != 1) throw SemanticError("parity bits must be 0 or 1");
    ops.push_back(bit == 0 ? LinearOp(2, 1) : LinearOp(3, 1));
  }
  f.ops = OpSequence(std::move(ops), Int{3});
  f.base = EPSet::progression(1, 3);
  const EPSet flipped = EPSet::progression(2, 3);
  f.predicted.push_back(f.base);
  int parity = 0;
  for (int bit : bits) {
    parity ^= bit;
    f.predicted.push_back(parity == 0 ? f.base : flipped);
  }
  return f;
}

ParityFlipCheck check_parity_flip(const std::vector<int>& bits, const Limits& limits) {
  ParityFlipCheck c;
  c.fixture = parity_flip_sequence(bits);
  const EPSet flipped = negate(c.fixture.base);
  c.observed.push_back(c.fixture.base);
  for (std::size_t k = 0; k < bits.size(); ++k)
    c.observed.push_back(apply_linear_op(c.fixture.ops.ops[k], c.observed.back(), limits));
  c.matches_prediction = c.observed == c.fixture.predicted;
  for (std::size_t k = 1; k <= bits.size(); ++k) {
    const EPSet& literal = bits[k - 1] == 0 ? c.fixture.base : flipped;
    if (!(literal == c.observed[k])) c.literal_mismatches.push_back(k);
  }
  return c;
}

}  // namespace linstab
