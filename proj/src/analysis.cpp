#include "linstab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace linstab {

namespace {

std::optional<Int> min_element(const EPSet& s) {
  if (s.is_empty() || !s.bounded_below()) return std::nullopt;
  const auto first = s.elements_in(s.lo(), s.hi() + s.period());
  return first.front();
}

bool within_naturals(const EPSet& s) {
  if (s.is_empty()) return true;
  const auto m = min_element(s);
  return m && *m >= 0;
}

Int set_gcd(const EPSet& s) {
  // Every element is congruent to one in [lo, hi + 2g] modulo a difference of two of them.
  Int acc = 0;
  for (Int x : s.elements_in(s.lo(), s.hi() + 2 * s.period())) acc = gcd(acc, x);
  return acc;
}

DensityReport finish_profile(DensityReport r) {
  Rational best(0);
  for (const auto& [n, q] : r.profile) {
    best = std::max(best, q);
    r.sup_profile.emplace_back(n, best);
  }
  return r;
}

void check_samples(std::span<const Int> samples) {
  for (Int n : samples)
    if (n < 1) throw PreconditionError("density samples must be positive");
}

}  // namespace

std::string DensityReport::to_csv() const {
  std::ostringstream os;
  os << "n,ratio,running_max\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    os << profile[i].first << ',' << to_string(profile[i].second) << ',' << to_string(sup_profile[i].second) << '\n';
  return os.str();
}

DensityReport density_profile(const EPSet& s, std::span<const Int> samples) {
  check_samples(samples);
  DensityReport r;
  r.exact_density = upper_density(s);
  for (Int n : samples) r.profile.emplace_back(n, Rational(static_cast<Int>(s.elements_in(1, n).size()), n));
  return finish_profile(std::move(r));
}

DensityReport density_profile(const TruncatedSet& s, std::span<const Int> samples) {
  check_samples(samples);
  DensityReport r;
  for (Int n : samples) {
    if (n > s.horizon) throw PreconditionError("density sample beyond the truncation horizon");
    r.profile.emplace_back(n, Rational(s.count_up_to(n), n));
  }
  return finish_profile(std::move(r));
}

FreimanResult freiman_check(std::span<const Int> xs) {
  std::vector<Int> x(xs.begin(), xs.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  if (x.size() < 2) throw PreconditionError("Freiman check needs at least two elements");
  if (x.front() != 0) throw PreconditionError("Freiman check needs 0 in X and nonnegative elements");
  Int g = 0;
  for (Int v : x) g = gcd(g, v);
  if (g != 1) throw PreconditionError("Freiman check needs gcd(X) = 1");
  const Int m = x.back();
  std::vector<bool> sums(static_cast<std::size_t>(2 * m + 1));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i; j < x.size(); ++j) sums[static_cast<std::size_t>(x[i] + x[j])] = true;
  FreimanResult r;
  r.lhs = static_cast<Int>(std::count(sums.begin(), sums.end(), true));
  const Int k = static_cast<Int>(x.size());
  r.rhs = std::min(3 * k - 3, k + m);
  r.holds = r.lhs >= r.rhs;
  return r;
}

DoublingDensityResult doubling_density_check(const EPSet& x) {
  if (!within_naturals(x) || x.is_empty()) throw PreconditionError("X must be a nonempty subset of N");
  if (!x.contains(0)) throw PreconditionError("X must contain 0");
  if (set_gcd(x) != 1) throw PreconditionError("X must have gcd 1");
  DoublingDensityResult r;
  r.density = upper_density(x);
  r.sum_density = upper_density(minkowski_sum(x, x));
  r.required = r.density <= Rational(1, 2) ? r.density * 3 / 2 : (1 + r.density) / 2;
  r.holds = r.sum_density >= r.required;
  return r;
}

GapBoundReport gap_bound_check(const EPSet& x, Int a, Int b, const Limits& limits) {
  if (b < 1 || a < b) throw PreconditionError("gap bound needs a >= b >= 1");
  GapBoundReport r;
  r.a = a;
  r.b = b;
  r.density = upper_density(x);
  r.threshold = Rational(a, a + 1);
  r.precondition_met = r.density > r.threshold;
  r.forward = minkowski_sum(dilate(x, a, limits), dilate(x, -b, limits), limits);
  r.backward = minkowski_sum(dilate(x, b, limits), dilate(x, -a, limits), limits);
  r.forward_gap = max_gap(r.forward);
  r.backward_gap = max_gap(r.backward);
  r.holds = !r.forward_gap.unbounded && !r.backward_gap.unbounded && r.forward_gap.value <= a &&
            r.backward_gap.value <= a;
  return r;
}

bool tail_contained(const EPSet& s, const EPSet& t) {
  const Int start = std::max(s.hi(), t.hi()) + 1;
  const Int span = lcm(s.period(), t.period());
  for (Int x = start; x < start + span; ++x)
    if (s.contains(x) && !t.contains(x)) return false;
  return true;
}

KneserReport kneser_dichotomy(const EPSet& x, int k, const Limits& limits) {
  if (k < 1) throw PreconditionError("k must be positive");
  if (!within_naturals(x)) throw PreconditionError("X must be a subset of N");
  if (x.pos_mask().none()) throw PreconditionError("X needs positive lower density");
  KneserReport r;
  r.k = k;
  r.sumset = sumset_power(x, k, limits);
  r.density = upper_density(x);
  r.sumset_density = upper_density(r.sumset);
  if (r.sumset_density >= r.density * k) {
    r.branch = 1;
    return r;
  }
  const Int p = r.sumset.period();
  std::vector<Int> candidates{p};
  for (Int d = p - 1; d >= 1; --d)
    if (p % d == 0) candidates.push_back(d);
  for (Int m = 2; m <= 8; ++m) candidates.push_back(p * m);
  for (Int g = 1; g <= 64; ++g) candidates.push_back(g);
  std::vector<Int> seen;
  for (Int g : candidates) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    r.candidates_tried.push_back(g);
    const EPSet closure = minkowski_sum(x, EPSet::up_progression(0, g, 0), limits);
    const Rational closure_density = upper_density(closure);
    const bool contains = is_subset(x, closure);
    const bool semi = is_semi_periodic_mod(closure, g);
    const bool tail = tail_contained(sumset_power(closure, k, limits), r.sumset);
    const bool ineq = r.sumset_density >= closure_density * k - Rational(k - 1, g);
    if (contains && semi && tail && ineq) {
      r.branch = 2;
      r.g = g;
      r.closure = closure;
      r.closure_density = closure_density;
      r.contains_input = contains;
      r.semi_periodic = semi;
      r.tail_contained = tail;
      r.density_inequality = ineq;
      return r;
    }
  }
  return r;
}

EPSet dplus(const EPSet& a, const Limits& limits) {
  if (!within_naturals(a)) throw PreconditionError("D+ needs a subset of N");
  return restrict_nonnegative(minkowski_sum(a, negate(a), limits), limits);
}

StabilityTime stability_time(const EPSet& a, Int max_k, const Limits& limits) {
  if (max_k < 0) throw PreconditionError("max_k must be nonnegative");
  StabilityTime r;
  r.iterates.push_back(a);
  for (Int k = 0; k <= max_k; ++k) {
    EPSet next = dplus(r.iterates.back(), limits);
    const bool fixed = next == r.iterates.back();
    r.iterates.push_back(std::move(next));
    if (fixed) {
      r.t = k;
      break;
    }
  }
  return r;
}

double LogBound::value() const {
  return static_cast<double>(offset) + static_cast<double>(scale) * std::log2(to_double(arg));
}

bool LogBound::admits(Int t) const {
  // t <= offset + scale * log2(n/m)  <=>  2^(t - offset) * m^scale <= n^scale
  const Int d = t - offset;
  BigInt n = 1, m = 1;
  for (Int i = 0; i < scale; ++i) {
    n *= arg.numerator();
    m *= arg.denominator();
  }
  if (d >= 0) return (BigInt(1) << static_cast<unsigned>(d)) * m <= n;
  return m <= n * (BigInt(1) << static_cast<unsigned>(-d));
}

std::string LogBound::to_string() const {
  std::string s;
  if (offset != 0) s += std::to_string(offset) + "+";
  if (scale != 1) s += std::to_string(scale) + "*";
  return s + "log2(" + linstab::to_string(arg) + ")";
}

StabilityBounds stability_bounds(const Rational& density) {
  if (density <= 0) throw PreconditionError("density must be positive");
  if (density > Rational(1, 2))
    throw PreconditionError("density above 1/2: D+(A) is all of N and T(A) <= 1, the bounds do not apply");
  StabilityBounds b;
  b.stewart_tijdeman = LogBound{0, 2, 1 / density};
  b.ruzsa = LogBound{2, 1, 1 / density - 1};
  return b;
}

}  // namespace linstab
