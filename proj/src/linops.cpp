#include "linstab/linops.hpp"

#include <algorithm>

namespace linstab {

LinearOp::LinearOp(Int a_, Int b_) : a(a_), b(b_) {
  if (a < 1 || b < 1) throw SemanticError("linear operation needs positive coefficients");
}

OpSequence::OpSequence(std::vector<LinearOp> ops_, bool cyclic_)
    : ops(std::move(ops_)), bound(std::max<Int>(1, max_entry())), cyclic(cyclic_) {}

OpSequence::OpSequence(std::vector<LinearOp> ops_, Int bound_, bool cyclic_)
    : ops(std::move(ops_)), bound(bound_), cyclic(cyclic_) {
  if (bound < 1) throw SemanticError("sequence bound must be positive");
  if (max_entry() > bound) throw SemanticError("an operation exceeds the sequence bound");
}

const LinearOp& OpSequence::at(std::size_t k) const {
  if (ops.empty()) throw PreconditionError("empty operation sequence");
  if (cyclic) return ops[k % ops.size()];
  if (k >= ops.size()) throw PreconditionError("operation index past the end of a finite sequence");
  return ops[k];
}

bool OpSequence::all_coprime() const {
  return std::all_of(ops.begin(), ops.end(), [](const LinearOp& op) { return op.coprime(); });
}

Int OpSequence::max_entry() const {
  Int m = 0;
  for (const auto& op : ops) m = std::max({m, op.a, op.b});
  return m;
}

std::string OpSequence::to_string() const {
  std::string body;
  for (std::size_t i = 0; i < ops.size();) {
    std::size_t j = i;
    while (j < ops.size() && ops[j] == ops[i]) ++j;
    body += "(" + std::to_string(ops[i].a) + "," + std::to_string(ops[i].b) + ")";
    if (j - i > 1) body += "^" + std::to_string(j - i);
    i = j;
  }
  return cyclic ? "cyc[" + body + "]" : body;
}

BigInt CoefficientExpansion::total_multiplicity() const {
  BigInt total = 0;
  for (const auto& [c, m] : terms) total += m;
  return total;
}

BigInt CoefficientExpansion::positive_multiplicity() const {
  BigInt total = 0;
  for (const auto& [c, m] : terms)
    if (c > 0) total += m;
  return total;
}

BigInt CoefficientExpansion::negative_multiplicity() const {
  BigInt total = 0;
  for (const auto& [c, m] : terms)
    if (c < 0) total += m;
  return total;
}

EPSet apply_linear_op(const LinearOp& op, const EPSet& s, const Limits& limits) {
  if (s.is_empty()) return s;
  return minkowski_sum(dilate(s, op.a, limits), dilate(s, -op.b, limits), limits);
}

EPSet apply_composition(const OpSequence& seq, const EPSet& s, std::optional<std::size_t> steps,
                        const Limits& limits) {
  const std::size_t n = steps.value_or(seq.size());
  EPSet acc = s;
  for (std::size_t k = 0; k < n; ++k) acc = apply_linear_op(seq.at(k), acc, limits);
  return acc;
}

CoefficientExpansion compose_coefficients(const OpSequence& seq) {
  if (seq.empty()) throw PreconditionError("coefficient expansion needs a nonempty sequence");
  std::map<BigInt, BigInt> current{{BigInt(1), BigInt(1)}};
  for (const auto& op : seq.ops) {
    std::map<BigInt, BigInt> next;
    for (const auto& [coef, mult] : current) {
      next[coef * op.a] += mult;
      next[-coef * op.b] += mult;
    }
    current = std::move(next);
  }
  return CoefficientExpansion{std::move(current)};
}

namespace {

BigInt pow_big(BigInt base, Int exp) {
  BigInt r = 1;
  for (Int i = 0; i < exp; ++i) r *= base;
  return r;
}

BigInt ceil_div(const BigInt& num, const BigInt& den) { return (num + den - 1) / den; }

}  // namespace

DominantPair dominant_coefficient_pair(const OpSequence& seq, const BigInt& m) {
  if (m < 1) throw PreconditionError("m must be a positive integer");
  DominantPair out;
  out.t = static_cast<Int>(seq.size());
  out.bound = seq.bound;
  const Int L = seq.bound;
  // t >= 2 log2(m) + 4L + 2  <=>  e := t - 4L - 2 >= 0 and 2^e >= m^2
  const Int e = out.t - 4 * L - 2;
  out.sufficient_depth = e >= 0 && pow_big(2, e) >= m * m;
  if (!out.sufficient_depth) return out;

  const CoefficientExpansion expansion = compose_coefficients(seq);
  bool have_pos = false, have_neg = false;
  for (const auto& [coef, mult] : expansion.terms) {
    // std::map iterates in ascending coefficient order, so strict '>' keeps the smallest value on ties.
    if (coef > 0) {
      if (!have_pos || mult > out.alpha_multiplicity) {
        out.alpha = coef;
        out.alpha_multiplicity = mult;
        have_pos = true;
      }
    }
  }
  for (auto it = expansion.terms.rbegin(); it != expansion.terms.rend(); ++it) {
    const auto& [coef, mult] = *it;
    if (coef < 0) {
      // reverse order visits -1, -2, ... so beta ascends
      if (!have_neg || mult > out.beta_multiplicity) {
        out.beta = -coef;
        out.beta_multiplicity = mult;
        have_neg = true;
      }
    }
  }
  // ceil(2^(t-1) / (4t/L)^L) = ceil(2^(t-1) L^L / (4t)^L)
  out.pigeonhole_count = ceil_div(pow_big(2, out.t - 1) * pow_big(L, L), pow_big(4 * out.t, L));
  out.coefficient_cap = pow_big(L, out.t);
  out.counts_reach_pigeonhole =
      out.alpha_multiplicity >= out.pigeonhole_count && out.beta_multiplicity >= out.pigeonhole_count;
  out.counts_reach_m = out.alpha_multiplicity >= m && out.beta_multiplicity >= m;
  out.within_cap = out.alpha <= out.coefficient_cap && out.beta <= out.coefficient_cap;
  return out;
}

}  // namespace linstab
