#include "linstab/residue.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace linstab {

ResidueSet::ResidueSet(Int modulus) : g_(modulus) {
  if (modulus < 1) throw SemanticError("modulus must be positive");
  bits_ = Bitmap(static_cast<std::size_t>(modulus));
}

ResidueSet::ResidueSet(Int modulus, const std::vector<Int>& elems) : ResidueSet(modulus) {
  for (Int e : elems) insert(e);
}

ResidueSet ResidueSet::subgroup(Int modulus, Int step) {
  if (step < 1 || modulus % step != 0) throw PreconditionError("subgroup step must divide the modulus");
  ResidueSet h(modulus);
  for (Int x = 0; x < modulus; x += step) h.insert(x);
  return h;
}

std::vector<Int> ResidueSet::elements() const {
  std::vector<Int> out;
  bits_.for_each_set([&](std::size_t i) { out.push_back(static_cast<Int>(i)); });
  return out;
}

namespace {

inline std::uint64_t low_mask(Int g) { return g == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g) - 1; }

inline std::uint64_t rotate_word(std::uint64_t w, Int s, Int g) {
  if (s == 0) return w;
  return ((w << s) | (w >> (g - s))) & low_mask(g);
}

}  // namespace

ResidueSet ResidueSet::translated(Int c) const {
  ResidueSet out(g_);
  const Int s = floor_mod(c, g_);
  if (g_ <= 64) {
    const std::uint64_t w = bits_.words()[0];
    const std::uint64_t r = rotate_word(w, s, g_);
    for (Int i = 0; i < g_; ++i)
      if ((r >> i) & 1U) out.bits_.set(static_cast<std::size_t>(i));
    return out;
  }
  bits_.for_each_set([&](std::size_t i) { out.insert(static_cast<Int>(i) + s); });
  return out;
}

ResidueSet ResidueSet::scaled(Int k) const {
  ResidueSet out(g_);
  bits_.for_each_set([&](std::size_t i) {
    out.insert(static_cast<Int>((static_cast<__int128>(i) * k) % g_));
  });
  return out;
}

ResidueSet ResidueSet::plus(const ResidueSet& other) const {
  if (other.g_ != g_) throw PreconditionError("residue sets live in different groups");
  ResidueSet out(g_);
  if (g_ <= 64) {
    const std::uint64_t w = other.bits_.words()[0];
    std::uint64_t acc = 0;
    bits_.for_each_set([&](std::size_t i) { acc |= rotate_word(w, static_cast<Int>(i), g_); });
    for (Int i = 0; i < g_; ++i)
      if ((acc >> i) & 1U) out.bits_.set(static_cast<std::size_t>(i));
    return out;
  }
  const auto ys = other.elements();
  bits_.for_each_set([&](std::size_t i) {
    for (Int y : ys) out.insert(static_cast<Int>(i) + y);
  });
  return out;
}

ResidueSet ResidueSet::reduced(Int h) const {
  if (h < 1 || g_ % h != 0) throw PreconditionError("quotient modulus must divide the modulus");
  ResidueSet out(h);
  bits_.for_each_set([&](std::size_t i) { out.insert(static_cast<Int>(i)); });
  return out;
}

bool ResidueSet::within_subgroup(Int step) const {
  bool ok = true;
  bits_.for_each_set([&](std::size_t i) { ok = ok && (static_cast<Int>(i) % step == 0); });
  return ok;
}

std::string ResidueSet::to_string() const {
  std::ostringstream os;
  os << "mod " << g_ << " {";
  bool first = true;
  bits_.for_each_set([&](std::size_t i) {
    os << (first ? "" : ",") << i;
    first = false;
  });
  os << '}';
  return os.str();
}

ResidueSet gamma_mod(const ResidueSet& u, Int a, Int b) { return u.scaled(a).plus(u.scaled(b)); }

Int period_step(const ResidueSet& u) {
  if (u.empty()) throw PreconditionError("the period of the empty set is undefined");
  const Int g = u.modulus();
  for (Int d = 1; d < g; ++d) {
    if (g % d != 0) continue;
    if (u.translated(d) == u) return d;
  }
  return g;
}

ResidueSet period(const ResidueSet& u) { return ResidueSet::subgroup(u.modulus(), period_step(u)); }

CardinalityCheck cardinality_check(const ResidueSet& u, Int a, Int b) {
  if (gcd(a, b) != 1) throw PreconditionError("cardinality check needs gcd(a, b) = 1");
  CardinalityCheck c;
  c.size = u.size();
  c.image_size = gamma_mod(u, a, b).size();
  c.holds = c.image_size >= c.size;
  return c;
}

Int coprime_split(Int g, Int a) {
  Int part = 1;
  Int rest = g;
  for (Int p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    Int pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    if (a % p == 0) part *= pk;
  }
  if (rest > 1 && a % rest == 0) part *= rest;
  return part;
}

namespace {

// The element of stepA*(Z/m) congruent to r modulo stepB, for m = stepA * stepB coprime.
Int crt_representative(Int r, Int step_a, Int step_b) {
  const Int m = step_a * step_b;
  for (Int v = 0; v < m; v += step_a)
    if (floor_mod(v - r, step_b) == 0) return v;
  throw Error("no CRT representative");  // unreachable for coprime steps
}

bool generates_group(const ResidueSet& u) {
  Int acc = u.modulus();
  for (Int x : u.elements()) acc = gcd(acc, x);
  return acc == 1;
}

}  // namespace

DecompositionResult decompose_equality_case(const ResidueSet& u, Int a, Int b) {
  if (a < 1 || b < 1) return DecompositionFailure{"a, b positive", "coefficients must be positive"};
  if (gcd(a, b) != 1) return DecompositionFailure{"gcd(a,b)=1", "a and b share a factor"};
  if (u.empty()) return DecompositionFailure{"U nonempty", "the empty set has no decomposition"};
  const Int g = u.modulus();
  const Int shift = u.elements().front();
  const ResidueSet base = u.translated(-shift);
  if (!generates_group(base))
    return DecompositionFailure{"U not contained in a proper subgroup",
                                "the translate containing 0 lies in a proper subgroup"};
  const std::size_t image = gamma_mod(base, a, b).size();
  if (image != base.size())
    return DecompositionFailure{"|aU+bU|=|U|", "|aU+bU| = " + std::to_string(image) + " but |U| = " +
                                                   std::to_string(base.size())};

  // Quotient by the period: G/H is Z/hZ with h the period step.
  const Int h = period_step(base);
  const ResidueSet quotient = base.reduced(h);
  const Int a1 = gcd(h, a);
  const Int b1 = gcd(h, b);
  if (a1 * b1 != h)
    return DecompositionFailure{"quotient modulus = gcd(g1,a) * gcd(g1,b)",
                                "g1 = " + std::to_string(h) + ", a1 = " + std::to_string(a1) +
                                    ", b1 = " + std::to_string(b1)};
  // With h = a1 * b1 the prime-power split of h over primes of a is exactly a1.
  const Int a_split = coprime_split(h, a);
  const Int b_split = h / a_split;

  // Components of the quotient set in the cosets of b_split*(Z/h).
  std::map<Int, std::vector<Int>> components;
  for (Int q : quotient.elements()) components[floor_mod(q, b_split)].push_back(q);
  ResidueSet v_quot(h);
  std::optional<ResidueSet> x_quot;
  for (const auto& [cls, members] : components) {
    const Int rep = crt_representative(cls, a_split, b_split);
    ResidueSet xj(h);
    for (Int q : members) xj.insert(q - rep);
    if (!x_quot) {
      x_quot = xj;
    } else if (!(*x_quot == xj)) {
      return DecompositionFailure{"components are translates of one another",
                                  "component over class " + std::to_string(cls) + " differs"};
    }
    v_quot.insert(rep);
  }

  DecompositionCertificate cert;
  cert.modulus = g;
  cert.translation = shift;
  cert.a1 = a_split;
  cert.b1 = b_split;
  cert.h_step = h;
  cert.v = ResidueSet(g, v_quot.elements());
  cert.x = ResidueSet(g, x_quot->elements());
  if (!cert.verify(u, a, b))
    return DecompositionFailure{"certificate invariants", "reconstruction V + X + H != U"};
  return cert;
}

bool DecompositionCertificate::verify(const ResidueSet& u, Int a, Int b) const {
  if (u.modulus() != modulus) return false;
  const ResidueSet base = u.translated(-translation);
  if (!base.contains(0)) return false;
  if (gcd(modulus, a) % a1 != 0 || gcd(modulus, b) % b1 != 0) return false;
  if (h_step != a1 * b1 || modulus % h_step != 0) return false;
  if (!v.within_subgroup(a1) || !x.within_subgroup(b1)) return false;
  const ResidueSet hs = h();
  const ResidueSet rebuilt = v.plus(x).plus(hs);
  if (!(rebuilt == base)) return false;
  if (v.size() * x.size() * hs.size() != base.size()) return false;
  // aU + bU = aV + bX + H
  return gamma_mod(base, a, b) == v.scaled(a).plus(x.scaled(b)).plus(hs);
}

ResidueOrbit residue_orbit(const ResidueSet& u, Int a, Int b, std::size_t max_steps) {
  if (gcd(a, b) != 1) throw PreconditionError("residue orbit needs gcd(a, b) = 1");
  ResidueOrbit orbit;
  orbit.phi_product = euler_phi(a) * euler_phi(b);
  std::map<std::vector<std::uint64_t>, std::size_t> seen;
  orbit.iterates.push_back(u);
  seen.emplace(u.bits().words(), 0);
  for (std::size_t step = 1; step <= max_steps; ++step) {
    ResidueSet next = gamma_mod(orbit.iterates.back(), a, b);
    auto [it, inserted] = seen.emplace(next.bits().words(), step);
    if (!inserted) {
      orbit.onset = it->second;
      orbit.length = step - it->second;
      orbit.cardinality_preserved =
          std::all_of(orbit.iterates.begin(), orbit.iterates.end(),
                      [&](const ResidueSet& r) { return r.size() == u.size(); });
      if (orbit.cardinality_preserved)
        orbit.length_divides_phi = orbit.phi_product % static_cast<Int>(orbit.length) == 0;
      return orbit;
    }
    orbit.iterates.push_back(std::move(next));
  }
  throw Error("residue orbit did not close within " + std::to_string(max_steps) + " steps");
}

Lemma52Report lemma52_check(const ResidueSet& x, Int a, Int b) {
  Lemma52Report r;
  const Int g = x.modulus();
  r.required_step = g / gcd(g, b);
  if (gcd(a, b) != 1) {
    r.failed_hypothesis = "gcd(a,b)=1";
    return r;
  }
  if (!x.contains(0)) {
    r.failed_hypothesis = "0 in X";
    return r;
  }
  if (period_step(x) != g) {
    r.failed_hypothesis = "X not periodic";
    return r;
  }
  if (!(gamma_mod(x, a, b) == x.scaled(a))) {
    r.failed_hypothesis = "aX+bX=aX";
    return r;
  }
  r.hypotheses_hold = true;
  r.containment_holds = x.within_subgroup(r.required_step);
  r.witnesses = x.elements();
  return r;
}

Lemma51Report lemma51_fully_periodic(const EPSet& s, Int g, const EPSet& t, Int g_prime) {
  if (g < 1 || g_prime < 1) throw PreconditionError("moduli must be positive");
  if (!is_semi_periodic_mod(s, g)) throw PreconditionError("first set is not semi-periodic modulo g");
  if (!is_semi_periodic_mod(t, g_prime)) throw PreconditionError("second set is not semi-periodic modulo g'");
  Lemma51Report r;
  r.g = g;
  r.g_prime = g_prime;
  r.modulus = gcd(g, g_prime);
  r.difference = minkowski_sum(s, negate(t));
  r.fully_periodic = is_fully_periodic_mod(r.difference, r.modulus);
  return r;
}

}  // namespace linstab
