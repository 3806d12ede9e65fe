#include "linstab/epset.hpp"

#include <algorithm>
#include <sstream>

namespace linstab {

Limits& default_limits() {
  static Limits limits;
  return limits;
}

bool RawEPSet::contains(Int x) const {
  if (x < lo) return neg_tail[static_cast<std::size_t>(floor_mod(x, period))];
  if (x > hi) return pos_tail[static_cast<std::size_t>(floor_mod(x, period))];
  return window[static_cast<std::size_t>(x - lo)];
}

// Working representation shared by the set operations before canonicalization.
struct Rep {
  Int g = 1;
  Int lo = 0;
  Int hi = -1;
  Bitmap window;
  Bitmap neg{1};
  Bitmap pos{1};

  bool contains(Int x) const {
    if (x < lo) return neg.test(static_cast<std::size_t>(floor_mod(x, g)));
    if (x > hi) return pos.test(static_cast<std::size_t>(floor_mod(x, g)));
    return window.test(static_cast<std::size_t>(x - lo));
  }
};

namespace {

std::size_t window_length(Int lo, Int hi, const Limits& limits) {
  if (hi < lo) return 0;
  const Int len = checked_add(checked_sub(hi, lo), 1);
  if (static_cast<std::size_t>(len) > limits.window_cap)
    throw ResourceLimitError("window of length " + std::to_string(len) + " exceeds cap " +
                             std::to_string(limits.window_cap));
  return static_cast<std::size_t>(len);
}

void check_period(Int g, const Limits& limits) {
  if (g > limits.period_cap)
    throw ResourceLimitError("period " + std::to_string(g) + " exceeds cap " +
                             std::to_string(limits.period_cap));
}

bool has_period(const Bitmap& mask, std::size_t d) {
  for (std::size_t i = d; i < mask.size(); ++i)
    if (mask.test(i) != mask.test(i % d)) return false;
  return true;
}

Bitmap truncate_mask(const Bitmap& mask, std::size_t d) {
  Bitmap out(d);
  for (std::size_t i = 0; i < d; ++i) out.assign(i, mask.test(i));
  return out;
}

Bitmap lift_mask(const Bitmap& mask, Int g, Int big) {
  Bitmap out(static_cast<std::size_t>(big));
  for (Int c = 0; c < big; ++c) out.assign(static_cast<std::size_t>(c), mask.test(static_cast<std::size_t>(c % g)));
  return out;
}

}  // namespace

class EPSetBuilder {
 public:
  static EPSet canonical(Rep rep, const Limits& limits);
  static Rep rep_of(const EPSet& s) {
    Rep r;
    r.g = s.period_;
    r.lo = s.lo_;
    r.hi = s.hi_;
    r.window = s.window_;
    r.neg = s.neg_;
    r.pos = s.pos_;
    return r;
  }
  static EPSet from_canonical_rep(Rep rep) {
    EPSet s;
    s.period_ = rep.g;
    s.lo_ = rep.lo;
    s.hi_ = rep.hi;
    s.window_ = std::move(rep.window);
    s.neg_ = std::move(rep.neg);
    s.pos_ = std::move(rep.pos);
    return s;
  }
};

EPSet EPSetBuilder::canonical(Rep rep, const Limits& limits) {
  // Minimal common period of both tails.
  const auto g = static_cast<std::size_t>(rep.g);
  for (std::size_t d = 1; d < g; ++d) {
    if (g % d != 0) continue;
    if (has_period(rep.neg, d) && has_period(rep.pos, d)) {
      rep.neg = truncate_mask(rep.neg, d);
      rep.pos = truncate_mask(rep.pos, d);
      rep.g = static_cast<Int>(d);
      break;
    }
  }
  const Int period = rep.g;
  auto neg_at = [&](Int x) { return rep.neg.test(static_cast<std::size_t>(floor_mod(x, period))); };
  auto pos_at = [&](Int x) { return rep.pos.test(static_cast<std::size_t>(floor_mod(x, period))); };
  const bool tails_equal = rep.neg == rep.pos;

  // Largest member-disagreement with the positive rule.
  std::optional<Int> top;
  for (Int x = rep.hi; x >= rep.lo; --x) {
    if (rep.contains(x) != pos_at(x)) {
      top = x;
      break;
    }
  }
  if (!top && !tails_equal) {
    for (Int x = rep.lo - 1; x >= rep.lo - period; --x) {
      if (neg_at(x) != pos_at(x)) {
        top = x;
        break;
      }
    }
  }
  if (!top) {
    // Fully periodic: neg == pos and the window agrees with them.
    Rep out;
    out.g = period;
    out.lo = 0;
    out.hi = -1;
    out.neg = rep.neg;
    out.pos = rep.pos;
    return from_canonical_rep(std::move(out));
  }
  // Smallest member-disagreement with the negative rule.
  std::optional<Int> bottom;
  for (Int x = rep.lo; x <= rep.hi; ++x) {
    if (rep.contains(x) != neg_at(x)) {
      bottom = x;
      break;
    }
  }
  if (!bottom) {
    for (Int x = rep.hi + 1; x <= rep.hi + period; ++x) {
      if (neg_at(x) != pos_at(x)) {
        bottom = x;
        break;
      }
    }
  }
  Int new_lo = *bottom;
  Int new_hi = *top;
  if (new_lo > new_hi + 1) new_lo = new_hi + 1;

  Rep out;
  out.g = period;
  out.lo = new_lo;
  out.hi = new_hi;
  out.window = Bitmap(window_length(new_lo, new_hi, limits));
  for (Int x = new_lo; x <= new_hi; ++x)
    if (rep.contains(x)) out.window.set(static_cast<std::size_t>(x - new_lo));
  out.neg = rep.neg;
  out.pos = rep.pos;
  return from_canonical_rep(std::move(out));
}

EPSet canonicalize(const RawEPSet& raw, const Limits& limits) {
  if (raw.period < 1) throw PreconditionError("period must be positive");
  if (raw.lo > raw.hi + 1) throw PreconditionError("window bounds need lo <= hi + 1");
  if (raw.neg_tail.size() != static_cast<std::size_t>(raw.period) ||
      raw.pos_tail.size() != static_cast<std::size_t>(raw.period))
    throw PreconditionError("tail masks must have one entry per residue");
  if (raw.window.size() != static_cast<std::size_t>(raw.hi - raw.lo + 1))
    throw PreconditionError("window length must be hi - lo + 1");
  check_period(raw.period, limits);
  Rep rep;
  rep.g = raw.period;
  rep.lo = raw.lo;
  rep.hi = raw.hi;
  rep.window = Bitmap(raw.window.size());
  for (std::size_t i = 0; i < raw.window.size(); ++i) rep.window.assign(i, raw.window[i]);
  rep.neg = Bitmap(static_cast<std::size_t>(raw.period));
  rep.pos = Bitmap(static_cast<std::size_t>(raw.period));
  for (std::size_t i = 0; i < raw.neg_tail.size(); ++i) {
    rep.neg.assign(i, raw.neg_tail[i]);
    rep.pos.assign(i, raw.pos_tail[i]);
  }
  return EPSetBuilder::canonical(std::move(rep), limits);
}

// ---------------------------------------------------------------------------
// Constructors and accessors

EPSet::EPSet() = default;

EPSet EPSet::integers() {
  Rep r;
  r.pos.set(0);
  r.neg.set(0);
  return EPSetBuilder::from_canonical_rep(std::move(r));
}

EPSet EPSet::naturals() { return up_progression(0, 1, 0); }

EPSet EPSet::finite(std::span<const Int> elems) {
  if (elems.empty()) return EPSet();
  const auto [mn, mx] = std::minmax_element(elems.begin(), elems.end());
  Rep r;
  r.lo = *mn;
  r.hi = *mx;
  r.window = Bitmap(window_length(r.lo, r.hi, default_limits()));
  for (Int x : elems) r.window.set(static_cast<std::size_t>(x - r.lo));
  return EPSetBuilder::canonical(std::move(r), default_limits());
}

EPSet EPSet::progression(Int r, Int g) {
  if (g < 1) throw PreconditionError("modulus must be positive");
  check_period(g, default_limits());
  Rep rep;
  rep.g = g;
  rep.neg = Bitmap(static_cast<std::size_t>(g));
  rep.pos = Bitmap(static_cast<std::size_t>(g));
  rep.neg.set(static_cast<std::size_t>(floor_mod(r, g)));
  rep.pos.set(static_cast<std::size_t>(floor_mod(r, g)));
  return EPSetBuilder::canonical(std::move(rep), default_limits());
}

EPSet EPSet::up_progression(Int r, Int g, Int n0) {
  if (g < 1) throw PreconditionError("modulus must be positive");
  check_period(g, default_limits());
  const Int start = std::max(r, n0);
  const Int first = start + floor_mod(r - start, g);
  Rep rep;
  rep.g = g;
  rep.lo = first;
  rep.hi = first - 1;
  rep.neg = Bitmap(static_cast<std::size_t>(g));
  rep.pos = Bitmap(static_cast<std::size_t>(g));
  rep.pos.set(static_cast<std::size_t>(floor_mod(r, g)));
  return EPSetBuilder::canonical(std::move(rep), default_limits());
}

EPSet EPSet::down_progression(Int r, Int g, Int n1) {
  if (g < 1) throw PreconditionError("modulus must be positive");
  check_period(g, default_limits());
  const Int end = std::min(r, n1);
  const Int last = end - floor_mod(end - r, g);
  Rep rep;
  rep.g = g;
  rep.lo = last + 1;
  rep.hi = last;
  rep.neg = Bitmap(static_cast<std::size_t>(g));
  rep.pos = Bitmap(static_cast<std::size_t>(g));
  rep.neg.set(static_cast<std::size_t>(floor_mod(r, g)));
  return EPSetBuilder::canonical(std::move(rep), default_limits());
}

std::vector<Int> EPSet::neg_tail() const {
  std::vector<Int> out;
  neg_.for_each_set([&](std::size_t i) { out.push_back(static_cast<Int>(i)); });
  return out;
}

std::vector<Int> EPSet::pos_tail() const {
  std::vector<Int> out;
  pos_.for_each_set([&](std::size_t i) { out.push_back(static_cast<Int>(i)); });
  return out;
}

bool EPSet::contains(Int x) const {
  if (x < lo_) return neg_.test(static_cast<std::size_t>(floor_mod(x, period_)));
  if (x > hi_) return pos_.test(static_cast<std::size_t>(floor_mod(x, period_)));
  return window_.test(static_cast<std::size_t>(x - lo_));
}

bool EPSet::is_empty() const { return is_finite() && window_.none(); }

std::vector<Int> EPSet::elements_in(Int from, Int to) const {
  std::vector<Int> out;
  for (Int x = from; x <= to; ++x)
    if (contains(x)) out.push_back(x);
  return out;
}

std::vector<Int> EPSet::elements() const {
  if (!is_finite()) throw PreconditionError("elements() needs a finite set");
  std::vector<Int> out;
  window_.for_each_set([&](std::size_t i) { out.push_back(lo_ + static_cast<Int>(i)); });
  return out;
}

RawEPSet EPSet::raw() const {
  RawEPSet r;
  r.period = period_;
  r.lo = lo_;
  r.hi = hi_;
  r.window.resize(window_.size());
  for (std::size_t i = 0; i < window_.size(); ++i) r.window[i] = window_.test(i);
  r.neg_tail.resize(static_cast<std::size_t>(period_));
  r.pos_tail.resize(static_cast<std::size_t>(period_));
  for (std::size_t i = 0; i < r.neg_tail.size(); ++i) {
    r.neg_tail[i] = neg_.test(i);
    r.pos_tail[i] = pos_.test(i);
  }
  return r;
}

namespace {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over a running combination
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t EPSet::hash() const noexcept {
  std::uint64_t h = mix(0, static_cast<std::uint64_t>(period_));
  h = mix(h, static_cast<std::uint64_t>(lo_));
  h = mix(h, static_cast<std::uint64_t>(hi_));
  for (auto w : window_.words()) h = mix(h, w);
  for (auto w : neg_.words()) h = mix(h, w);
  for (auto w : pos_.words()) h = mix(h, w);
  return static_cast<std::size_t>(h);
}

std::string EPSet::to_string() const {
  if (is_empty()) return "{}";
  if (is_fully_periodic() && period_ == 1) return "Z";
  if (period_ == 1 && neg_.none() && pos_.test(0) && window_.empty()) {
    if (lo_ == 0) return "N";
  }
  std::vector<std::string> parts;
  if (is_fully_periodic()) {
    for (Int c : pos_tail()) parts.push_back("AP(" + std::to_string(c) + "," + std::to_string(period_) + ")");
  } else {
    for (Int c : neg_tail()) {
      const Int last = (lo_ - 1) - floor_mod((lo_ - 1) - c, period_);
      parts.push_back("AP-(" + std::to_string(last) + "," + std::to_string(period_) + "," +
                      std::to_string(last) + ")");
    }
    std::vector<Int> members;
    window_.for_each_set([&](std::size_t i) { members.push_back(lo_ + static_cast<Int>(i)); });
    if (!members.empty()) {
      std::ostringstream os;
      os << '{';
      for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
      os << '}';
      parts.push_back(os.str());
    }
    for (Int c : pos_tail()) {
      const Int first = (hi_ + 1) + floor_mod(c - (hi_ + 1), period_);
      parts.push_back("AP+(" + std::to_string(first) + "," + std::to_string(period_) + "," +
                      std::to_string(first) + ")");
    }
  }
  if (parts.size() == 1) return parts.front();
  std::string out = "U(";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + ")";
}

// ---------------------------------------------------------------------------
// Operations

bool equals(const EPSet& s, const EPSet& t) { return s == t; }
bool membership(const EPSet& s, Int x) { return s.contains(x); }

EPSet negate(const EPSet& s) {
  Rep in = EPSetBuilder::rep_of(s);
  Rep out;
  out.g = in.g;
  out.lo = -in.hi;
  out.hi = -in.lo;
  out.window = Bitmap(in.window.size());
  const std::size_t n = in.window.size();
  in.window.for_each_set([&](std::size_t i) { out.window.set(n - 1 - i); });
  out.neg = Bitmap(static_cast<std::size_t>(in.g));
  out.pos = Bitmap(static_cast<std::size_t>(in.g));
  for (Int c = 0; c < in.g; ++c) {
    const auto mirrored = static_cast<std::size_t>(floor_mod(-c, in.g));
    out.neg.assign(static_cast<std::size_t>(c), in.pos.test(mirrored));
    out.pos.assign(static_cast<std::size_t>(c), in.neg.test(mirrored));
  }
  // An empty window sits at hi + 1 (or at 0 when fully periodic), which the mirror does not preserve.
  if (n == 0) return EPSetBuilder::canonical(std::move(out), default_limits());
  return EPSetBuilder::from_canonical_rep(std::move(out));
}

EPSet translate(const EPSet& s, Int c) {
  Rep in = EPSetBuilder::rep_of(s);
  if (s.is_fully_periodic()) {
    Rep out = in;
    for (Int r = 0; r < in.g; ++r) {
      const auto to = static_cast<std::size_t>(floor_mod(r + c, in.g));
      out.neg.assign(to, in.neg.test(static_cast<std::size_t>(r)));
      out.pos.assign(to, in.pos.test(static_cast<std::size_t>(r)));
    }
    return EPSetBuilder::from_canonical_rep(std::move(out));
  }
  Rep out = in;
  out.lo = checked_add(in.lo, c);
  out.hi = checked_add(in.hi, c);
  for (Int r = 0; r < in.g; ++r) {
    const auto to = static_cast<std::size_t>(floor_mod(r + c, in.g));
    out.neg.assign(to, in.neg.test(static_cast<std::size_t>(r)));
    out.pos.assign(to, in.pos.test(static_cast<std::size_t>(r)));
  }
  return EPSetBuilder::from_canonical_rep(std::move(out));
}

EPSet dilate(const EPSet& s, Int n, const Limits& limits) {
  if (n == 0) throw PreconditionError("dilation factor must be nonzero");
  if (n < 0) return dilate(negate(s), checked_mul(n, -1), limits);
  if (n == 1) return s;
  const Rep in = EPSetBuilder::rep_of(s);
  Rep out;
  out.g = checked_mul(in.g, n);
  check_period(out.g, limits);
  out.lo = checked_mul(in.lo, n);
  if (in.window.empty()) {
    out.hi = out.lo - 1;
  } else {
    out.hi = checked_mul(in.hi, n);
    out.window = Bitmap(window_length(out.lo, out.hi, limits));
    in.window.for_each_set([&](std::size_t i) { out.window.set(i * static_cast<std::size_t>(n)); });
  }
  out.neg = Bitmap(static_cast<std::size_t>(out.g));
  out.pos = Bitmap(static_cast<std::size_t>(out.g));
  in.neg.for_each_set([&](std::size_t r) { out.neg.set(r * static_cast<std::size_t>(n)); });
  in.pos.for_each_set([&](std::size_t r) { out.pos.set(r * static_cast<std::size_t>(n)); });
  return EPSetBuilder::canonical(std::move(out), limits);
}

EPSet set_union(const EPSet& s, const EPSet& t, const Limits& limits) {
  const Int big = lcm(s.period(), t.period());
  check_period(big, limits);
  Rep out;
  out.g = big;
  out.lo = std::min(s.lo(), t.lo());
  out.hi = std::max(s.hi(), t.hi());
  out.window = Bitmap(window_length(out.lo, out.hi, limits));
  for (Int x = out.lo; x <= out.hi; ++x)
    if (s.contains(x) || t.contains(x)) out.window.set(static_cast<std::size_t>(x - out.lo));
  const Bitmap sn = lift_mask(s.neg_mask(), s.period(), big), tn = lift_mask(t.neg_mask(), t.period(), big);
  const Bitmap sp = lift_mask(s.pos_mask(), s.period(), big), tp = lift_mask(t.pos_mask(), t.period(), big);
  out.neg = Bitmap(static_cast<std::size_t>(big));
  out.pos = Bitmap(static_cast<std::size_t>(big));
  for (std::size_t c = 0; c < static_cast<std::size_t>(big); ++c) {
    out.neg.assign(c, sn.test(c) || tn.test(c));
    out.pos.assign(c, sp.test(c) || tp.test(c));
  }
  return EPSetBuilder::canonical(std::move(out), limits);
}

EPSet restrict_nonnegative(const EPSet& s, const Limits& limits) {
  Rep out;
  out.g = s.period();
  out.lo = 0;
  out.hi = std::max<Int>(s.hi(), -1);
  out.window = Bitmap(window_length(out.lo, out.hi, limits));
  for (Int x = 0; x <= out.hi; ++x)
    if (s.contains(x)) out.window.set(static_cast<std::size_t>(x));
  out.neg = Bitmap(static_cast<std::size_t>(s.period()));
  out.pos = s.pos_mask();
  return EPSetBuilder::canonical(std::move(out), limits);
}

namespace {

// A set split into its finite window and its two one-sided periodic parts,
// the latter described by per-class thresholds modulo a common modulus.
struct Profile {
  Int modulus = 1;
  std::vector<Int> up;    // least member of the upward part in each class, kPosInf if none
  std::vector<Int> down;  // greatest member of the downward part in each class, kNegInf if none
  std::vector<std::size_t> up_active;
  std::vector<std::size_t> down_active;
  Int lo = 0;  // window offset
  Bitmap window;
};

Profile profile_of(const EPSet& s, Int big) {
  Profile p;
  p.modulus = big;
  p.up.assign(static_cast<std::size_t>(big), kPosInf);
  p.down.assign(static_cast<std::size_t>(big), kNegInf);
  const Int g = s.period();
  for (Int c : s.pos_tail()) {
    const Int first = (s.hi() + 1) + floor_mod(c - (s.hi() + 1), g);
    for (Int k = 0; k < big / g; ++k) {
      const Int v = first + k * g;
      const auto cls = static_cast<std::size_t>(floor_mod(v, big));
      p.up[cls] = v;
      p.up_active.push_back(cls);
    }
  }
  for (Int c : s.neg_tail()) {
    const Int last = (s.lo() - 1) - floor_mod((s.lo() - 1) - c, g);
    for (Int k = 0; k < big / g; ++k) {
      const Int v = last - k * g;
      const auto cls = static_cast<std::size_t>(floor_mod(v, big));
      p.down[cls] = v;
      p.down_active.push_back(cls);
    }
  }
  std::sort(p.up_active.begin(), p.up_active.end());
  std::sort(p.down_active.begin(), p.down_active.end());
  p.lo = s.lo();
  p.window = s.window();
  return p;
}

// Least and greatest window member in each class modulo `big`.
struct ClassExtremes {
  std::vector<Int> min, max;
  std::vector<std::size_t> active;
};

ClassExtremes window_extremes(const Profile& p) {
  ClassExtremes e;
  const auto big = static_cast<std::size_t>(p.modulus);
  e.min.assign(big, kPosInf);
  e.max.assign(big, kNegInf);
  p.window.for_each_set([&](std::size_t i) {
    const Int x = p.lo + static_cast<Int>(i);
    const auto cls = static_cast<std::size_t>(floor_mod(x, p.modulus));
    if (e.min[cls] == kPosInf) e.active.push_back(cls);
    e.min[cls] = std::min(e.min[cls], x);
    e.max[cls] = std::max(e.max[cls], x);
  });
  std::sort(e.active.begin(), e.active.end());
  return e;
}

}  // namespace

EPSet minkowski_sum(const EPSet& s, const EPSet& t, const Limits& limits) {
  if (s.is_empty() || t.is_empty()) return EPSet();
  const Int big = lcm(s.period(), t.period());
  check_period(big, limits);
  const auto G = static_cast<std::size_t>(big);
  const Profile ps = profile_of(s, big);
  const Profile pt = profile_of(t, big);
  const ClassExtremes es = window_extremes(ps);
  const ClassExtremes et = window_extremes(pt);

  std::vector<Int> up(G, kPosInf), down(G, kNegInf);
  std::vector<char> full(G, 0);
  auto relax_up = [&](std::size_t c1, std::size_t c2, Int v) {
    auto& slot = up[(c1 + c2) % G];
    slot = std::min(slot, v);
  };
  auto relax_down = [&](std::size_t c1, std::size_t c2, Int v) {
    auto& slot = down[(c1 + c2) % G];
    slot = std::max(slot, v);
  };

  // Upward parts: each summand is closed under +big, so per-class minima suffice.
  for (auto c1 : ps.up_active)
    for (auto c2 : pt.up_active) relax_up(c1, c2, checked_add(ps.up[c1], pt.up[c2]));
  for (auto c1 : es.active)
    for (auto c2 : pt.up_active) relax_up(c1, c2, checked_add(es.min[c1], pt.up[c2]));
  for (auto c1 : ps.up_active)
    for (auto c2 : et.active) relax_up(c1, c2, checked_add(ps.up[c1], et.min[c2]));
  // Downward parts, symmetrically.
  for (auto c1 : ps.down_active)
    for (auto c2 : pt.down_active) relax_down(c1, c2, checked_add(ps.down[c1], pt.down[c2]));
  for (auto c1 : es.active)
    for (auto c2 : pt.down_active) relax_down(c1, c2, checked_add(es.max[c1], pt.down[c2]));
  for (auto c1 : ps.down_active)
    for (auto c2 : et.active) relax_down(c1, c2, checked_add(ps.down[c1], et.max[c2]));
  // Opposite tails meet in full residue classes.
  for (auto c1 : ps.up_active)
    for (auto c2 : pt.down_active) full[(c1 + c2) % G] = 1;
  for (auto c1 : ps.down_active)
    for (auto c2 : pt.up_active) full[(c1 + c2) % G] = 1;

  // Finite part: window + window.
  Bitmap finite;
  Int finite_lo = 0;
  const bool has_finite = !ps.window.none() && !pt.window.none();
  if (has_finite) {
    finite_lo = ps.lo + pt.lo;
    const std::size_t len = ps.window.size() + pt.window.size() - 1;
    if (len > limits.window_cap)
      throw ResourceLimitError("window of length " + std::to_string(len) + " exceeds cap " +
                               std::to_string(limits.window_cap));
    finite = Bitmap(len);
    const bool s_sparser = ps.window.count() <= pt.window.count();
    const Bitmap& iter = s_sparser ? ps.window : pt.window;
    const Bitmap& shifted = s_sparser ? pt.window : ps.window;
    iter.for_each_set([&](std::size_t i) { finite.or_shifted(shifted, i); });
  }

  // Assemble: the window must cover the finite part and every threshold transition.
  Int lo = kPosInf, hi = kNegInf;
  if (has_finite && !finite.none()) {
    lo = finite_lo;
    hi = finite_lo + static_cast<Int>(finite.size()) - 1;
  }
  for (std::size_t c = 0; c < G; ++c) {
    if (full[c]) continue;
    if (up[c] != kPosInf) {
      lo = std::min(lo, up[c]);
      hi = std::max(hi, up[c] - 1);
    }
    if (down[c] != kNegInf) {
      lo = std::min(lo, down[c] + 1);
      hi = std::max(hi, down[c]);
    }
  }
  Rep out;
  out.g = big;
  out.neg = Bitmap(G);
  out.pos = Bitmap(G);
  for (std::size_t c = 0; c < G; ++c) {
    out.pos.assign(c, full[c] || up[c] != kPosInf);
    out.neg.assign(c, full[c] || down[c] != kNegInf);
  }
  if (lo == kPosInf) {
    out.lo = 0;
    out.hi = -1;
    return EPSetBuilder::canonical(std::move(out), limits);
  }
  out.lo = lo;
  out.hi = hi;
  out.window = Bitmap(window_length(lo, hi, limits));
  if (has_finite) {
    // finite part lies inside [lo, hi] by construction
    Bitmap placed(out.window.size());
    placed.or_shifted(finite, static_cast<std::size_t>(finite_lo - lo));
    out.window = std::move(placed);
  }
  for (std::size_t c = 0; c < G; ++c) {
    const Int first_in_window = lo + floor_mod(static_cast<Int>(c) - lo, big);
    if (full[c]) {
      for (Int x = first_in_window; x <= hi; x += big) out.window.set(static_cast<std::size_t>(x - lo));
      continue;
    }
    if (up[c] != kPosInf)
      for (Int x = std::max(first_in_window, up[c]); x <= hi; x += big) out.window.set(static_cast<std::size_t>(x - lo));
    if (down[c] != kNegInf)
      for (Int x = first_in_window; x <= std::min(hi, down[c]); x += big) out.window.set(static_cast<std::size_t>(x - lo));
  }
  return EPSetBuilder::canonical(std::move(out), limits);
}

EPSet sumset_power(const EPSet& s, int k, const Limits& limits) {
  if (k < 1) throw PreconditionError("sumset power needs k >= 1");
  EPSet acc = s;
  for (int i = 1; i < k; ++i) acc = minkowski_sum(acc, s, limits);
  return acc;
}

bool is_subset(const EPSet& s, const EPSet& t) { return set_union(s, t) == t; }

bool is_fully_periodic_mod(const EPSet& s, Int g) {
  if (g < 1) throw PreconditionError("modulus must be positive");
  return translate(s, g) == s;
}

bool is_semi_periodic_mod(const EPSet& s, Int g) {
  if (g < 1) throw PreconditionError("modulus must be positive");
  return is_subset(translate(s, g), s);
}

Rational upper_density(const EPSet& s) {
  return Rational(static_cast<Int>(s.pos_mask().count()), s.period());
}

GapResult max_gap(const EPSet& s, std::optional<Int> from, std::optional<Int> to) {
  GapResult r;
  const Int g = s.period();
  Int start;
  if (from) {
    start = *from;
  } else {
    start = s.bounded_below() ? s.lo() : s.lo() - 2 * g;
  }
  Int end;
  if (to) {
    end = *to;
  } else {
    end = std::max(start, s.hi()) + 2 * g;
    if (s.pos_mask().none()) r.unbounded = true;
  }
  std::optional<Int> prev;
  for (Int x = start; x <= end; ++x) {
    if (!s.contains(x)) continue;
    ++r.members_seen;
    if (prev) r.value = std::max(r.value, x - *prev);
    prev = x;
  }
  return r;
}

}  // namespace linstab
