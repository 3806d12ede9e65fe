#include "linstab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "linstab/analysis.hpp"
#include "linstab/constructions.hpp"
#include "linstab/parse.hpp"
#include "linstab/residue.hpp"
#include "linstab/stability.hpp"

namespace linstab {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  json body;
  Table table;
  int exit_code = kExitPass;
};

std::string rational_text(const Rational& q) { return to_string(q); }

json optional_int(const std::optional<Int>& v) { return v ? json(*v) : json(nullptr); }

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) > 0; }

  const std::string& text(const std::string& key) const {
    auto it = p_.find(key);
    if (it == p_.end()) throw UsageError("missing parameter --" + key);
    return it->second;
  }

  Int integer(const std::string& key) const {
    const std::string& s = text(key);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("parameter --" + key + " must be an integer, got '" + s + "'");
    }
  }

  Int integer(const std::string& key, Int fallback) const { return has(key) ? integer(key) : fallback; }

  Int positive(const std::string& key, Int fallback) const {
    const Int v = integer(key, fallback);
    if (v < 1) throw UsageError("parameter --" + key + " must be positive");
    return v;
  }

  Rational rational(const std::string& key, const Rational& fallback) const {
    return has(key) ? parse_rational(text(key)) : fallback;
  }

 private:
  const std::map<std::string, std::string>& p_;
};

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return kExitPass;
    case Verdict::Fail:
      return kExitFail;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

EPSet require_set(const ExperimentConfig& c, const Limits& limits) {
  if (c.set_expr.empty()) throw UsageError("missing --set");
  const SetValue v = parse_set_expression(c.set_expr, limits);
  if (const auto* t = std::get_if<TruncatedSet>(&v)) return t->as_epset();
  return std::get<EPSet>(v);
}

OpSequence require_ops(const ExperimentConfig& c) {
  if (c.ops_expr.empty()) throw UsageError("missing --ops");
  return parse_ops(c.ops_expr);
}

json trace_json(const IterationTrace& t) {
  json j;
  json its = json::array();
  for (const auto& x : t.iterates) its.push_back(x.to_string());
  j["iterates"] = its;
  j["distinct_count"] = t.distinct_count;
  j["t_stability"] = t_stability_count(t);
  j["cycle"] = t.cycle ? json{{"onset", t.cycle->onset}, {"length", t.cycle->length}} : json(nullptr);
  j["recurrence"] =
      t.recurrence ? json{{"onset", t.recurrence->onset}, {"length", t.recurrence->length}} : json(nullptr);
  j["periodicity_onset"] =
      t.periodicity_onset ? json{{"k0", t.periodicity_onset->k0}, {"g", t.periodicity_onset->g}} : json(nullptr);
  j["resource_flag"] = t.resource_flag ? json(*t.resource_flag) : json(nullptr);
  return j;
}

json theorem61_json(const Theorem61Report& r) {
  json j;
  j["beta"] = rational_text(r.beta);
  j["K"] = r.K;
  j["g_bound"] = r.g_bound.str();
  j["observed_k0"] = r.observed_k0 ? json(*r.observed_k0) : json(nullptr);
  j["observed_g"] = optional_int(r.observed_g);
  j["distinct_count"] = r.distinct_count;
  j["bound"] = r.bound ? json(r.bound->str()) : json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["resource_flag"] = r.resource_flag ? json(*r.resource_flag) : json(nullptr);
  j["L"] = r.L;
  j["c"] = rational_text(r.c);
  j["g_at_K"] = optional_int(r.g_at_K);
  j["empirical_K"] = r.observed_k0 ? json(*r.observed_k0) : json(nullptr);
  j["horizon"] = r.horizon;
  j["traced_steps"] = r.traced_steps;
  j["closed"] = r.closed;
  j["periodic_part"] = r.periodic_part;
  j["stable_part"] = r.stable_part;
  return j;
}

const std::vector<std::string> kVerifierColumns = {"beta", "K", "g_bound", "observed_k0", "observed_g",
                                                "distinct_count", "bound", "verdict", "resource_flag"};

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<std::string> thm61_row(const json& j) {
  std::vector<std::string> row;
  for (const auto& k : kVerifierColumns) row.push_back(cell(j[k]));
  return row;
}

Report cmd_iterate(const ExperimentConfig& c, const Limits& limits) {
  const Params p(c.params);
  const EPSet s = require_set(c, limits);
  const OpSequence seq = require_ops(c);
  const auto fallback = static_cast<Int>(seq.cyclic ? 50 : seq.size());
  const auto max_k = static_cast<std::size_t>(p.integer("max_k", fallback));
  const IterationTrace t = iterate_trace(s, seq, max_k, limits);
  Report r;
  r.body["input"] = s.to_string();
  r.body["ops"] = seq.to_string();
  r.body["max_k"] = max_k;
  r.body.update(trace_json(t));
  r.table.header = {"k", "set", "distinct_so_far"};
  std::vector<EPSet> seen;
  for (std::size_t k = 0; k < t.iterates.size(); ++k) {
    if (std::find(seen.begin(), seen.end(), t.iterates[k]) == seen.end()) seen.push_back(t.iterates[k]);
    r.table.rows.push_back({std::to_string(k), t.iterates[k].to_string(), std::to_string(seen.size())});
  }
  r.exit_code = t.complete() ? kExitPass : kExitInconclusive;
  return r;
}

ResidueSet require_residue(const ExperimentConfig& c, const Params& p) {
  if (c.set_expr.empty()) throw UsageError("missing --set");
  ResidueSet u = parse_residue_set(c.set_expr);
  if (p.has("g") && p.integer("g") != u.modulus()) throw UsageError("--g disagrees with the modulus in --set");
  return u;
}

std::pair<Int, Int> coprime_pair(const Params& p) {
  const Int a = p.positive("a", p.integer("a"));
  const Int b = p.positive("b", p.integer("b"));
  if (gcd(a, b) != 1) throw UsageError("--a and --b must be coprime");
  return {a, b};
}

Report cmd_residue(const ExperimentConfig& c, const Limits&) {
  const Params p(c.params);
  const ResidueSet u = require_residue(c, p);
  const auto [a, b] = coprime_pair(p);
  const CardinalityCheck check = cardinality_check(u, a, b);
  const ResidueOrbit orbit = residue_orbit(u, a, b, static_cast<std::size_t>(p.positive("max_k", 1000)));
  Report r;
  r.body["set"] = u.to_string();
  r.body["a"] = a;
  r.body["b"] = b;
  r.body["size"] = check.size;
  r.body["image"] = gamma_mod(u, a, b).to_string();
  r.body["image_size"] = check.image_size;
  r.body["cardinality_holds"] = check.holds;
  r.body["equality"] = check.image_size == check.size;
  r.body["period"] = period(u).to_string();
  r.body["image_period"] = period(gamma_mod(u, a, b)).to_string();
  json its = json::array();
  for (const auto& x : orbit.iterates) its.push_back(x.to_string());
  r.body["orbit"] = {{"iterates", its},
                     {"onset", orbit.onset},
                     {"length", orbit.length},
                     {"cardinality_preserved", orbit.cardinality_preserved},
                     {"phi_product", orbit.phi_product},
                     {"length_divides_phi",
                      orbit.length_divides_phi ? json(*orbit.length_divides_phi) : json(nullptr)}};
  r.table.header = {"k", "set", "size"};
  for (std::size_t k = 0; k < orbit.iterates.size(); ++k)
    r.table.rows.push_back({std::to_string(k), orbit.iterates[k].to_string(), std::to_string(orbit.iterates[k].size())});
  r.exit_code = check.holds ? kExitPass : kExitFail;
  return r;
}

Report cmd_decompose(const ExperimentConfig& c, const Limits&) {
  const Params p(c.params);
  const ResidueSet u = require_residue(c, p);
  const auto [a, b] = coprime_pair(p);
  const DecompositionResult result = decompose_equality_case(u, a, b);
  Report r;
  r.body["set"] = u.to_string();
  r.body["a"] = a;
  r.body["b"] = b;
  if (const auto* cert = std::get_if<DecompositionCertificate>(&result)) {
    const bool ok = cert->verify(u, a, b);
    r.body["status"] = ok ? "certificate" : "invalid-certificate";
    r.body["certificate"] = {{"modulus", cert->modulus}, {"translation", cert->translation},
                             {"a1", cert->a1},           {"b1", cert->b1},
                             {"V", cert->v.to_string()}, {"X", cert->x.to_string()},
                             {"H", cert->h().to_string()}, {"verified", ok}};
    r.table.header = {"field", "value"};
    for (const auto& [k, v] : r.body["certificate"].items()) r.table.rows.push_back({k, cell(v)});
    r.exit_code = ok ? kExitPass : kExitFail;
  } else {
    const auto& f = std::get<DecompositionFailure>(result);
    r.body["status"] = "hypothesis-failed";
    r.body["hypothesis"] = f.hypothesis;
    r.body["detail"] = f.detail;
    r.table.header = {"field", "value"};
    r.table.rows = {{"hypothesis", f.hypothesis}, {"detail", f.detail}};
    r.exit_code = kExitFail;
  }
  return r;
}

Report cmd_dplus(const ExperimentConfig& c, const Limits& limits) {
  const Params p(c.params);
  const EPSet a = require_set(c, limits);
  if (!(restrict_nonnegative(a, limits) == a))
    throw UsageError("the D+ iteration needs a subset of N");
  const Int max_k = p.positive("max_k", 64);
  const StabilityTime st = stability_time(a, max_k, limits);
  const Rational d = upper_density(a);
  Report r;
  r.body["input"] = a.to_string();
  r.body["density"] = rational_text(d);
  r.body["T"] = optional_int(st.t);
  json its = json::array();
  for (const auto& x : st.iterates) its.push_back(x.to_string());
  r.body["iterates"] = its;
  bool ok = true;
  if (d > 0 && d <= Rational(1, 2) && st.t) {
    const StabilityBounds bounds = stability_bounds(d);
    const bool st_ok = bounds.stewart_tijdeman.admits(*st.t);
    const bool ru_ok = bounds.ruzsa.admits(*st.t);
    r.body["bounds"] = {{"stewart_tijdeman", bounds.stewart_tijdeman.to_string()},
                        {"stewart_tijdeman_holds", st_ok},
                        {"ruzsa", bounds.ruzsa.to_string()},
                        {"ruzsa_holds", ru_ok}};
    ok = st_ok && ru_ok;
  } else if (d > Rational(1, 2) && st.t) {
    const bool holds = *st.t <= 1 && st.iterates.back() == EPSet::naturals();
    r.body["bounds"] = {{"dense_case", "T <= 1 and D+ = N"}, {"dense_case_holds", holds}};
    ok = holds;
  } else {
    r.body["bounds"] = nullptr;
  }
  r.table.header = {"k", "set"};
  for (std::size_t k = 0; k < st.iterates.size(); ++k)
    r.table.rows.push_back({std::to_string(k), st.iterates[k].to_string()});
  r.exit_code = !st.t ? kExitInconclusive : (ok ? kExitPass : kExitFail);
  return r;
}

Theorem61Options thm61_options(const Params& p) {
  Theorem61Options o;
  o.max_steps = static_cast<std::size_t>(p.positive("max_steps", static_cast<Int>(o.max_steps)));
  return o;
}

Report cmd_verify(const ExperimentConfig& c, const Limits& limits) {
  const Params p(c.params);
  const EPSet a = require_set(c, limits);
  const OpSequence seq = require_ops(c);
  const Int L = p.integer("L", std::max<Int>(2, seq.max_entry()));
  const Rational cc = p.rational("c", Rational(10));
  const Theorem61Report t = theorem61_verify(a, seq, L, cc, limits, thm61_options(p));
  Report r;
  r.body["input"] = a.to_string();
  r.body["ops"] = seq.to_string();
  r.body.update(theorem61_json(t));
  r.table.header = kVerifierColumns;
  r.table.rows.push_back(thm61_row(r.body));
  r.exit_code = verdict_exit(t.verdict);
  return r;
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw UsageError("--bits must be a string of 0 and 1");
    bits.push_back(ch - '0');
  }
  return bits;
}

Report cmd_construct(const ExperimentConfig& c, const Limits& limits) {
  const Params p(c.params);
  const std::string& kind = p.text("kind");
  Report r;
  r.body["kind"] = kind;
  if (kind == "ap") {
    const auto [a, b] = coprime_pair(p);
    const ApCounterexample ex = ap_counterexample(a, b);
    const ApOrbitCheck chk = check_ap_counterexample(a, b, p.positive("steps", 2 * ex.cycle_length), limits);
    r.body["a"] = a;
    r.body["b"] = b;
    r.body["initial"] = ex.initial.to_string();
    r.body["modulus"] = ex.modulus;
    r.body["cycle_length"] = ex.cycle_length;
    r.body["predicted_stable"] = ex.stable;
    r.body["steps"] = chk.steps;
    r.body["matches"] = chk.matches;
    r.body["observed_stable"] = chk.observed_stable;
    r.table.header = {"k", "predicted"};
    for (Int k = 1; k <= chk.steps; ++k) r.table.rows.push_back({std::to_string(k), ex.predicted(k).to_string()});
    r.exit_code = chk.matches && chk.observed_stable == ex.stable ? kExitPass : kExitFail;
  } else if (kind == "scaled") {
    const Int d = p.positive("d", 2);
    const auto [a, b] = coprime_pair(p);
    const ScaledDivergenceReport s = scaled_divergence(d, a, b, p.positive("steps", 6), limits);
    r.body["d"] = d;
    r.body["op"] = {s.op.a, s.op.b};
    json its = json::array();
    for (std::size_t k = 0; k < s.iterates.size(); ++k)
      its.push_back({{"k", k}, {"set", s.iterates[k].to_string()}, {"divisible", static_cast<bool>(s.divisible[k])},
                     {"min_nonzero_abs", s.min_nonzero_abs[k]}});
    r.body["iterates"] = its;
    r.body["pairwise_distinct"] = s.pairwise_distinct;
    r.body["holds"] = s.holds;
    r.table.header = {"k", "set", "divisible", "min_nonzero_abs"};
    for (const auto& e : its) r.table.rows.push_back({cell(e["k"]), cell(e["set"]), cell(e["divisible"]), cell(e["min_nonzero_abs"])});
    r.exit_code = s.holds ? kExitPass : kExitFail;
  } else if (kind == "bohr" || kind == "sparse") {
    if (c.set_expr.empty()) throw UsageError("missing --set");
    const SetValue v = parse_set_expression(c.set_expr, limits);
    const auto* t = std::get_if<TruncatedSet>(&v);
    if (!t) throw UsageError("--set must be a bohr(...) or sparse(...) construction");
    r.body["set"] = t->to_string();
    r.body["horizon"] = t->horizon;
    r.body["size"] = t->size();
    r.body["density"] = rational_text(Rational(t->count_up_to(t->horizon), std::max<Int>(1, t->horizon)));
    r.body["elements"] = t->elems;
    r.table.header = {"element"};
    for (Int x : t->elems) r.table.rows.push_back({std::to_string(x)});
  } else if (kind == "bohr-iterates") {
    const Surd alpha = parse_surd(p.text("alpha"));
    const OpSequence seq = require_ops(c);
    const BohrIteratesReport t = bohr_iterates_check(alpha, seq.ops, p.positive("N", 10000), limits);
    r.body["alpha"] = alpha.to_string();
    r.body["ops"] = seq.to_string();
    r.body["delta"] = rational_text(t.delta);
    r.body["N"] = t.base.horizon;
    std::ostringstream dens;
    dens.precision(6);
    dens << std::fixed << t.density;
    r.body["density"] = dens.str();
    json ws = json::array();
    for (const auto& w : t.witnesses)
      ws.push_back({{"later", w.later}, {"earlier", w.earlier}, {"element", w.element}, {"distance", w.distance},
                    {"bound", w.bound}});
    r.body["witnesses"] = ws;
    r.body["all_distinct"] = t.all_distinct;
    r.table.header = {"later", "earlier", "element", "distance", "bound"};
    for (const auto& w : ws)
      r.table.rows.push_back({cell(w["later"]), cell(w["earlier"]), cell(w["element"]), cell(w["distance"]), cell(w["bound"])});
    r.exit_code = t.all_distinct ? kExitPass : kExitFail;
  } else if (kind == "gaps") {
    const Int k = p.positive("k", 7);
    if (k > 15) throw UsageError("--k must be at most 15");
    const Rational delta = p.rational("delta", Rational(1, 5));
    const Int a = p.positive("a", 2), b = p.positive("b", 1);
    const GapGrowthReport g = sparse_gap_growth(self_power_sequence(k), delta, a, b, limits);
    r.body["delta"] = rational_text(delta);
    r.body["a"] = a;
    r.body["b"] = b;
    r.body["delta_below_threshold"] = g.delta_below_threshold;
    r.body["separated"] = g.separated;
    json es = json::array();
    for (const auto& e : g.entries)
      es.push_back({{"blocks", e.blocks}, {"exact_limit", e.exact_limit}, {"max_gap", optional_int(e.max_gap)},
                    {"right_end_density", rational_text(e.right_end_density)}});
    r.body["entries"] = es;
    r.body["strictly_increasing"] = g.strictly_increasing;
    r.table.header = {"blocks", "exact_limit", "max_gap", "right_end_density"};
    for (const auto& e : es)
      r.table.rows.push_back({cell(e["blocks"]), cell(e["exact_limit"]), cell(e["max_gap"]), cell(e["right_end_density"])});
    r.exit_code = g.strictly_increasing ? kExitPass : kExitFail;
  } else if (kind == "parity") {
    const ParityFlipCheck chk = check_parity_flip(parse_bits(p.text("bits")), limits);
    r.body["bits"] = p.text("bits");
    json its = json::array();
    for (const auto& x : chk.observed) its.push_back(x.to_string());
    r.body["observed"] = its;
    r.body["matches_prediction"] = chk.matches_prediction;
    r.body["literal_mismatches"] = chk.literal_mismatches;
    r.table.header = {"k", "observed", "predicted"};
    for (std::size_t k = 0; k < chk.observed.size(); ++k)
      r.table.rows.push_back({std::to_string(k), chk.observed[k].to_string(), chk.fixture.predicted[k].to_string()});
    r.exit_code = chk.matches_prediction ? kExitPass : kExitFail;
  } else {
    throw UsageError("unknown --kind '" + kind + "' (ap, scaled, bohr, sparse, bohr-iterates, gaps, parity)");
  }
  return r;
}

struct SweepCell {
  std::size_t set_index = 0;
  Int L = 0;
  NamedSequence seq;
};

Report cmd_sweep(const ExperimentConfig& c, const Limits& limits) {
  const Params p(c.params);
  const Int l_max = p.integer("L", 5);
  if (l_max < 2) throw UsageError("--L must be at least 2");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 2024));
  const Rational cc = p.rational("c", Rational(10));
  const Theorem61Options opts = thm61_options(p);
  const std::vector<EPSet> sets = stability_fixture_sets();
  std::vector<SweepCell> cells;
  for (Int L = 2; L <= l_max; ++L)
    for (const auto& ns : stability_fixture_sequences(L, seed))
      for (std::size_t i = 0; i < sets.size(); ++i) cells.push_back({i, L, ns});

  std::vector<json> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const SweepCell& cell_ = cells[i];
      json j;
      j["set"] = sets[cell_.set_index].to_string();
      j["L"] = cell_.L;
      j["kind"] = cell_.seq.kind;
      j["ops"] = cell_.seq.seq.to_string();
      j.update(theorem61_json(theorem61_verify(sets[cell_.set_index], cell_.seq.seq, cell_.L, cc, limits, opts)));
      results[i] = std::move(j);
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(c.threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t pass = 0, fail = 0, inconclusive = 0;
  Report r;
  r.table.header = {"set", "L", "kind", "ops"};
  r.table.header.insert(r.table.header.end(), kVerifierColumns.begin(), kVerifierColumns.end());
  for (const auto& j : results) {
    const std::string v = j["verdict"];
    pass += v == "PASS";
    fail += v == "FAIL";
    inconclusive += v == "INCONCLUSIVE";
    std::vector<std::string> row = {cell(j["set"]), cell(j["L"]), cell(j["kind"]), cell(j["ops"])};
    const auto rest = thm61_row(j);
    row.insert(row.end(), rest.begin(), rest.end());
    r.table.rows.push_back(std::move(row));
  }
  const std::size_t conclusive = pass + fail;
  r.body["c"] = rational_text(cc);
  r.body["seed"] = seed;
  r.body["cells"] = results;
  r.body["summary"] = {{"cells", cells.size()},
                       {"pass", pass},
                       {"fail", fail},
                       {"inconclusive", inconclusive},
                       {"conclusive_fraction", rational_text(Rational(static_cast<Int>(conclusive),
                                                                      static_cast<Int>(std::max<std::size_t>(1, cells.size()))))}};
  if (fail > 0) {
    r.exit_code = kExitFail;
  } else if (conclusive * 10 < cells.size() * 9) {
    r.exit_code = kExitInconclusive;
  }
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string render_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + csv_escape(xs[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
  return out;
}

void render_text(const json& j, const std::string& indent, std::string& out) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out += indent + k + ":\n";
      render_text(v, indent + "  ", out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out += indent + k + ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += indent + "  [" + std::to_string(i) + "]\n";
        render_text(v[i], indent + "    ", out);
      }
    } else {
      out += indent + k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
  }
}

using Handler = std::function<Report(const ExperimentConfig&, const Limits&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"iterate", cmd_iterate}, {"residue", cmd_residue},     {"decompose", cmd_decompose},
      {"dplus", cmd_dplus},     {"verify-thm61", cmd_verify}, {"construct", cmd_construct},
      {"sweep", cmd_sweep},
  };
  return h;
}

std::optional<Int> env_int(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == std::string(v).size() && x > 0) return x;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"iterate",      "residue",   "decompose", "dplus",
                                                 "verify-thm61", "construct", "sweep"};
  return names;
}

Limits limits_from_environment() {
  Limits l = default_limits();
  if (auto w = env_int("LINSTAB_WINDOW_CAP")) l.window_cap = static_cast<std::size_t>(*w);
  if (auto p = env_int("LINSTAB_PERIOD_CAP")) l.period_cap = *p;
  return l;
}

RunResult run(const ExperimentConfig& config, const Limits& limits) {
  RunResult res;
  json doc;
  doc["schema"] = 1;
  doc["command"] = config.command;
  Report report;
  try {
    if (config.format != "json" && config.format != "csv" && config.format != "text")
      throw UsageError("unknown format '" + config.format + "'");
    const auto it = handlers().find(config.command);
    if (it == handlers().end()) throw UsageError("unknown command '" + config.command + "'");
    report = it->second(config, limits);
  } catch (const UsageError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "usage"}, {"message", e.what()}};
    report.exit_code = kExitUsage;
  } catch (const SyntaxError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "syntax"}, {"message", e.what()}, {"position", e.position()}};
    report.exit_code = kExitUsage;
  } catch (const SemanticError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "semantic"}, {"message", e.what()}};
    report.exit_code = kExitUsage;
  } catch (const PreconditionError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "precondition"}, {"message", e.what()}};
    report.exit_code = kExitUsage;
  } catch (const ResourceLimitError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "resource"}, {"message", e.what()}};
    report.exit_code = kExitInconclusive;
  } catch (const OverflowError& e) {
    report = Report{};
    report.body["error"] = {{"kind", "resource"}, {"message", e.what()}};
    report.exit_code = kExitInconclusive;
  }
  doc["exit_code"] = report.exit_code;
  doc.update(report.body);
  res.exit_code = report.exit_code;
  if (config.format == "csv" && !report.table.header.empty()) {
    res.output = render_csv(report.table);
  } else if (config.format == "csv") {
    Table t{{"key", "value"}, {}};
    for (const auto& [k, v] : doc.items()) t.rows.push_back({k, cell(v)});
    res.output = render_csv(t);
  } else if (config.format == "text") {
    render_text(doc, "", res.output);
  } else {
    res.output = doc.dump(2) + "\n";
  }
  return res;
}

}  // namespace linstab
