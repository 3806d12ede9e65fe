#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linstab/analysis.hpp"
#include "linstab/cli.hpp"
#include "linstab/parse.hpp"
#include "linstab/residue.hpp"
#include "linstab/stability.hpp"

namespace py = pybind11;
using namespace linstab;

namespace {

EPSet as_set(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_epset(h.cast<std::string>());
  return h.cast<EPSet>();
}

OpSequence as_ops(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_ops(h.cast<std::string>());
  return h.cast<OpSequence>();
}

ResidueSet as_residue(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return parse_residue_set(h.cast<std::string>());
  return h.cast<ResidueSet>();
}

py::object fraction(const Rational& q) {
  return py::module_::import("fractions").attr("Fraction")(q.numerator(), q.denominator());
}

py::object big(const BigInt& v) { return py::int_(py::str(v.str())); }

py::object cycle(const std::optional<Cycle>& c) {
  if (!c) return py::none();
  return py::make_tuple(c->onset, c->length);
}

}  // namespace

PYBIND11_MODULE(_linstab, m) {
  m.doc() = "Exact iteration of X -> aX - bX on eventually periodic integer sets";

  // Translators run most recent first, so the base class goes first.
  auto base = py::register_exception<Error>(m, "LinstabError", PyExc_RuntimeError);
  py::register_exception<SyntaxError>(m, "ParseSyntaxError", base.ptr());
  py::register_exception<SemanticError>(m, "ParseSemanticError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());

  py::class_<EPSet>(m, "EPSet")
      .def(py::init<>())
      .def(py::init([](const std::string& text) { return parse_epset(text); }), py::arg("text"))
      .def_static("empty", &EPSet::empty)
      .def_static("integers", &EPSet::integers)
      .def_static("naturals", &EPSet::naturals)
      .def_static("finite", [](const std::vector<Int>& xs) { return EPSet::finite(xs); })
      .def_static("progression", &EPSet::progression, py::arg("r"), py::arg("g"))
      .def_static("up_progression", &EPSet::up_progression, py::arg("r"), py::arg("g"), py::arg("n0"))
      .def_static("down_progression", &EPSet::down_progression, py::arg("r"), py::arg("g"), py::arg("n1"))
      .def_property_readonly("period", &EPSet::period)
      .def_property_readonly("lo", &EPSet::lo)
      .def_property_readonly("hi", &EPSet::hi)
      .def("contains", &EPSet::contains)
      .def("__contains__", &EPSet::contains)
      .def("elements_in", &EPSet::elements_in, py::arg("start"), py::arg("stop"))
      .def("is_empty", &EPSet::is_empty)
      .def("is_finite", &EPSet::is_finite)
      .def("is_fully_periodic", &EPSet::is_fully_periodic)
      .def("__eq__", [](const EPSet& s, const EPSet& t) { return s == t; })
      .def("__hash__", &EPSet::hash)
      .def("__str__", &EPSet::to_string)
      .def("__repr__", [](const EPSet& s) { return "EPSet('" + s.to_string() + "')"; });

  py::class_<OpSequence>(m, "OpSequence")
      .def(py::init([](const std::string& text) { return parse_ops(text); }), py::arg("text"))
      .def_property_readonly("cyclic", [](const OpSequence& s) { return s.cyclic; })
      .def_property_readonly("bound", [](const OpSequence& s) { return s.bound; })
      .def_property_readonly("ops", [](const OpSequence& s) {
        py::list out;
        for (const auto& op : s.ops) out.append(py::make_tuple(op.a, op.b));
        return out;
      })
      .def("__len__", &OpSequence::size)
      .def("__eq__", [](const OpSequence& s, const OpSequence& t) { return s == t; })
      .def("__str__", &OpSequence::to_string);

  py::class_<ResidueSet>(m, "ResidueSet")
      .def(py::init<Int, std::vector<Int>>(), py::arg("modulus"), py::arg("elements"))
      .def_property_readonly("modulus", &ResidueSet::modulus)
      .def("elements", &ResidueSet::elements)
      .def("__len__", &ResidueSet::size)
      .def("__eq__", [](const ResidueSet& s, const ResidueSet& t) { return s == t; })
      .def("__str__", &ResidueSet::to_string);

  m.def("parse_set", [](const std::string& text) { return parse_epset(text); }, py::arg("text"));
  m.def("parse_ops", &parse_ops, py::arg("text"));
  m.def("parse_residue_set", &parse_residue_set, py::arg("text"));

  m.def(
      "apply", [](Int a, Int b, py::handle s) { return apply_linear_op(LinearOp(a, b), as_set(s)); }, py::arg("a"),
      py::arg("b"), py::arg("set"));
  m.def(
      "apply_composition",
      [](py::handle ops, py::handle s, std::optional<std::size_t> steps) {
        return apply_composition(as_ops(ops), as_set(s), steps);
      },
      py::arg("ops"), py::arg("set"), py::arg("steps") = py::none());
  m.def("minkowski_sum", [](py::handle s, py::handle t) { return minkowski_sum(as_set(s), as_set(t)); });
  m.def("dilate", [](py::handle s, Int n) { return dilate(as_set(s), n); });
  m.def("negate", [](py::handle s) { return negate(as_set(s)); });
  m.def("translate", [](py::handle s, Int c) { return translate(as_set(s), c); });
  m.def("union", [](py::handle s, py::handle t) { return set_union(as_set(s), as_set(t)); });
  m.def("upper_density", [](py::handle s) { return fraction(upper_density(as_set(s))); });
  m.def("dplus", [](py::handle s) { return dplus(as_set(s)); });

  m.def(
      "iterate",
      [](py::handle s, py::handle ops, std::optional<std::size_t> max_k) {
        const OpSequence seq = as_ops(ops);
        const std::size_t k = max_k.value_or(seq.cyclic ? 50 : seq.size());
        const IterationTrace t = iterate_trace(as_set(s), seq, k);
        py::dict out;
        out["iterates"] = t.iterates;
        out["distinct_count"] = t.distinct_count;
        out["cycle"] = cycle(t.cycle);
        out["recurrence"] = cycle(t.recurrence);
        out["periodicity_onset"] =
            t.periodicity_onset ? py::object(py::make_tuple(t.periodicity_onset->k0, t.periodicity_onset->g))
                                : py::object(py::none());
        out["resource_flag"] = t.resource_flag;
        return out;
      },
      py::arg("set"), py::arg("ops"), py::arg("max_k") = py::none());

  m.def(
      "verify_thm61",
      [](py::handle s, py::handle ops, Int L, const std::string& c, std::size_t max_steps) {
        Theorem61Options options;
        options.max_steps = max_steps;
        const Theorem61Report r = theorem61_verify(as_set(s), as_ops(ops), L, parse_rational(c), default_limits(), options);
        py::dict out;
        out["verdict"] = to_string(r.verdict);
        out["beta"] = fraction(r.beta);
        out["K"] = r.K;
        out["g_bound"] = big(r.g_bound);
        out["observed_k0"] = r.observed_k0;
        out["observed_g"] = r.observed_g;
        out["g_at_K"] = r.g_at_K;
        out["distinct_count"] = r.distinct_count;
        out["bound"] = r.bound ? big(*r.bound) : py::object(py::none());
        out["horizon"] = r.horizon;
        out["periodic_part"] = r.periodic_part;
        out["stable_part"] = r.stable_part;
        out["resource_flag"] = r.resource_flag;
        return out;
      },
      py::arg("set"), py::arg("ops"), py::arg("L"), py::arg("c") = "10", py::arg("max_steps") = 200000);

  m.def(
      "decompose",
      [](py::handle u, Int a, Int b) {
        const ResidueSet rs = as_residue(u);
        const DecompositionResult res = decompose_equality_case(rs, a, b);
        py::dict out;
        if (const auto* c = std::get_if<DecompositionCertificate>(&res)) {
          out["status"] = "certificate";
          out["translation"] = c->translation;
          out["a1"] = c->a1;
          out["b1"] = c->b1;
          out["V"] = c->v.elements();
          out["X"] = c->x.elements();
          out["h_step"] = c->h_step;
          out["verified"] = c->verify(rs, a, b);
        } else {
          const auto& f = std::get<DecompositionFailure>(res);
          out["status"] = "hypothesis-failed";
          out["hypothesis"] = f.hypothesis;
          out["detail"] = f.detail;
        }
        return out;
      },
      py::arg("u"), py::arg("a"), py::arg("b"));

  m.def(
      "run",
      [](const std::string& command, const std::string& set, const std::string& ops,
         const std::map<std::string, std::string>& params, const std::string& format, unsigned threads) {
        ExperimentConfig config;
        config.command = command;
        config.set_expr = set;
        config.ops_expr = ops;
        config.params = params;
        config.format = format;
        config.threads = threads;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = linstab::run(config);
        }
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("command"), py::arg("set") = "", py::arg("ops") = "", py::arg("params") = std::map<std::string, std::string>{},
      py::arg("format") = "json", py::arg("threads") = 1);
}
