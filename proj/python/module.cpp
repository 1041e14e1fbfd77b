// Python bindings for the core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metaproof/error.hpp"
#include "metaproof/kernel.hpp"
#include "metaproof/rule.hpp"
#include "metaproof/session.hpp"
#include "metaproof/syntax.hpp"
#include "metaproof/tactic.hpp"
#include "metaproof/theory.hpp"

namespace py = pybind11;
using namespace metaproof;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; theories are immutable, so
// the cast only serves the binding layer.
using PyTheory = std::shared_ptr<Theory>;
PyTheory out(const TheoryRef& t) { return std::const_pointer_cast<Theory>(t); }

std::string show(const TheoryRef& thy, const Term& t) { return print_term(SyntaxTable::of(*thy), t); }

Term parse(const TheoryRef& thy, const std::string& src, std::optional<Type> expected,
           const std::map<std::string, Type>& free_types) {
  ParseOptions opts;
  opts.expected = expected ? *expected : prop_type();
  opts.free_types = free_types;
  return parse_term(SyntaxTable::of(*thy), src, opts);
}

template <typename T>
std::vector<T> take(const Seq<T>& s, std::size_t limit) {
  return s.take(limit);
}

}  // namespace

PYBIND11_MODULE(_metaproof, m) {
  m.doc() = "Generic LCF-style prover for the meta-logic of higher-order implication and quantification.";

  static py::exception<Error> error_type(m, "MetaproofError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(py::str(e.what()));
      exc.attr("kind") = std::string(error_kind_name(e.kind()));
      exc.attr("offset") = e.has_offset() ? py::object(py::int_(e.offset())) : py::object(py::none());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Type>(m, "Type")
      .def_static("basic", &Type::basic)
      .def_static("fun", [](const Type& dom, const Type& cod) { return Type::fun(dom, cod); })
      .def_static("prop", &prop_type)
      .def("is_fun", &Type::is_fun)
      .def("__eq__", [](const Type& a, const Type& b) { return a == b; })
      .def("__str__", &print_type)
      .def("__repr__", [](const Type& t) { return "Type(" + print_type(t) + ")"; });

  py::class_<Term>(m, "Term")
      .def("type", [](const Term& t) { return type_of(t); })
      .def("is_var", &Term::is_var)
      .def("is_abs", &Term::is_abs)
      .def("is_app", &Term::is_app)
      .def("__eq__", [](const Term& a, const Term& b) { return aconv(a, b); })
      .def("__repr__", [](const Term& t) { return "<Term of type " + print_type(type_of(t)) + ">"; });

  m.def("aconv", &aconv);
  m.def("norm", &norm);
  m.def("max_index", &max_index);
  m.def("incr_indexes", &incr_indexes);

  py::class_<Theory, PyTheory>(m, "Theory")
      .def_property_readonly("name", &Theory::name)
      .def_property_readonly("parents", &Theory::parent_names)
      .def("axiom_names",
           [](const Theory& thy) {
             std::vector<std::string> out;
             for (const auto& a : thy.axioms()) out.push_back(a.name);
             return out;
           })
      .def("descends_from", &Theory::descends_from)
      .def("__repr__", [](const Theory& thy) { return "<Theory " + thy.name() + ">"; });

  m.def("builtin", [](const std::string& n) { return out(builtin(n)); }, py::arg("name"));
  m.def("parse_theory", [](const std::string& src) { return out(parse_theory(src)); }, py::arg("source"));
  m.def(
      "parse",
      [](const PyTheory& thy, const std::string& src, std::optional<Type> expected,
         const std::map<std::string, Type>& free_types) { return parse(thy, src, expected, free_types); },
      py::arg("thy"), py::arg("source"), py::arg("expected") = py::none(),
      py::arg("free_types") = std::map<std::string, Type>{});
  m.def("show", [](const PyTheory& thy, const Term& t) { return show(thy, t); }, py::arg("thy"), py::arg("term"));

  py::class_<Theorem>(m, "Theorem")
      .def_property_readonly("prop", &Theorem::prop)
      .def_property_readonly("hyps", &Theorem::hyps)
      .def_property_readonly("theory", [](const Theorem& th) { return out(th.theory()); })
      .def_property_readonly("rule_name", &Theorem::rule_name)
      .def_property_readonly("nflexflex", [](const Theorem& th) { return th.flexflex().size(); })
      .def("__str__", [](const Theorem& th) { return print_theorem(SyntaxTable::of(*th.theory()), th); })
      .def("__repr__", [](const Theorem& th) { return "<Theorem " + print_theorem(SyntaxTable::of(*th.theory()), th) + ">"; });

  m.def("axiom", [](const PyTheory& thy, const std::string& n) { return axiom(thy, n); }, py::arg("thy"), py::arg("name"));
  m.def("assume", [](const PyTheory& thy, const Term& t) { return assume(thy, t); }, py::arg("thy"), py::arg("prop"));
  m.def("trivial", [](const PyTheory& thy, const Term& t) { return trivial(thy, t); }, py::arg("thy"), py::arg("prop"));
  m.def("implies_intr", &implies_intr);
  m.def("implies_elim", &implies_elim);
  m.def("forall_intr", &forall_intr);
  m.def("forall_elim", &forall_elim);
  m.def("reflexive", [](const PyTheory& thy, const Term& t) { return reflexive(thy, t); });
  m.def("symmetric", &symmetric);
  m.def("transitive", &transitive);
  m.def("combination", &combination);
  m.def("equal_intr", &equal_intr);
  m.def("equal_elim", &equal_elim);
  m.def("beta_eta_conversion", [](const PyTheory& thy, const Term& t) { return beta_eta_conversion(thy, t); });
  m.def("varify", &varify);
  m.def("instantiate",
        [](const Theorem& th, const std::map<std::string, std::string>& inst) {
          // Replace ?name (index 0) by parsed text of the variable's type.
          SyntaxTable table = SyntaxTable::of(*th.theory());
          Subst s;
          for (const auto& [name, src] : inst) {
            bool found = false;
            for (const auto& v : vars_of(th.prop())) {
              if (v.name != name || v.index != 0) continue;
              ParseOptions po;
              po.expected = v.type;
              s.emplace(v, parse_term(table, src, po));
              found = true;
            }
            if (!found) fail(ErrorKind::BadCommand, "no schematic variable ?" + name);
          }
          return instantiate(s, th);
        },
        py::arg("thm"), py::arg("inst"));
  m.def("unfold_def", [](const Theorem& th, const std::string& c) { return unfold_def(*th.theory(), c, th); });
  m.def("fold_def", [](const Theorem& th, const std::string& c) { return fold_def(*th.theory(), c, th); });

  m.def("lift_over_assumptions", &lift_over_assumptions, py::arg("rule"), py::arg("asms"));
  m.def("resolve",
        [](const Theorem& rule, std::size_t i, const Theorem& state, std::size_t n, std::size_t limit) {
          return take(resolve(rule, i, state, n), limit);
        },
        py::arg("rule"), py::arg("i"), py::arg("state"), py::arg("nsubgoals"), py::arg("limit") = 10);

  py::class_<ProofState>(m, "ProofState")
      .def_readonly("thm", &ProofState::thm)
      .def_readonly("nsubgoals", &ProofState::nsubgoals)
      .def("subgoals", &ProofState::subgoals)
      .def("goal", &ProofState::goal)
      .def("__str__", [](const ProofState& st) { return print_theorem(SyntaxTable::of(*st.thm.theory()), st.thm); });

  py::class_<Tactic>(m, "Tactic")
      .def(
          "__call__", [](const Tactic& t, const ProofState& st, std::size_t limit) { return take(t(st), limit); },
          py::arg("state"), py::arg("limit") = 10);

  m.def("initial_state", [](const PyTheory& thy, const Term& g) { return initial_state(thy, g); }, py::arg("thy"),
        py::arg("goal"));
  m.def("resolve_tac", &resolve_tac, py::arg("rules"), py::arg("i") = 1);
  m.def("assume_tac", &assume_tac, py::arg("i") = 1);
  m.def("all_tac", &all_tac);
  m.def("no_tac", &no_tac);
  m.def("then_", &then_);
  m.def("orelse", &orelse);
  m.def("repeat", &repeat);
  m.def("finalize", &finalize, py::arg("state"), py::arg("discharge") = std::vector<Term>{});

  py::class_<Session>(m, "Session")
      .def(py::init<>())
      .def("exec", &Session::exec, py::arg("request"))
      .def("exec_line", &Session::exec_line, py::arg("line"));
}
