// Python module _sctl: model files, explicit models, verification, proofs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "sctl/benchgen.hpp"
#include "sctl/certify.hpp"
#include "sctl/engine.hpp"
#include "sctl/error.hpp"
#include "sctl/frontend.hpp"
#include "sctl/kripke.hpp"
#include "sctl/oracle.hpp"

namespace py = pybind11;
using namespace sctl;

namespace {

EngineOptions options(const std::string& engine, bool memo, std::uint64_t step_limit) {
  EngineOptions o;
  if (engine == "cpt")
    o.engine = EngineKind::Cpt;
  else if (engine == "recursive")
    o.engine = EngineKind::Recursive;
  else
    throw InputError("unknown engine '" + engine + "'");
  o.memo = memo;
  o.step_limit = step_limit;
  return o;
}

ProofFormat proof_format(const std::string& f) {
  if (f == "text") return ProofFormat::Text;
  if (f == "json") return ProofFormat::Json;
  throw InputError("unknown proof format '" + f + "'");
}

std::string diagnostics_text(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += format_diagnostic(d) + "\n";
  return out;
}

Formula closed(const std::string& text, StateId init) {
  std::vector<Diagnostic> ds;
  auto f = parse_formula(text, &ds);
  if (!f) throw InputError(diagnostics_text(ds));
  return spec_formula(*f, init);
}

// A compiled model file. Specs are kept with their names.
struct Program {
  ModelDef def;
  std::unique_ptr<CompiledModel> model;
  std::vector<Formula> fairness;

  explicit Program(ModelDef d) : def(std::move(d)), model(compile(def)) {
    for (const auto& c : def.fairness) fairness.push_back(expand_abbrev(c));
  }

  static std::shared_ptr<Program> from(const ParseResult& r) {
    if (!r.ok()) throw InputError(diagnostics_text(r.diagnostics));
    return std::make_shared<Program>(*r.model);
  }

  Formula spec(const std::string& name) const {
    for (const auto& s : def.specs)
      if (s.name == name) return spec_formula(s.formula, model->initial());
    throw InputError("no spec named '" + name + "'");
  }

  Formula formula(const std::string& name_or_text) const {
    for (const auto& s : def.specs)
      if (s.name == name_or_text) return spec_formula(s.formula, model->initial());
    return closed(name_or_text, model->initial());
  }

  py::dict verify(const std::string& what, const std::string& engine, bool memo, std::uint64_t step_limit) const {
    Formula f = formula(what);
    EngineOptions o = options(engine, memo, step_limit);
    Verdict v = fairness.empty() ? prove(*model, f, o) : prove_fair(*model, f, fairness, o);
    py::dict d;
    d["holds"] = v.provable;
    d["steps"] = v.stats.steps;
    d["memo_hits"] = v.stats.memo_hits;
    d["merges"] = v.stats.merges;
    return d;
  }

  bool oracle(const std::string& what) const {
    Formula f = formula(what);
    return fairness.empty() ? valid(*model, f) : valid_fair(*model, f, fairness);
  }

  std::string proof(const std::string& what, const std::string& format) const {
    if (!fairness.empty()) throw PreconditionError("proofs are not produced under fairness");
    Formula f = formula(what);
    Proof p = prove(*model, f).provable ? certificate(*model, f) : counterexample(*model, f);
    return render_proof(*model, p, proof_format(format));
  }
};

}  // namespace

PYBIND11_MODULE(_sctl, m) {
  m.doc() = "CTL with polyadic predicates: proof search, oracle, certificates";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<TraceMismatch>(m, "TraceMismatch", base.ptr());

  py::class_<Program, std::shared_ptr<Program>>(m, "Program")
      .def_static("parse", [](const std::string& text) { return Program::from(parse_model(text)); })
      .def_static("load", [](const std::string& path) { return Program::from(parse_model_file(path)); })
      .def_property_readonly("name", [](const Program& p) { return p.def.name; })
      .def_property_readonly("specs",
                             [](const Program& p) {
                               std::vector<std::string> out;
                               for (const auto& s : p.def.specs) out.push_back(s.name);
                               return out;
                             })
      .def_property_readonly("fair", [](const Program& p) { return !p.fairness.empty(); })
      .def("spec_text",
           [](const Program& p, const std::string& name) {
             for (const auto& s : p.def.specs)
               if (s.name == name) return to_string(s.formula);
             throw InputError("no spec named '" + name + "'");
           })
      .def("verify", &Program::verify, py::arg("spec"), py::arg("engine") = "cpt", py::arg("memo") = true,
           py::arg("step_limit") = 0, "Spec name or formula text; returns holds and search statistics.")
      .def("oracle", &Program::oracle, py::arg("spec"))
      .def("proof", &Program::proof, py::arg("spec"), py::arg("format") = "text",
           "Certificate when the spec holds, otherwise a proof of its dual.")
      .def("reachable", [](const Program& p) { return reachable_states(*p.model).size(); })
      .def("render", [](const Program& p) { return render_model(p.def); });

  py::class_<ExplicitModel, std::shared_ptr<ExplicitModel>>(m, "ExplicitModel")
      .def(py::init<>())
      .def("add_state", &ExplicitModel::add_state)
      .def("add_edge", &ExplicitModel::add_edge)
      .def("add_predicate", &ExplicitModel::add_predicate)
      .def("add_tuple", &ExplicitModel::add_tuple)
      .def("set_initial", &ExplicitModel::set_initial)
      .def("state_count", &ExplicitModel::state_count)
      .def(
          "verify",
          [](const ExplicitModel& em, const std::string& text, const std::string& engine, bool memo) {
            return prove(em, closed(text, em.initial()), options(engine, memo, 0)).provable;
          },
          py::arg("formula"), py::arg("engine") = "cpt", py::arg("memo") = true,
          "Formula text with `ini` for the initial state.")
      .def("oracle", [](const ExplicitModel& em, const std::string& text) {
        return valid(em, closed(text, em.initial()));
      });

  m.def(
      "bench",
      [](const std::string& family, int n, int procs, int vars, std::uint64_t seed) {
        ModelDef d;
        if (family == "cp") {
          d = gen_cp(cp_params(procs, vars, seed));
          add_properties(d, vars / 2);
        } else if (family == "csp") {
          d = gen_csp(csp_params(procs, vars, seed));
          add_properties(d, vars / 2);
        } else if (family == "mutex") {
          d = gen_mutex(n).model;
        } else if (family == "ring") {
          d = gen_ring(n).model;
        } else {
          throw InputError("unknown family '" + family + "'");
        }
        return render_model(d);
      },
      py::arg("family"), py::arg("n") = 3, py::arg("procs") = 3, py::arg("vars") = 12, py::arg("seed") = 1,
      "Model text of a benchmark instance.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");
}
