#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sctl/benchgen.hpp"
#include "sctl/certify.hpp"
#include "sctl/engine.hpp"
#include "sctl/error.hpp"
#include "sctl/frontend.hpp"
#include "sctl/kripke.hpp"
#include "sctl/oracle.hpp"

namespace sctl {

namespace {

struct Options {
  std::string file;
  std::string output;
  bool oracle = false;
  std::string engine = "cpt";
  bool no_memo = false;
  std::string visited = "hash";
  std::string proof_format = "text";
  std::uint64_t step_limit = 0;
  std::string bench;
  int a = 0, b = 0, t = 0, p = 0, n = 0;
  std::uint64_t seed = 1;
};

int emit_bench(const Options& o, std::ostream& out, std::ostream& err) {
  ModelDef d;
  if (o.bench == "cp" || o.bench == "csp") {
    int a = o.a ? o.a : (o.bench == "cp" ? 3 : 2);
    int b = o.b ? o.b : 12;
    if (o.bench == "cp") {
      d = gen_cp(cp_params(a, b, o.seed));
      add_properties(d, b / 2);
    } else {
      CspParams p = csp_params(a, b, o.seed);
      if (o.t) p.t = o.t;
      if (o.p) p.p = o.p;
      d = gen_csp(p);
      add_properties(d, b / 2);
    }
  } else if (o.bench == "mutex") {
    d = gen_mutex(o.n ? o.n : 2).model;
  } else {
    d = gen_ring(o.n ? o.n : 3).model;
  }
  std::string text = render_model(d);
  if (o.output.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(o.output);
  if (!f) {
    err << "error: cannot write '" << o.output << "'\n";
    return 2;
  }
  f << text;
  return 0;
}

int verify(const Options& o, std::ostream& out, std::ostream& err) {
  ParseResult pr = parse_model_file(o.file);
  for (const auto& d : pr.diagnostics) err << format_diagnostic(d, o.file) << "\n";
  if (!pr.ok()) return 2;
  const ModelDef& def = *pr.model;
  auto model = compile(def);

  EngineOptions eo;
  eo.engine = o.engine == "recursive" ? EngineKind::Recursive : EngineKind::Cpt;
  eo.memo = !o.no_memo;
  eo.visited = o.visited == "bdd" ? VisitedBackend::Bdd : VisitedBackend::Hash;
  eo.trace = TraceMode::Off;
  eo.step_limit = o.step_limit;

  std::vector<Formula> fairness;
  for (const auto& c : def.fairness) fairness.push_back(expand_abbrev(c));

  std::ofstream proof_out;
  if (!o.output.empty()) {
    proof_out.open(o.output);
    if (!proof_out) {
      err << "error: cannot write '" << o.output << "'\n";
      return 2;
    }
    if (!fairness.empty()) err << "note: no proofs are written for models with fairness constraints\n";
  }
  ProofFormat pf = o.proof_format == "json" ? ProofFormat::Json : ProofFormat::Text;

  out << "verifying on the model " << def.name << "...\n";
  for (const auto& spec : def.specs) {
    out << spec.name << ": " << to_string(spec.formula) << "\n";
    out.flush();
    Formula phi = spec_formula(spec.formula, model->initial());
    bool holds;
    if (o.oracle)
      holds = fairness.empty() ? valid(*model, phi) : valid_fair(*model, phi, fairness);
    else
      holds = fairness.empty() ? prove(*model, phi, eo).provable : prove_fair(*model, phi, fairness, eo).provable;
    out << spec.name << " is " << (holds ? "true." : "false.") << "\n";
    if (proof_out.is_open() && fairness.empty()) {
      Proof p = holds ? certificate(*model, phi, eo) : counterexample(*model, phi, eo);
      if (def.specs.size() > 1) proof_out << spec.name << ":\n";
      proof_out << render_proof(*model, p, pf);
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  // the historical spelling takes a single dash
  std::vector<std::string> args;
  for (const auto& a : raw) args.push_back(a == "-output" ? "--output" : a);

  Options o;
  CLI::App app{"Explicit-state CTL model checker with proof output", "sctl"};
  app.add_option("file", o.file, "model file");
  app.add_option("-o,--output", o.output, "write proofs (or the generated model with --bench) here");
  app.add_flag("--oracle", o.oracle, "decide with the fixpoint oracle instead of the prover");
  app.add_option("--engine", o.engine, "cpt or recursive")->check(CLI::IsMember({"cpt", "recursive"}));
  app.add_flag("--no-memo", o.no_memo, "disable memoization");
  app.add_option("--visited", o.visited, "hash or bdd")->check(CLI::IsMember({"hash", "bdd"}));
  app.add_option("--proof-format", o.proof_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--step-limit", o.step_limit, "abort after this many rewrite steps (0 = none)");
  app.add_option("--bench", o.bench, "generate a benchmark model: cp, csp, mutex or ring")
      ->check(CLI::IsMember({"cp", "csp", "mutex", "ring"}));
  app.add_option("--procs", o.a, "cp/csp: processes");
  app.add_option("--vars", o.b, "cp/csp: boolean variables");
  app.add_option("--transitions", o.t, "csp: transitions per process");
  app.add_option("--assigns", o.p, "csp: assignments per transition");
  app.add_option("-n", o.n, "mutex/ring: processes");
  app.add_option("--seed", o.seed, "generator seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (!o.bench.empty()) return emit_bench(o, out, err);
    if (o.file.empty()) {
      err << "error: no model file given\n";
      return 2;
    }
    return verify(o, out, err);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sctl
