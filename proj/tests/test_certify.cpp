#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sctl/certify.hpp"
#include "sctl/error.hpp"
#include "sctl/frontend.hpp"
#include "sctl/oracle.hpp"
#include "support/mutate.hpp"
#include "support/paper_models.hpp"
#include "support/random_instances.hpp"

using namespace sctl;
using namespace sctl::testing;

namespace {

Term v(const char* n) { return Term::var(n); }
Formula P(const Term& t) { return Formula::atom("P", {t}); }

// rule name and goal of every node, children indented, for shape checks
std::string shape(const KripkeModel& m, const Proof& p, int depth = 0) {
  auto n = [&m](StateId s) { return m.state_name(s); };
  std::string out = std::string(depth * 2, ' ') + rule_name(p->rule) + " " + to_string(p->goal, n) + "\n";
  for (const auto& c : p->children) out += shape(m, c, depth + 1);
  return out;
}

}  // namespace

TEST_CASE("certificate for AF(P) on the diamond") {
  auto m = diamond();
  Formula f = Formula::af("x", P(v("x")), Term::state(0));
  Proof p = certificate(*m, f);
  CHECK(shape(*m, p) ==
        "AF-R2 AF(x, P(x), a)\n"
        "  AF-R1 AF(x, P(x), b)\n"
        "    atom-R P(b)\n"
        "  AF-R1 AF(x, P(x), c)\n"
        "    atom-R P(c)\n");
  CHECK(check_proof(*m, p, f).valid);
}

TEST_CASE("certificate for nested AF with the binary predicate") {
  auto m = diamond();
  Formula f = Formula::af("x", Formula::af("y", Formula::atom("Q", {v("x"), v("y")}), v("x")), Term::state(0));
  Proof p = certificate(*m, f);
  CHECK(shape(*m, p) ==
        "AF-R2 AF(x, AF(y, Q(x, y), x), a)\n"
        "  AF-R1 AF(x, AF(y, Q(x, y), x), b)\n"
        "    AF-R2 AF(y, Q(b, y), b)\n"
        "      AF-R1 AF(y, Q(b, y), d)\n"
        "        atom-R Q(b, d)\n"
        "  AF-R1 AF(x, AF(y, Q(x, y), x), c)\n"
        "    AF-R2 AF(y, Q(c, y), c)\n"
        "      AF-R1 AF(y, Q(c, y), d)\n"
        "        atom-R Q(c, d)\n");
  CHECK(check_proof(*m, p, f).valid);

  // Q(b, d) becomes Q(b, b): rejected right at that leaf
  std::vector<std::size_t> leaf{0, 0, 0, 0};
  Proof bad = rebuild(p, leaf, 0, [](ProofNode& n) { n.goal = Formula::atom("Q", {Term::state(1), Term::state(1)}); });
  auto rep = check_proof(*m, bad, f);
  CHECK_FALSE(rep.valid);
  CHECK(rep.path == leaf);
}

TEST_CASE("EG(TRUE) closes by a merge") {
  auto m = diamond();
  Formula f = Formula::eg("x", Formula::top(), Term::state(3));
  Proof p = certificate(*m, f);
  CHECK(shape(*m, p) ==
        "EG-R EG(x, TRUE, d)\n"
        "  top-R TRUE\n"
        "  EG-merge EG(x, TRUE, d)\n");
  CHECK(check_proof(*m, p, f).valid);
  // a lone merge proves nothing
  auto lone = std::make_shared<ProofNode>(ProofNode{Rule::EGMerge, f, {}, -1});
  auto rep = check_proof(*m, lone);
  CHECK_FALSE(rep.valid);
  CHECK(rep.reason.find("merge") != std::string::npos);
}

TEST_CASE("counterexample is a proof of the dual") {
  auto m = diamond();
  // AG(P)(a) = AR(FALSE, P)(a) fails at a itself
  Formula ag = Formula::ar("z", "x", Formula::bottom(), P(v("x")), Term::state(0));
  Proof cx = counterexample(*m, ag);
  CHECK(shape(*m, cx) ==
        "EU-R1 EU(z,x, TRUE, !P(x), a)\n"
        "  neg-R !P(a)\n");
  CHECK(check_proof(*m, cx, dualize(ag)).valid);
  CHECK_THROWS_AS(certificate(*m, ag), PreconditionError);
  CHECK_THROWS_AS(counterexample(*m, dualize(ag)), PreconditionError);
}

TEST_CASE("mutual exclusion counterexample chain") {
  std::ifstream in(std::string(SCTL_SOURCE_DIR) + "/models/mutual.model");
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = parse_model(ss.str());
  REQUIRE(r.ok());
  auto m = compile(*r.model);
  auto ini = Term::state(m->initial());
  Formula never = Formula::ar("z", "x", Formula::bottom(), Formula::neg_atom("bug", {v("x")}), ini);
  Proof cx = counterexample(*m, never);
  REQUIRE(check_proof(*m, cx, dualize(never)).valid);
  std::vector<std::string> states;
  const ProofNode* n = cx.get();
  while (n->rule == Rule::EUR2) {
    states.push_back(m->state_name(n->goal.at().state_id()));
    n = n->children[1].get();
  }
  REQUIRE(n->rule == Rule::EUR1);
  states.push_back(m->state_name(n->goal.at().state_id()));
  CHECK(states == std::vector<std::string>{
                      "{flag:=false;mutex:=0;a:=1;b:=1}", "{flag:=false;mutex:=0;a:=2;b:=1}",
                      "{flag:=false;mutex:=0;a:=2;b:=2}", "{flag:=true;mutex:=0;a:=3;b:=2}",
                      "{flag:=true;mutex:=1;a:=4;b:=2}", "{flag:=true;mutex:=1;a:=4;b:=3}",
                      "{flag:=true;mutex:=2;a:=4;b:=4}"});
  CHECK(to_string(n->children[0]->goal, [&](StateId s) { return m->state_name(s); }) ==
        "bug({flag:=true;mutex:=2;a:=4;b:=4})");
}

TEST_CASE("text rendering") {
  auto m = diamond();
  Proof p = certificate(*m, Formula::af("x", P(v("x")), Term::state(0)));
  std::string text = render_proof(*m, p);
  CHECK(text.rfind("0: |- AF(x,P(x),a)\t[", 0) == 0);
  CHECK(text.find("|- P(b)\t[]") != std::string::npos);
  // ancestors of the same modality form the context above the turnstile
  CHECK(text.find(": a\n|- AF(x,P(x),b)") != std::string::npos);
  Proof one = certificate(*m, P(Term::state(1)));
  CHECK(render_proof(*m, one) == "0: |- P(b)\t[]\n");
}

TEST_CASE("json round trip on random proofs") {
  Rng r(41);
  for (int i = 0; i < 200; ++i) {
    auto m = random_model(r, 6);
    Formula f = random_formula(r, m->state_count(), 3);
    Proof p = prove(*m, f).provable ? certificate(*m, f) : counterexample(*m, f);
    std::string js = render_proof(*m, p, ProofFormat::Json);
    Proof back = parse_proof(js, *m);
    REQUIRE(proof_equal(p, back));
    CHECK(render_proof(*m, back, ProofFormat::Json) == js);
    CHECK(proof_size(back) == proof_size(p));
  }
  auto m = diamond();
  CHECK_THROWS_AS(parse_proof("{", *m), InputError);
  CHECK_THROWS_AS(parse_proof(R"({"format":"sctl-proof","version":1,"states":["zz"],"nodes":[],"root":0})", *m),
                  InputError);
}

TEST_CASE("certificates check, and the checker is sound") {
  Rng r(43);
  for (int i = 0; i < 300; ++i) {
    auto m = random_model(r, 7);
    Formula f = random_formula(r, m->state_count(), 4);
    bool holds = valid(*m, f);
    Formula concl = holds ? f : dualize(f);
    Proof p = holds ? certificate(*m, f) : counterexample(*m, f);
    INFO(to_string(f));
    REQUIRE(check_proof(*m, p, concl).valid);
    CHECK(valid(*m, p->goal));
  }
}

TEST_CASE("mutated proofs are rejected") {
  Rng r(47);
  int mutants = 0;
  while (mutants < 300) {
    auto m = random_model(r, 6);
    Formula f = random_formula(r, m->state_count(), 3);
    bool holds = prove(*m, f).provable;
    Formula concl = holds ? f : dualize(f);
    Proof p = holds ? certificate(*m, f) : counterexample(*m, f);
    for (int k = 0; k < 3; ++k, ++mutants) {
      Mutation mu = mutate(r, p, *m);
      INFO(to_string(f) << " / " << mu.kind);
      CHECK_FALSE(check_proof(*m, mu.proof, concl).valid);
    }
  }
}

TEST_CASE("reconstruction preconditions") {
  auto m = diamond();
  Formula f = Formula::af("x", P(v("x")), Term::state(0));
  EngineOptions o;
  o.trace = TraceMode::Full;
  o.closed_memo = true;
  Verdict ok = prove(*m, f, o);
  CHECK(proof_equal(reconstruct_proof(*m, f, ok.trace), certificate(*m, f)));

  o.closed_memo = false;
  CHECK_THROWS_AS(reconstruct_proof(*m, f, prove(*m, f, o).trace), PreconditionError);

  o.closed_memo = true;
  o.trace = TraceMode::Ring;
  o.ring_capacity = 2;
  CHECK_THROWS_AS(reconstruct_proof(*m, f, prove(*m, f, o).trace), PreconditionError);

  o.trace = TraceMode::Full;
  Formula g = Formula::eg("x", P(v("x")), Term::state(0));
  CHECK_THROWS_AS(reconstruct_proof(*m, g, prove(*m, g, o).trace), PreconditionError);
  // a trace of another formula does not replay
  CHECK_THROWS_AS(reconstruct_proof(*m, Formula::af("x", P(v("x")), Term::state(1)), ok.trace), Error);
}

TEST_CASE("rule names") {
  for (int i = 0; i <= static_cast<int>(Rule::EUR2); ++i) {
    auto r = static_cast<Rule>(i);
    CHECK(rule_from_name(rule_name(r)) == r);
  }
  CHECK_FALSE(rule_from_name("cut"));
}
