#include <algorithm>

#include "doctest.h"
#include "sctl/engine.hpp"
#include "sctl/error.hpp"
#include "sctl/oracle.hpp"
#include "support/paper_models.hpp"
#include "support/random_instances.hpp"

using namespace sctl;
using namespace sctl::testing;

namespace {

Term v(const char* n) { return Term::var(n); }
Formula P(const Term& t) { return Formula::atom("P", {t}); }

StateNamer names(const KripkeModel& m) {
  return [&m](StateId s) { return m.state_name(s); };
}

EngineOptions full_trace(EngineKind k = EngineKind::Cpt) {
  EngineOptions o;
  o.engine = k;
  o.trace = TraceMode::Full;
  return o;
}

}  // namespace

TEST_CASE("CPT rewriting of AF(P) on the diamond, step by step") {
  auto m = diamond();
  Formula f = Formula::af("x", P(v("x")), Term::state(0));
  CptSearch c(*m, f);
  auto n = names(*m);
  const char* G1 = "{AF(x,P(x),a)}";
  std::vector<std::string> want = {
      "cpt(|- AF(x,P(x),a), t, f)",
      std::string("cpt(|- P(a), t, cpt(") + G1 + " |- AF(x,P(x),b), cpt(" + G1 + " |- AF(x,P(x),c), t, f), f))",
      std::string("cpt(") + G1 + " |- AF(x,P(x),b), cpt(" + G1 + " |- AF(x,P(x),c), t, f), f)",
      std::string("cpt(|- P(b), cpt(") + G1 + " |- AF(x,P(x),c), t, f), cpt({AF(x,P(x),a), AF(x,P(x),b)} |- " +
          "AF(x,P(x),d), cpt(" + G1 + " |- AF(x,P(x),c), t, f), f))",
      std::string("cpt(") + G1 + " |- AF(x,P(x),c), t, f)",
      "cpt(|- P(c), t, cpt({AF(x,P(x),a), AF(x,P(x),c)} |- AF(x,P(x),d), t, f))",
      "t",
  };
  std::vector<std::string> got{c.render(n)};
  while (!c.done()) {
    c.step();
    got.push_back(c.render(n));
  }
  CHECK(got == want);
  CHECK(c.provable());
}

TEST_CASE("verdicts on the diamond") {
  auto m = diamond();
  auto a = Term::state(0);
  CHECK(prove(*m, Formula::af("x", P(v("x")), a)).provable);
  CHECK_FALSE(prove(*m, Formula::eg("x", P(v("x")), a)).provable);
  auto afaf = Formula::af("x", Formula::af("y", Formula::atom("Q", {v("x"), v("y")}), v("x")), a);
  CHECK(prove(*m, afaf).provable);

  // EG(T) closes by a merge on the d self-loop
  Verdict eg = prove(*m, Formula::eg("x", Formula::top(), a), full_trace());
  CHECK(eg.provable);
  CHECK(eg.stats.merges >= 1);
  bool merged = std::any_of(eg.trace.events.begin(), eg.trace.events.end(), [&](const TraceEvent& e) {
    return e.kind == EventKind::Merge && e.result && m->state_name(e.state) == "d";
  });
  CHECK(merged);
}

TEST_CASE("merge results follow the modality") {
  // s0 <-> s1, nothing true: AF fails through the loop, AR(F, T) holds on it
  ExplicitModel m;
  StateId s0 = m.add_state("s0"), s1 = m.add_state("s1");
  m.add_edge(s0, s1);
  m.add_edge(s1, s0);
  m.add_predicate("P", 1);
  m.set_initial(s0);
  auto at = Term::state(s0);
  CHECK_FALSE(prove(m, Formula::af("x", P(v("x")), at)).provable);
  CHECK(prove(m, Formula::ar("x", "y", Formula::bottom(), Formula::top(), at)).provable);
  CHECK_FALSE(prove(m, Formula::eu("x", "y", Formula::top(), P(v("y")), at)).provable);
  CHECK(prove(m, Formula::eg("x", Formula::neg_atom("P", {v("x")}), at)).provable);
}

TEST_CASE("bad input") {
  auto m = diamond();
  CHECK_THROWS_AS(prove(*m, P(v("x"))), InputError);
  CHECK_THROWS_AS(prove(*m, Formula::atom("Nope", {Term::state(0)})), InputError);
  CHECK_THROWS_AS(prove(*m, Formula::atom("Q", {Term::state(0)})), InputError);
}

TEST_CASE("step limit") {
  auto m = diamond();
  EngineOptions o;
  o.step_limit = 2;
  CHECK_THROWS_AS(prove(*m, Formula::af("x", P(v("x")), Term::state(0)), o), ResourceError);
  o.step_limit = 1000;
  CHECK(prove(*m, Formula::af("x", P(v("x")), Term::state(0)), o).provable);
}

TEST_CASE("the two engines produce the same trace") {
  Rng r(21);
  for (int i = 0; i < 400; ++i) {
    auto m = random_model(r, 6);
    Formula f = random_formula(r, m->state_count(), 4);
    for (bool memo : {true, false}) {
      auto a = full_trace(EngineKind::Cpt), b = full_trace(EngineKind::Recursive);
      a.memo = b.memo = memo;
      Verdict x = prove(*m, f, a), y = prove(*m, f, b);
      INFO(to_string(f));
      REQUIRE(x.provable == y.provable);
      REQUIRE(x.trace.events == y.trace.events);
      CHECK(x.stats.steps == y.stats.steps);
    }
  }
}

TEST_CASE("memo, closed memo, visited backend and rewrite order do not change verdicts") {
  Rng r(33);
  for (int i = 0; i < 400; ++i) {
    auto m = random_model(r, 8);
    Formula f = random_formula(r, m->state_count(), 4);
    bool truth = valid(*m, f);
    INFO(to_string(f));
    EngineOptions o;
    CHECK(prove(*m, f, o).provable == truth);
    o.memo = false;
    CHECK(prove(*m, f, o).provable == truth);
    o.memo = true;
    o.closed_memo = true;
    CHECK(prove(*m, f, o).provable == truth);
    o.visited = VisitedBackend::Bdd;
    o.check_rewrite_order = true;
    CHECK(prove(*m, f, o).provable == truth);
  }
}

TEST_CASE("deep co-inductive nesting stays linear with the memo") {
  // a ring of n states; AG(x, EF(y, P(y), x)) revisits every inner goal
  ExplicitModel m;
  const int n = 200;
  for (int i = 0; i < n; ++i) m.add_state("s" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    m.add_edge(static_cast<StateId>(i), static_cast<StateId>((i + 1) % n));
    m.add_edge(static_cast<StateId>(i), static_cast<StateId>(i));
  }
  m.add_predicate("P", 1);
  m.add_tuple("P", {static_cast<StateId>(n / 2)});
  m.set_initial(0);
  Formula ag = Formula::ar("x", "z", Formula::bottom(),
                           Formula::eu("u", "y", Formula::top(), P(v("y")), v("z")), Term::state(0));
  Verdict on = prove(m, ag);
  CHECK(on.provable);
  CHECK(on.stats.steps < 40u * n);
  EngineOptions off;
  off.memo = false;
  off.step_limit = 50'000'000;
  CHECK(prove(m, ag, off).provable);
}

TEST_CASE("trace ring keeps the tail") {
  auto m = diamond();
  EngineOptions o;
  o.ring_capacity = 2;
  Verdict v2 = prove(*m, Formula::af("x", P(v("x")), Term::state(0)), o);
  CHECK_FALSE(v2.trace.complete);
  CHECK(v2.trace.events.size() == 2);
  CHECK(v2.trace.total == v2.stats.steps);
  CHECK(describe_event(*m, v2.trace, 1).find("P(c)") != std::string::npos);
}

TEST_CASE("visited stores") {
  auto m = diamond();
  for (auto b : {VisitedBackend::Hash, VisitedBackend::Bdd}) {
    auto st = make_visited_store(b, *m);
    CHECK(st->query(0, 1) == Visit::Unknown);
    st->mark(0, 1, Visit::Proved);
    st->mark(1, 1, Visit::Disproved);
    st->mark(0, 2, Visit::InProgress);
    CHECK(st->query(0, 1) == Visit::Proved);
    CHECK(st->query(1, 1) == Visit::Disproved);
    CHECK(st->query(1, 2) == Visit::Unknown);
    CHECK(st->size() == 3);
    st->mark(0, 2, Visit::Unknown);
    CHECK(st->size() == 2);
  }
}

TEST_CASE("fair loop check") {
  auto m = lasso();
  std::vector<Formula> C{P(v("s"))};
  CHECK(fair_loop_check({1}, C, *m));
  CHECK_FALSE(fair_loop_check({0}, C, *m));
  CHECK(fair_loop_check({0, 1}, C, *m));
  CHECK(fair_loop_check({0}, {}, *m));
}
