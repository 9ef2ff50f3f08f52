#include "doctest.h"
#include "sctl/benchgen.hpp"
#include "sctl/error.hpp"
#include "sctl/frontend.hpp"
#include "sctl/kripke.hpp"
#include "support/check_specs.hpp"

using namespace sctl;
using namespace sctl::testing;

namespace {

int count_bool(const ModelDef& d) {
  int n = 0;
  for (const auto& v : d.vars) n += v.is_bool;
  return n;
}

}  // namespace

TEST_CASE("CP shape") {
  CpParams p = cp_params(3, 12, 1);
  CHECK(p.c == 6);
  CHECK(p.d == 2);
  ModelDef d = gen_cp(p);
  CHECK(d.vars.size() == 12);
  CHECK(count_bool(d) == 12);
  CHECK(d.transitions.size() == 3);
  REQUIRE(d.init.size() == 12);
  for (int i = 6; i < 12; ++i) CHECK(d.init[static_cast<std::size_t>(i)].value == Expr::boolean(false));
  // every assignment is a negated variable
  for (const auto& t : d.transitions)
    for (const auto& a : t.assigns) {
      CHECK(a.value.kind == ExprKind::Not);
      CHECK(a.value.kids[0].kind == ExprKind::Var);
    }
  CHECK(check_model(d).empty());
  CHECK_THROWS_AS(gen_cp(CpParams{3, 13, 6, 2, 1}), InputError);
}

TEST_CASE("generators are seed-deterministic") {
  CHECK(gen_cp(cp_params(3, 12, 9)) == gen_cp(cp_params(3, 12, 9)));
  CHECK_FALSE(gen_cp(cp_params(3, 12, 9)) == gen_cp(cp_params(3, 12, 10)));
  CHECK(gen_csp(csp_params(2, 12, 9)) == gen_csp(csp_params(2, 12, 9)));
  CHECK(gen_mutex(3).model == gen_mutex(3).model);
  CHECK(gen_ring(3).model == gen_ring(3).model);
}

TEST_CASE("CSP shape and location cycling") {
  CspParams p = csp_params(2, 12, 1);
  CHECK(p.t == 6);
  CHECK(p.p == 4);
  ModelDef d = gen_csp(p);
  CHECK(count_bool(d) == 12);
  CHECK(d.vars.size() == 14);
  int locs = 0;
  for (const auto& v : d.vars)
    if (!v.is_bool) {
      ++locs;
      CHECK(v.lo == 0);
      CHECK(v.hi == 5);
    }
  CHECK(locs == 2);
  CHECK(d.transitions.size() == 12);
  for (const auto& t : d.transitions) CHECK(t.assigns.size() == 5);  // location plus p

  // following process 0 alone, its location walks 0, 1, ..., 5, 0
  auto m = compile(d);
  auto loc0 = [&](StateId s) {
    std::string n = m->state_name(s);
    auto k = n.find("loc0:=");
    return std::stoi(n.substr(k + 6));
  };
  StateId s = m->initial();
  for (int step = 0; step < 7; ++step) {
    int here = loc0(s);
    CHECK(here == step % 6);
    bool moved = false;
    for (StateId t : m->next(s))
      if (loc0(t) == (here + 1) % 6) {
        s = t;
        moved = true;
        break;
      }
    REQUIRE(moved);
  }
}

TEST_CASE("property texts") {
  auto text = [](int i, int c) { return to_string(property(i, c)); };
  CHECK(text(1, 3) == "AG(x, v1(x) || v2(x) || v3(x), ini)");
  CHECK(text(13, 3) == "AG(x, v1(x) && v2(x) && v3(x), ini)");
  CHECK(text(7, 3) == "AU(x,y, v1(x), AU(u,w, v2(u), v3(w), y), ini)");
  CHECK(text(2, 4) == "AF(x, v1(x) || v2(x) || v3(x) || v4(x), ini)");
  CHECK_THROWS_AS(property(0, 3), InputError);
  CHECK_THROWS_AS(property(25, 3), InputError);
  CHECK_THROWS_AS(property(1, 2), InputError);
  // every property is closed once ini is bound, and parses back
  for (int i = 1; i <= 24; ++i) {
    auto f = property(i, 6);
    auto back = parse_formula(to_string(f));
    REQUIRE(back);
    CHECK(*back == f);
    CHECK(is_closed(substitute(Term::state(0), "ini", expand_abbrev(f))));
  }
}

TEST_CASE("CP and CSP: engine agrees with the oracle on all properties") {
  for (std::uint64_t seed : {1, 2}) {
    ModelDef cp = gen_cp(cp_params(3, 12, seed));
    add_properties(cp, 6);
    ModelDef csp = gen_csp(csp_params(2, 12, seed));
    add_properties(csp, 6);
    for (const ModelDef* d : {&cp, &csp}) {
      auto rs = check_specs(*d);
      CHECK(rs.size() == 24);
      for (const auto& o : rs) CHECK_MESSAGE(o.engine == o.oracle, d->name << " " << o.name);
    }
  }
}

TEST_CASE("mutex family") {
  CHECK_THROWS_AS(gen_mutex(1), InputError);
  for (int n = 2; n <= 3; ++n) {
    FairBench b = gen_mutex(n);
    CHECK(b.property_names.size() == 5);
    CHECK(b.model.fairness.size() == static_cast<std::size_t>(n));
    CHECK(check_model(b.model).empty());
    for (const auto& o : check_specs(b.model)) CHECK_MESSAGE(o.engine == o.oracle, "n=" << n << " " << o.name);
  }
  // mutual exclusion itself holds: never two processes critical
  FairBench b = gen_mutex(2);
  auto m = compile(b.model);
  for (StateId s : reachable_states(*m)) CHECK_FALSE((m->eval_atom("cri0", {s}) && m->eval_atom("cri1", {s})));
}

TEST_CASE("ring family") {
  CHECK_THROWS_AS(gen_ring(2), InputError);
  FairBench b = gen_ring(3);
  int internal = 0;
  for (const auto& v : b.model.vars)
    if (v.is_bool && (v.name.rfind('r', 0) == 0 || v.name.rfind("out", 0) == 0)) ++internal;
  CHECK(internal == 18);
  CHECK(b.property_names.size() == 4);
  for (const auto& o : check_specs(b.model)) CHECK_MESSAGE(o.engine == o.oracle, o.name);
}

TEST_CASE("generated models render and reparse") {
  std::vector<ModelDef> defs{gen_cp(cp_params(3, 12, 3)), gen_csp(csp_params(2, 12, 3)), gen_mutex(3).model,
                             gen_ring(3).model};
  add_properties(defs[0], 6);
  for (const auto& d : defs) {
    auto r = parse_model(render_model(d));
    REQUIRE(r.ok());
    CHECK(*r.model == d);
    auto m = compile(d);
    for (StateId s : reachable_states(*m)) REQUIRE_FALSE(m->next(s).empty());
  }
}
