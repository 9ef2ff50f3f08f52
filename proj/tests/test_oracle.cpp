#include "doctest.h"
#include "sctl/error.hpp"
#include "sctl/oracle.hpp"
#include "support/brute.hpp"
#include "support/paper_models.hpp"
#include "support/random_instances.hpp"

using namespace sctl;
using namespace sctl::testing;

namespace {
Term v(const char* n) { return Term::var(n); }
Formula P(const Term& t) { return Formula::atom("P", {t}); }
}  // namespace

TEST_CASE("oracle on the diamond") {
  auto m = diamond();
  auto a = Term::state(0);
  CHECK(valid(*m, Formula::af("x", P(v("x")), a)));
  CHECK_FALSE(valid(*m, Formula::eg("x", P(v("x")), a)));
  CHECK(valid(*m, Formula::af("x", Formula::af("y", Formula::atom("Q", {v("x"), v("y")}), v("x")), a)));
  CHECK(valid(*m, Formula::eg("x", Formula::top(), a)));
  // open formula under an environment
  CHECK(valid(*m, P(v("x")), {{"x", 1}}));
  CHECK_FALSE(valid(*m, P(v("x")), {{"x", 0}}));
}

TEST_CASE("spatial property on a three-state cycle") {
  // AG_x(AF_y(D(x, y))(x))(s0): from anywhere the vehicle gets far away
  auto cycle = [](bool full) {
    auto m = std::make_unique<ExplicitModel>();
    StateId s0 = m->add_state("s0"), s1 = m->add_state("s1"), s2 = m->add_state("s2");
    m->add_edge(s0, s1);
    m->add_edge(s1, s2);
    m->add_edge(s2, s0);
    m->add_predicate("D", 2);
    m->add_tuple("D", {s0, s2});
    m->add_tuple("D", {s1, s0});
    if (full) m->add_tuple("D", {s2, s1});
    m->set_initial(s0);
    return m;
  };
  auto D = [](const char* a, const char* b) { return Formula::atom("D", {v(a), v(b)}); };
  Formula ag = Formula::ar("z", "x", Formula::bottom(), Formula::af("y", D("x", "y"), v("x")), Term::state(0));
  auto m = cycle(true);
  CHECK(valid(*m, ag));
  CHECK(Brute(*m).eval(ag));
  // nothing is far from s2 any more
  auto m2 = cycle(false);
  CHECK_FALSE(valid(*m2, ag));
  CHECK_FALSE(Brute(*m2).eval(ag));
}

TEST_CASE("oracle agrees with path enumeration") {
  Rng r(17);
  for (int i = 0; i < 600; ++i) {
    auto m = random_model(r, 6);
    Formula f = random_formula(r, m->state_count(), 4);
    INFO(to_string(f));
    bool o = valid(*m, f);
    REQUIRE(o == Brute(*m).eval(f));
    CHECK(o != valid(*m, dualize(f)));
  }
}

TEST_CASE("fair oracle agrees with path enumeration") {
  Rng r(19);
  for (int i = 0; i < 400; ++i) {
    auto m = random_model(r, 6);
    std::vector<Formula> C;
    for (std::size_t k = roll(r, 3); k > 0; --k) C.push_back(random_constraint(r));
    Formula f = random_formula(r, m->state_count(), 3);
    INFO(to_string(f));
    bool o = valid_fair(*m, f, C);
    REQUIRE(o == Brute(*m, C).eval(fairify(f)));
    CHECK(o != valid_fair(*m, dualize(f), C));
  }
}

TEST_CASE("empty fairness is plain semantics") {
  Rng r(23);
  for (int i = 0; i < 200; ++i) {
    auto m = random_model(r, 6);
    Formula f = random_formula(r, m->state_count(), 4);
    CHECK(valid_fair(*m, f, {}) == valid(*m, f));
  }
}

TEST_CASE("fair examples on the lasso") {
  auto m = lasso();
  auto s0 = Term::state(0);
  Formula af = Formula::af("x", P(v("x")), s0);
  CHECK_FALSE(valid(*m, af));
  CHECK(valid_fair(*m, af, {P(v("s"))}));
  Formula eg = Formula::eg("x", Formula::top(), s0);
  CHECK(valid_fair(*m, eg, {P(v("s"))}));
  // P and not P both infinitely often: no loop mixes s0 and s1
  CHECK_FALSE(valid_fair(*m, eg, {P(v("s")), Formula::neg_atom("P", {v("s")})}));
  CHECK(fair_states(*m, {P(v("s"))}) == std::vector<StateId>{0, 1});
  CHECK(fair_states(*m, {Formula::neg_atom("P", {v("s")})}) == std::vector<StateId>{0});
}

TEST_CASE("oracle errors") {
  auto m = diamond();
  CHECK_THROWS_AS(valid(*m, P(v("x"))), Error);
  OracleOptions tiny;
  tiny.state_limit = 2;
  CHECK_THROWS_AS(valid(*m, Formula::af("x", P(v("x")), Term::state(0)), {}, tiny), ResourceError);
  CHECK_THROWS_AS(valid_fair(*m, Formula::top(), {Formula::atom("Q", {v("x"), v("y")})}), InputError);
}
