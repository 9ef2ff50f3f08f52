#include <optional>

#include "doctest.h"
#include "sctl/formula.hpp"
#include "sctl/frontend.hpp"
#include "sctl/oracle.hpp"
#include "support/random_instances.hpp"

using namespace sctl;
using namespace sctl::testing;

namespace {

// Nameless rendering: bound variables become indices, so two formulas print
// the same iff they are alpha-equivalent. `sub` replaces free occurrences of
// one variable, which gives an independent substitution to compare with.
struct DeBruijn {
  std::optional<std::pair<std::string, Term>> sub;

  std::string term(const Term& t, const std::vector<std::string>& scope) const {
    if (t.is_state()) return "c" + std::to_string(t.state_id());
    for (std::size_t i = scope.size(); i-- > 0;)
      if (scope[i] == t.name()) return "#" + std::to_string(scope.size() - 1 - i);
    if (sub && sub->first == t.name()) return term(sub->second, {});
    return "v:" + t.name();
  }

  std::string operator()(const Formula& f, std::vector<std::string> scope = {}) const {
    auto under = [&](const std::string& x) {
      auto s = scope;
      s.push_back(x);
      return s;
    };
    switch (f.op()) {
      case Op::Top: return "T";
      case Op::Bottom: return "F";
      case Op::Atom:
      case Op::NegAtom: {
        std::string out = (f.op() == Op::Atom ? "" : "~") + f.pred() + "(";
        for (const auto& a : f.args()) out += term(a, scope) + ",";
        return out + ")";
      }
      case Op::And: return "(" + (*this)(f.lhs(), scope) + "&" + (*this)(f.rhs(), scope) + ")";
      case Op::Or: return "(" + (*this)(f.lhs(), scope) + "|" + (*this)(f.rhs(), scope) + ")";
      case Op::AR:
      case Op::EU:
        return std::string(op_name(f.op())) + "[" + (*this)(f.body1(), under(f.binder())) + "," +
               (*this)(f.body2(), under(f.binder2())) + "]@" + term(f.at(), scope);
      default:
        return std::string(f.fair() ? "fair-" : "") + op_name(f.op()) + "[" + (*this)(f.body(), under(f.binder())) +
               "]@" + term(f.at(), scope);
    }
  }
};

Formula P(const Term& t) { return Formula::atom("P", {t}); }
Formula Q(const Term& a, const Term& b) { return Formula::atom("Q", {a, b}); }
Term v(const char* n) { return Term::var(n); }

}  // namespace

TEST_CASE("substitution replaces free occurrences only") {
  auto a = Term::state(0);
  CHECK(identical(substitute(a, "x", P(v("x"))), P(a)));
  // the inner x is bound; only the evaluation point changes
  Formula eg = Formula::eg("x", P(v("x")), v("x"));
  CHECK(identical(substitute(a, "x", eg), Formula::eg("x", P(v("x")), a)));
}

TEST_CASE("substitution avoids capture") {
  // (y/x) EF_y(Q(x,y))(x), with EF_y written as EU_{z,y}(T, .)
  Formula f = Formula::eu("z", "y", Formula::top(), Q(v("x"), v("y")), v("x"));
  Formula g = substitute(v("y"), "x", f);
  REQUIRE(g.op() == Op::EU);
  CHECK(g.at() == v("y"));
  CHECK(g.binder2() != "y");
  const auto& q = g.body2();
  CHECK(q.args()[0] == v("y"));
  CHECK(q.args()[1] == v(g.binder2().c_str()));
  DeBruijn db;
  DeBruijn ref{std::make_pair(std::string("x"), v("y"))};
  CHECK(db(g) == ref(f));
}

TEST_CASE("substitution agrees with a nameless reference") {
  Rng r(7);
  DeBruijn db;
  for (int i = 0; i < 2000; ++i) {
    FormulaGen g{r, 4};
    // open formulas: start with x and y in scope
    Formula f = g.gen(4, {"x", "y"});
    Term t = coin(r, 50) ? Term::state(static_cast<StateId>(roll(r, 4))) : v(coin(r, 50) ? "y" : "x3");
    Formula out = substitute(t, "x", f);
    DeBruijn ref{std::make_pair(std::string("x"), t)};
    INFO(to_string(f));
    REQUIRE(db(out) == ref(f));
    if (!free_vars(f).count("x")) CHECK(identical(out, f));
  }
}

TEST_CASE("free variables") {
  CHECK(free_vars(P(Term::state(0))).empty());
  CHECK(free_vars(Q(v("x"), Term::state(0))) == std::set<std::string>{"x"});
  // EF_x(EF_y(P(x, y))(x))(s)
  auto ef = [](const char* x, Formula b, Term at) { return Formula::eu("z", x, Formula::top(), b, at); };
  Formula f = ef("x", ef("y", Q(v("x"), v("y")), v("x")), Term::state(0));
  CHECK(is_closed(f));
  // binders do not reach the evaluation point
  CHECK(free_vars(Formula::ax("x", P(v("x")), v("x"))) == std::set<std::string>{"x"});
}

TEST_CASE("dualize") {
  auto a = Term::state(0);
  CHECK(identical(dualize(P(a)), Formula::neg_atom("P", {a})));
  CHECK(identical(dualize(Formula::af("x", P(v("x")), a)), Formula::eg("x", Formula::neg_atom("P", {v("x")}), a)));
  CHECK(identical(dualize(Formula::top()), Formula::bottom()));
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(r, 5);
    REQUIRE(identical(dualize(dualize(f)), f));
    CHECK(size(dualize(f)) == size(f));
  }
}

TEST_CASE("alpha equality ignores binder names only") {
  auto a = Term::state(1);
  Formula f = Formula::ex("x", P(v("x")), a);
  Formula g = Formula::ex("y", P(v("y")), a);
  CHECK(f == g);
  CHECK(alpha_hash(f) == alpha_hash(g));
  CHECK_FALSE(identical(f, g));
  CHECK_FALSE(f == Formula::ex("y", P(v("x")), a));
  CHECK_FALSE(f == Formula::ax("x", P(v("x")), a));
}

TEST_CASE("size decreases towards subformulas") {
  Rng r(5);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(r, 3);
    switch (f.op()) {
      case Op::And:
      case Op::Or:
        CHECK(size(f.lhs()) < size(f));
        CHECK(size(f.rhs()) < size(f));
        break;
      case Op::AR:
      case Op::EU:
        CHECK(size(f.body1()) < size(f));
        CHECK(size(f.body2()) < size(f));
        break;
      case Op::AX: case Op::EX: case Op::AF: case Op::EG:
        CHECK(size(f.body()) < size(f));
        break;
      default: CHECK(size(f) == 1);
    }
  }
}

TEST_CASE("abbreviations") {
  auto s = Term::state(0);
  auto sugared = [](const char* text) { return *parse_formula(text); };
  Formula ef = expand_abbrev(SugaredFormula::unary_modal(SOp::EF, "x", SugaredFormula::atom("P", {v("x")}), s));
  REQUIRE(ef.op() == Op::EU);
  CHECK(ef.body1().op() == Op::Top);
  CHECK(ef.binder2() == "x");
  CHECK(ef.binder() != "x");

  Formula ag = expand_abbrev(SugaredFormula::unary_modal(SOp::AG, "x", SugaredFormula::atom("P", {v("x")}), s));
  REQUIRE(ag.op() == Op::AR);
  CHECK(ag.body1().op() == Op::Bottom);
  CHECK(identical(ag.body2(), P(v("x"))));

  // every expansion is closed when its source is, and keeps meaning
  Rng r(3);
  const char* shapes[] = {
      "AG(x, P(x) -> EF(y, Q(x, y), x), ini)", "AU(x, y, P(x), R(y), ini)", "ER(x, y, P(x), R(y), ini)",
      "AG(x, AF(y, P(y), x), ini)",           "EF(x, P(x) && R(x), ini)", "(P(ini) || R(ini)) -> AX(x, P(x), ini)"};
  for (const char* text : shapes) {
    auto sf = sugared(text);
    for (int i = 0; i < 40; ++i) {
      auto m = random_model(r, 5);
      Formula f = substitute(Term::state(m->initial()), "ini", expand_abbrev(sf));
      REQUIRE(is_closed(f));
      // reference meanings built by hand from the core constructors
      Formula ref;
      auto x = v("x"), y = v("y");
      auto ini = Term::state(m->initial());
      std::string t = text;
      // A[P U R] = not (E[not R U (not P and not R)] or EG not R)
      if (t.rfind("AU", 0) == 0)
        ref = dualize(Formula::disj(
            Formula::eu("x", "y", Formula::neg_atom("R", {x}),
                        Formula::conj(Formula::neg_atom("P", {y}), Formula::neg_atom("R", {y})), ini),
            Formula::eg("y", Formula::neg_atom("R", {y}), ini)));
      // E[P R R] = E[R U (P and R)] or EG R
      else if (t.rfind("ER", 0) == 0)
        ref = Formula::disj(Formula::eu("x", "y", Formula::atom("R", {x}),
                                        Formula::conj(Formula::atom("P", {y}), Formula::atom("R", {y})), ini),
                            Formula::eg("y", Formula::atom("R", {y}), ini));
      if (ref) CHECK(valid(*m, f) == valid(*m, ref));
      CHECK(valid(*m, f) == !valid(*m, dualize(f)));
    }
  }
}

TEST_CASE("fairify marks every path quantifier") {
  auto a = Term::state(0);
  Formula f = fairify(Formula::ex("x", P(v("x")), a));
  // EX through an ECG(T) witness at the successor
  CHECK(f.op() == Op::EX);
  CHECK(to_string(f).find("ECG") != std::string::npos);
  Formula g = fairify(Formula::af("x", P(v("x")), a));
  CHECK(g.op() == Op::AF);
  CHECK(g.fair());
}

TEST_CASE("printing") {
  auto f = Formula::eu("x", "y", Formula::top(), Formula::atom("bug", {v("y")}), v("ini"));
  CHECK(to_string(f) == "EU(x,y, TRUE, bug(y), ini)");
  CHECK(to_string(f, {}, PrintStyle::Compact) == "EU(x,y,TRUE,bug(y),ini)");
  auto named = [](StateId s) { return std::string(1, static_cast<char>('a' + s)); };
  CHECK(to_string(Formula::af("x", P(v("x")), Term::state(0)), named) == "AF(x, P(x), a)");
  // the sugared printer reparses to the same tree
  auto s = parse_formula("AG(x, P(x) -> AU(y,z, !R(y), Q(x, z) || P(z), x), ini) && TRUE");
  REQUIRE(s);
  CHECK(*parse_formula(to_string(*s)) == *s);
}
