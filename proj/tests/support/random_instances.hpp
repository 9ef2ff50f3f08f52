#pragma once

// Random explicit models and closed formulas for differential tests.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl::testing {

using Rng = std::mt19937_64;

inline std::size_t roll(Rng& r, std::size_t n) { return static_cast<std::size_t>(r() % n); }
inline bool coin(Rng& r, unsigned pct) { return r() % 100 < pct; }

// Up to max_states states, every state with 1..3 successors, P/1, R/1 and
// the binary Q. Edge order is random so next() order varies too.
inline std::unique_ptr<ExplicitModel> random_model(Rng& r, std::size_t max_states = 8) {
  auto m = std::make_unique<ExplicitModel>();
  std::size_t n = 1 + roll(r, max_states);
  for (std::size_t i = 0; i < n; ++i) m->add_state("s" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 1 + roll(r, std::min<std::size_t>(3, n));
    for (std::size_t j = 0; j < k; ++j) m->add_edge(static_cast<StateId>(i), static_cast<StateId>(roll(r, n)));
  }
  m->add_predicate("P", 1);
  m->add_predicate("R", 1);
  m->add_predicate("Q", 2);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = static_cast<StateId>(i);
    if (coin(r, 45)) m->add_tuple("P", {s});
    if (coin(r, 30)) m->add_tuple("R", {s});
    for (std::size_t j = 0; j < n; ++j)
      if (coin(r, 25)) m->add_tuple("Q", {s, static_cast<StateId>(j)});
  }
  m->set_initial(static_cast<StateId>(roll(r, n)));
  return m;
}

struct FormulaGen {
  Rng& r;
  std::size_t states;  // constants range over 0..states-1
  int next_var = 0;

  Term term(const std::vector<std::string>& scope) {
    if (!scope.empty() && coin(r, 80)) return Term::var(scope[roll(r, scope.size())]);
    return Term::state(static_cast<StateId>(roll(r, states)));
  }

  std::string binder(const std::vector<std::string>& scope) {
    // reuse a name in scope now and then to exercise shadowing
    if (!scope.empty() && coin(r, 15)) return scope[roll(r, scope.size())];
    return "x" + std::to_string(next_var++);
  }

  Formula atom(const std::vector<std::string>& scope) {
    bool neg = coin(r, 35);
    std::size_t pick = roll(r, 3);
    std::vector<Term> args{term(scope)};
    std::string p = pick == 0 ? "P" : pick == 1 ? "R" : "Q";
    if (p == "Q") args.push_back(term(scope));
    return neg ? Formula::neg_atom(p, args) : Formula::atom(p, args);
  }

  Formula gen(int depth, std::vector<std::string> scope) {
    if (depth == 0 || coin(r, 15)) {
      if (coin(r, 8)) return coin(r, 50) ? Formula::top() : Formula::bottom();
      return atom(scope);
    }
    std::size_t k = roll(r, 10);
    if (k < 2) {
      Formula l = gen(depth - 1, scope), rr = gen(depth - 1, scope);
      return k == 0 ? Formula::conj(l, rr) : Formula::disj(l, rr);
    }
    Term at = term(scope);
    if (k < 8) {
      std::string x = binder(scope);
      auto inner = scope;
      inner.push_back(x);
      Formula b = gen(depth - 1, inner);
      switch (k) {
        case 2: return Formula::ax(x, b, at);
        case 3: return Formula::ex(x, b, at);
        case 4: case 5: return Formula::af(x, b, at);
        default: return Formula::eg(x, b, at);
      }
    }
    std::string x = binder(scope), y = binder(scope);
    auto s1 = scope, s2 = scope;
    s1.push_back(x);
    s2.push_back(y);
    Formula b1 = gen(depth - 1, s1), b2 = gen(depth - 1, s2);
    return k == 8 ? Formula::ar(x, y, b1, b2, at) : Formula::eu(x, y, b1, b2, at);
  }
};

inline Formula random_formula(Rng& r, std::size_t states, int depth = 4) {
  FormulaGen g{r, states};
  return g.gen(depth, {});
}

// A one-variable non-temporal constraint over P and R.
inline Formula random_constraint(Rng& r) {
  auto lit = [&](const char* p) {
    return coin(r, 70) ? Formula::atom(p, {Term::var("s")}) : Formula::neg_atom(p, {Term::var("s")});
  };
  switch (roll(r, 4)) {
    case 0: return lit("P");
    case 1: return lit("R");
    case 2: return Formula::disj(lit("P"), lit("R"));
    default: return Formula::conj(lit("P"), lit("R"));
  }
}

}  // namespace sctl::testing
