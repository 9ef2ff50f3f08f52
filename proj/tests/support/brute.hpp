#pragma once

// Path-level semantics by exhaustive search, independent of the fixpoint
// oracle. Eventual behaviour of an infinite path is the set L of states it
// visits infinitely often; L is realisable iff it is strongly connected
// with every state having a successor inside L. Subsets are enumerated, so
// keep models tiny (<= 10 states).

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl::testing {

class Brute {
 public:
  // C: constraints with one free variable each, read at the path state
  Brute(const KripkeModel& m, std::vector<Formula> C = {}) : m_(m), C_(std::move(C)) {
    n_ = m.state_count();
    for (StateId s = 0; s < n_; ++s) succ_.push_back(m.next(s));
  }

  bool eval(const Formula& f, std::map<std::string, StateId> env = {}) const {
    auto at = [&](const Term& t) { return t.is_state() ? t.state_id() : env.at(t.name()); };
    auto body_at = [&](const Formula& b, const std::string& x, StateId s) {
      auto e = env;
      e[x] = s;
      return eval(b, e);
    };
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bottom: return false;
      case Op::Atom:
      case Op::NegAtom: {
        std::vector<StateId> args;
        for (const auto& a : f.args()) args.push_back(at(a));
        bool r = m_.eval_atom(f.pred(), args);
        return f.op() == Op::Atom ? r : !r;
      }
      case Op::And: return eval(f.lhs(), env) && eval(f.rhs(), env);
      case Op::Or: return eval(f.lhs(), env) || eval(f.rhs(), env);
      case Op::AX:
        for (StateId t : succ_[at(f.at())])
          if (!body_at(f.body(), f.binder(), t)) return false;
        return true;
      case Op::EX:
        for (StateId t : succ_[at(f.at())])
          if (body_at(f.body(), f.binder(), t)) return true;
        return false;
      case Op::EG: {
        auto ok = [&](StateId s) { return body_at(f.body(), f.binder(), s); };
        return exists_path(at(f.at()), ok, f.fair());
      }
      case Op::AF: {
        // no (fair) path avoiding the body forever
        auto bad = [&](StateId s) { return !body_at(f.body(), f.binder(), s); };
        return !exists_path(at(f.at()), bad, f.fair());
      }
      case Op::EU: {
        // s0..sk with body2 at sk and body1 before
        std::vector<char> seen(n_, 0);
        std::vector<StateId> stack{at(f.at())};
        while (!stack.empty()) {
          StateId s = stack.back();
          stack.pop_back();
          if (seen[s]) continue;
          seen[s] = 1;
          if (body_at(f.body2(), f.binder2(), s)) return true;
          if (body_at(f.body1(), f.binder(), s))
            for (StateId t : succ_[s]) stack.push_back(t);
        }
        return false;
      }
      case Op::AR: {
        // no s0..sk with body2 failing at sk and body1 failing before
        std::vector<char> seen(n_, 0);
        std::vector<StateId> stack{at(f.at())};
        while (!stack.empty()) {
          StateId s = stack.back();
          stack.pop_back();
          if (seen[s]) continue;
          seen[s] = 1;
          if (!body_at(f.body2(), f.binder2(), s)) return false;
          if (!body_at(f.body1(), f.binder(), s))
            for (StateId t : succ_[s]) stack.push_back(t);
        }
        return true;
      }
    }
    return false;
  }

 private:
  // Is there an infinite path from s through `ok` states only, fair when
  // asked? Enumerate candidate limit sets L.
  bool exists_path(StateId s, const std::function<bool(StateId)>& ok, bool fair) const {
    std::vector<char> good(n_);
    for (StateId i = 0; i < n_; ++i) good[i] = ok(i);
    if (!good[s]) return false;
    // reachable through good states
    std::vector<char> reach(n_, 0);
    std::vector<StateId> stack{s};
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      if (reach[u]) continue;
      reach[u] = 1;
      for (StateId t : succ_[u])
        if (good[t]) stack.push_back(t);
    }
    for (unsigned long mask = 1; mask < (1ul << n_); ++mask) {
      bool fits = true;
      for (StateId i = 0; i < n_ && fits; ++i)
        if ((mask >> i & 1) && (!good[i] || !reach[i])) fits = false;
      if (!fits || !limit_set(mask)) continue;
      if (!fair) return true;
      bool all = true;
      for (const auto& c : C_) {
        auto fv = free_vars(c);
        bool hit = false;
        for (StateId i = 0; i < n_ && !hit; ++i)
          if (mask >> i & 1) {
            std::map<std::string, StateId> e;
            if (!fv.empty()) e[*fv.begin()] = i;
            hit = eval(c, e);
          }
        all = all && hit;
      }
      if (all) return true;
    }
    return false;
  }

  bool limit_set(unsigned long mask) const {
    StateId first = 0;
    while (!(mask >> first & 1)) ++first;
    // strongly connected inside mask, and every member has an inside edge
    for (StateId u = 0; u < n_; ++u) {
      if (!(mask >> u & 1)) continue;
      bool inside = false;
      for (StateId t : succ_[u]) inside = inside || (mask >> t & 1);
      if (!inside) return false;
    }
    auto closure = [&](bool forward) {
      unsigned long seen = 1ul << first;
      bool grew = true;
      while (grew) {
        grew = false;
        for (StateId u = 0; u < n_; ++u)
          for (StateId t : succ_[u]) {
            if (!(mask >> u & 1) || !(mask >> t & 1)) continue;
            StateId from = forward ? u : t, to = forward ? t : u;
            if ((seen >> from & 1) && !(seen >> to & 1)) {
              seen |= 1ul << to;
              grew = true;
            }
          }
      }
      return seen;
    };
    return closure(true) == mask && closure(false) == mask;
  }

  const KripkeModel& m_;
  std::vector<Formula> C_;
  std::size_t n_ = 0;
  std::vector<std::vector<StateId>> succ_;
};

}  // namespace sctl::testing
