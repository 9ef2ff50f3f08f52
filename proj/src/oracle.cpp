#include "sctl/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "sctl/error.hpp"

namespace sctl {

namespace {

using Set = std::vector<char>;

class Oracle {
 public:
  Oracle(const KripkeModel& m, std::vector<Formula> C, std::vector<StateId> roots, std::size_t limit)
      : m_(m), C_(std::move(C)) {
    std::deque<StateId> q;
    auto visit = [&](StateId s) {
      if (dense_.count(s)) return;
      if (states_.size() >= limit)
        throw ResourceError("state space exceeds " + std::to_string(limit) + " states");
      dense_[s] = states_.size();
      states_.push_back(s);
      q.push_back(s);
    };
    visit(m.initial());
    for (StateId r : roots) visit(r);
    while (!q.empty()) {
      StateId s = q.front();
      q.pop_front();
      for (StateId t : m.next(s)) visit(t);
    }
    succ_.resize(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i)
      for (StateId t : m.next(states_[i])) succ_[i].push_back(dense_.at(t));
  }

  std::size_t n() const { return states_.size(); }
  StateId state(std::size_t i) const { return states_[i]; }

  bool eval(const Formula& f, const Env& env) {
    auto term = [&](const Term& t) -> StateId {
      if (t.is_state()) return t.state_id();
      auto it = env.find(t.name());
      if (it == env.end()) throw InputError("unbound variable " + t.name());
      return it->second;
    };
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bottom: return false;
      case Op::Atom:
      case Op::NegAtom: {
        std::vector<StateId> args;
        for (const auto& t : f.args()) args.push_back(term(t));
        bool r = m_.eval_atom(f.pred(), args);
        return f.op() == Op::Atom ? r : !r;
      }
      case Op::And: return eval(f.lhs(), env) && eval(f.rhs(), env);
      case Op::Or: return eval(f.lhs(), env) || eval(f.rhs(), env);
      default: {
        StateId s = term(f.at());
        return modal_set(f, env)[index(s)];
      }
    }
  }

  Set fair_set() {
    Set all(n(), 1);
    return fair_eg(all);
  }

 private:
  std::size_t index(StateId s) {
    auto it = dense_.find(s);
    if (it == dense_.end()) throw InputError("state outside the explored space");
    return it->second;
  }

  // truth of body under env + {x := s} for every state s
  Set body_set(const Formula& body, const std::string& x, const Env& env) {
    Set out(n());
    Env e = env;
    for (std::size_t i = 0; i < n(); ++i) {
      e[x] = states_[i];
      out[i] = eval(body, e);
    }
    return out;
  }

  const Set& modal_set(const Formula& f, const Env& env) {
    // key: the node plus the bindings of the variables the modality reads
    std::set<std::string> fv;
    auto add = [&](const Formula& b, const std::string& x) {
      auto v = free_vars(b);
      v.erase(x);
      fv.insert(v.begin(), v.end());
    };
    add(f.body1(), f.binder());
    if (is_binary_modal(f.op())) add(f.body2(), f.binder2());
    std::vector<StateId> key;
    for (const auto& v : fv) key.push_back(env.at(v));
    auto& slot = memo_[f.node()];
    auto it = slot.find(key);
    if (it != slot.end()) return it->second;

    Set b1 = body_set(f.body1(), f.binder(), env);
    Set out(n());
    switch (f.op()) {
      case Op::AX:
      case Op::EX:
        for (std::size_t i = 0; i < n(); ++i) {
          bool all = true, any = false;
          for (auto j : succ_[i]) {
            all = all && b1[j];
            any = any || b1[j];
          }
          out[i] = f.op() == Op::AX ? all : any;
        }
        break;
      case Op::AF:
        if (f.fair()) {
          Set neg(n());
          for (std::size_t i = 0; i < n(); ++i) neg[i] = !b1[i];
          Set eg = fair_eg(neg);
          for (std::size_t i = 0; i < n(); ++i) out[i] = !eg[i];
        } else {
          out = lfp([&](const Set& z, std::size_t i) {
            if (b1[i]) return true;
            for (auto j : succ_[i])
              if (!z[j]) return false;
            return true;
          });
        }
        break;
      case Op::EG:
        if (f.fair()) {
          out = fair_eg(b1);
        } else {
          out = gfp([&](const Set& z, std::size_t i) {
            if (!b1[i]) return false;
            for (auto j : succ_[i])
              if (z[j]) return true;
            return false;
          });
        }
        break;
      case Op::AR: {
        Set b2 = body_set(f.body2(), f.binder2(), env);
        out = gfp([&](const Set& z, std::size_t i) {
          if (!b2[i]) return false;
          if (b1[i]) return true;
          for (auto j : succ_[i])
            if (!z[j]) return false;
          return true;
        });
        break;
      }
      case Op::EU: {
        Set b2 = body_set(f.body2(), f.binder2(), env);
        out = lfp([&](const Set& z, std::size_t i) {
          if (b2[i]) return true;
          if (!b1[i]) return false;
          for (auto j : succ_[i])
            if (z[j]) return true;
          return false;
        });
        break;
      }
      default:
        break;
    }
    return slot.emplace(std::move(key), std::move(out)).first->second;
  }

  template <class F>
  Set lfp(F step) {
    Set z(n(), 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n(); ++i)
        if (!z[i] && step(z, i)) z[i] = 1, changed = true;
    }
    return z;
  }

  template <class F>
  Set gfp(F step) {
    Set z(n(), 1);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n(); ++i)
        if (z[i] && !step(z, i)) z[i] = 0, changed = true;
    }
    return z;
  }

  bool constraint(std::size_t c, std::size_t i) {
    const Formula& f = C_[c];
    auto fv = free_vars(f);
    Env e;
    if (!fv.empty()) e[*fv.begin()] = states_[i];
    return eval(f, e);
  }

  // States in B with a path inside B reaching a nontrivial SCC of the
  // B-subgraph that meets every constraint.
  Set fair_eg(const Set& B) {
    std::vector<int> comp(n(), -1), low(n()), num(n(), -1);
    std::vector<std::size_t> stack;
    std::vector<char> on(n(), 0);
    int counter = 0, ncomp = 0;
    std::function<void(std::size_t)> tarjan = [&](std::size_t v) {
      num[v] = low[v] = counter++;
      stack.push_back(v);
      on[v] = 1;
      for (auto w : succ_[v]) {
        if (!B[w]) continue;
        if (num[w] < 0) {
          tarjan(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on[w]) {
          low[v] = std::min(low[v], num[w]);
        }
      }
      if (low[v] == num[v]) {
        for (;;) {
          auto w = stack.back();
          stack.pop_back();
          on[w] = 0;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
    };
    for (std::size_t v = 0; v < n(); ++v)
      if (B[v] && num[v] < 0) tarjan(v);

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(ncomp));
    for (std::size_t v = 0; v < n(); ++v)
      if (B[v]) members[static_cast<std::size_t>(comp[v])].push_back(v);
    Set z(n(), 0);
    std::vector<std::size_t> work;
    for (const auto& mem : members) {
      bool nontrivial = mem.size() > 1;
      if (!nontrivial)
        for (auto w : succ_[mem[0]]) nontrivial = nontrivial || w == mem[0];
      if (!nontrivial) continue;
      bool ok = true;
      for (std::size_t c = 0; c < C_.size() && ok; ++c) {
        bool seen = false;
        for (auto v : mem) seen = seen || constraint(c, v);
        ok = seen;
      }
      if (!ok) continue;
      for (auto v : mem) {
        z[v] = 1;
        work.push_back(v);
      }
    }
    // backward closure inside B
    std::vector<std::vector<std::size_t>> pred(n());
    for (std::size_t v = 0; v < n(); ++v)
      for (auto w : succ_[v]) pred[w].push_back(v);
    while (!work.empty()) {
      auto v = work.back();
      work.pop_back();
      for (auto u : pred[v])
        if (B[u] && !z[u]) z[u] = 1, work.push_back(u);
    }
    return z;
  }

  const KripkeModel& m_;
  std::vector<Formula> C_;
  std::vector<StateId> states_;
  std::unordered_map<StateId, std::size_t> dense_;
  std::vector<std::vector<std::size_t>> succ_;
  std::unordered_map<const Formula::Node*, std::map<std::vector<StateId>, Set>> memo_;
};

void collect_states(const Formula& f, std::vector<StateId>& out) {
  if (!f) return;
  for (const auto& t : f.args())
    if (t.is_state()) out.push_back(t.state_id());
  if (is_modal(f.op()) && f.at().is_state()) out.push_back(f.at().state_id());
  if (f.op() == Op::And || f.op() == Op::Or || is_modal(f.op())) collect_states(f.lhs(), out);
  if (f.op() == Op::And || f.op() == Op::Or || is_binary_modal(f.op())) collect_states(f.rhs(), out);
}

std::vector<StateId> roots_of(const Formula& phi, const Env& env) {
  std::vector<StateId> r;
  collect_states(phi, r);
  for (const auto& [k, v] : env) r.push_back(v);
  return r;
}

}  // namespace

bool valid(const KripkeModel& m, const Formula& phi, const Env& env, const OracleOptions& o) {
  Oracle orc(m, {}, roots_of(phi, env), o.state_limit);
  return orc.eval(phi, env);
}

bool valid_fair(const KripkeModel& m, const Formula& phi, const std::vector<Formula>& C,
                const Env& env, const OracleOptions& o) {
  for (const auto& c : C)
    if (free_vars(c).size() > 1) throw InputError("fairness constraint " + to_string(c) + " has more than one free variable");
  Oracle orc(m, C, roots_of(phi, env), o.state_limit);
  return orc.eval(fairify(phi), env);
}

std::vector<StateId> fair_states(const KripkeModel& m, const std::vector<Formula>& C,
                                 const OracleOptions& o) {
  Oracle orc(m, C, {}, o.state_limit);
  Set z = orc.fair_set();
  std::vector<StateId> out;
  for (std::size_t i = 0; i < orc.n(); ++i)
    if (z[i]) out.push_back(orc.state(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sctl
