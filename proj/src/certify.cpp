#include "sctl/certify.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "elab.hpp"
#include "search.hpp"
#include "sctl/error.hpp"

namespace sctl {

using detail::ClosureId;
using detail::Goal;

namespace {

constexpr const char* kRuleNames[] = {
    "atom-R", "neg-R",   "top-R",       "and-R",       "or-R1",    "or-R2",
    "AX-R",   "EX-R",    "AF-R1",       "AF-R2",       "EG-R",     "EG-merge",
    "AR-R-unfold", "AR-R-close", "AR-merge", "EU-R1", "EU-R2"};

}  // namespace

const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(const std::string& s) {
  for (int i = 0; i < static_cast<int>(std::size(kRuleNames)); ++i)
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Replay. Mirrors the recursive engine, consuming one event per rewrite and
// numbering goals the way the search creates them: bodies first, then the
// successors from last to first.

namespace {

class Replay {
 public:
  Replay(const KripkeModel& m, const Formula& phi, const Trace& t) : m_(m), t_(t), el_(m, phi) {}

  Proof run() {
    Goal root{ct_.intern(0, nullptr, 0), el_.root_state(), 0};
    int id = next_id_++;
    auto r = solve(root, id);
    if (pos_ != t_.events.size()) throw TraceMismatch("trace has events past the end of the search");
    if (!r.v) throw PreconditionError("the trace is of a run that did not prove the formula");
    if (ct_.size() != t_.closure_node.size()) throw TraceMismatch("closure table size differs");
    for (ClosureId c = 0; c < ct_.size(); ++c) {
      auto env = ct_.env(c);
      if (static_cast<std::uint32_t>(ct_.node(c)) != t_.closure_node[c] ||
          !std::equal(env.begin(), env.end(), t_.closure_env[c].begin(), t_.closure_env[c].end()))
        throw TraceMismatch("closure " + std::to_string(c) + " differs");
    }
    return r.p;
  }

 private:
  struct R {
    bool v = false;
    Proof p;
  };

  static std::uint64_t key(const Goal& g) { return (static_cast<std::uint64_t>(g.c) << 32) | g.s; }

  const TraceEvent& peek() {
    if (pos_ >= t_.events.size()) throw TraceMismatch("trace ended before the search did");
    return t_.events[pos_];
  }

  const TraceEvent& expect(EventKind k, const Goal& g) {
    const TraceEvent& e = peek();
    if (e.kind != k || e.closure != g.c || e.state != g.s || e.phase != g.phase)
      throw TraceMismatch("event " + std::to_string(pos_) + ": expected " + event_name(k) + " on closure " +
                          std::to_string(g.c) + " at state " + std::to_string(g.s) + ", found " +
                          event_name(e.kind) + " on closure " + std::to_string(e.closure) + " at state " +
                          std::to_string(e.state));
    ++pos_;
    return e;
  }

  bool at(EventKind k, const Goal& g) {
    const TraceEvent& e = peek();
    return e.kind == k && e.closure == g.c && e.state == g.s;
  }

  Proof node(Rule r, const Goal& g, std::vector<Proof> kids, int id) {
    auto n = std::make_shared<ProofNode>();
    n->rule = r;
    n->goal = detail::materialize(el_, ct_, g);
    n->children = std::move(kids);
    n->id = id;
    return n;
  }

  R memo_hit(const Goal& g) {
    const auto& e = expect(EventKind::MemoHit, g);
    if (!e.result) return {};
    auto it = proved_.find(key(g));
    if (it == proved_.end()) throw TraceMismatch("memo hit on a goal never proved");
    return {true, it->second};
  }

  std::vector<int> successor_ids(std::size_t n) {
    std::vector<int> ids(n);
    for (std::size_t i = n; i-- > 0;) ids[i] = next_id_++;
    return ids;
  }

  R solve(const Goal& g, int id) {
    const auto& e = el_.node(ct_.node(g.c));
    switch (e.op) {
      case Op::Top:
        expect(EventKind::Top, g);
        return {true, node(Rule::TopR, g, {}, id)};
      case Op::Bottom:
        expect(EventKind::Bottom, g);
        return {};
      case Op::Atom:
      case Op::NegAtom: {
        const auto& ev = expect(e.op == Op::Atom ? EventKind::Atom : EventKind::NegAtom, g);
        auto envv = ct_.env(g.c);
        std::vector<StateId> args;
        for (const auto& a : e.args) args.push_back(a.is_const ? a.v : envv[a.v]);
        bool r = m_.eval_atom(e.pred, args.data(), args.size());
        if (e.op == Op::NegAtom) r = !r;
        if (r != ev.result) throw TraceMismatch("atom result differs from the model");
        if (!r) return {};
        return {true, node(e.op == Op::Atom ? Rule::AtomR : Rule::NegR, g, {}, id)};
      }
      case Op::And:
      case Op::Or: {
        expect(e.op == Op::And ? EventKind::And : EventKind::Or, g);
        Goal l = detail::child_goal(el_, ct_, g.c, 0, 0), r = detail::child_goal(el_, ct_, g.c, 1, 0);
        int il = next_id_++, ir = next_id_++;
        R a = solve(l, il);
        if (e.op == Op::And) {
          if (!a.v) return {};
          R b = solve(r, ir);
          if (!b.v) return {};
          return {true, node(Rule::AndR, g, {a.p, b.p}, id)};
        }
        if (a.v) return {true, node(Rule::OrR1, g, {a.p}, id)};
        R b = solve(r, ir);
        if (!b.v) return {};
        return {true, node(Rule::OrR2, g, {b.p}, id)};
      }
      case Op::AX:
      case Op::EX: {
        if (at(EventKind::MemoHit, g)) return memo_hit(g);
        expect(e.op == Op::AX ? EventKind::AX : EventKind::EX, g);
        const auto& succ = m_.next(g.s);
        std::vector<Goal> kids;
        for (StateId s : succ) kids.push_back(detail::child_goal(el_, ct_, g.c, 0, s));
        auto ids = successor_ids(kids.size());
        R out;
        if (e.op == Op::AX) {
          std::vector<Proof> ps;
          bool ok = true;
          for (std::size_t i = 0; i < kids.size() && ok; ++i) {
            R r = solve(kids[i], ids[i]);
            ok = r.v;
            ps.push_back(r.p);
          }
          if (ok) out = {true, node(Rule::AXR, g, std::move(ps), id)};
        } else {
          for (std::size_t i = 0; i < kids.size(); ++i) {
            R r = solve(kids[i], ids[i]);
            if (r.v) {
              out = {true, node(Rule::EXR, g, {r.p}, id)};
              break;
            }
          }
        }
        if (out.v) proved_[key(g)] = out.p;
        return out;
      }
      default:
        return fixpoint(g, id, e);
    }
  }

  R fixpoint(const Goal& g, int id, const detail::ENode& e) {
    auto& st = stacks_[g.c];
    if (at(EventKind::Merge, g)) {
      const auto& ev = expect(EventKind::Merge, g);
      if (!inchain_.count(key(g))) throw TraceMismatch("merge on a state outside Γ");
      bool expected = e.op == Op::EG || e.op == Op::AR;
      if (ev.result != expected) throw TraceMismatch("merge result differs from the rule");
      if (!ev.result) return {};
      return {true, node(e.op == Op::EG ? Rule::EGMerge : Rule::ARMerge, g, {}, id)};
    }
    if (at(EventKind::MemoHit, g)) return memo_hit(g);
    expect(EventKind::Unfold, g);
    Goal b1 = detail::child_goal(el_, ct_, g.c, 0, g.s);
    int i1 = next_id_++, i2 = -1;
    Goal b2;
    if (e.op == Op::AR || e.op == Op::EU) {
      b2 = detail::child_goal(el_, ct_, g.c, 1, g.s);
      i2 = next_id_++;
    }
    std::vector<Goal> kids;
    for (StateId s : m_.next(g.s)) kids.push_back(Goal{g.c, s, 0});
    auto ids = successor_ids(kids.size());

    st.push_back(g.s);
    ++inchain_[key(g)];
    auto all = [&](std::vector<Proof>& ps) {
      for (std::size_t i = 0; i < kids.size(); ++i) {
        R r = solve(kids[i], ids[i]);
        if (!r.v) return false;
        ps.push_back(r.p);
      }
      return true;
    };
    auto any = [&]() -> R {
      for (std::size_t i = 0; i < kids.size(); ++i) {
        R r = solve(kids[i], ids[i]);
        if (r.v) return r;
      }
      return {};
    };
    R out;
    switch (e.op) {
      case Op::AF: {
        R r = solve(b1, i1);
        if (r.v) {
          out = {true, node(Rule::AFR1, g, {r.p}, id)};
        } else {
          std::vector<Proof> ps;
          if (all(ps)) out = {true, node(Rule::AFR2, g, std::move(ps), id)};
        }
        break;
      }
      case Op::EG: {
        R r = solve(b1, i1);
        if (r.v) {
          R s = any();
          if (s.v) out = {true, node(Rule::EGR, g, {r.p, s.p}, id)};
        }
        break;
      }
      case Op::AR: {
        R r2 = solve(b2, i2);
        if (!r2.v) break;
        R r1 = solve(b1, i1);
        if (r1.v) {
          out = {true, node(Rule::ARClose, g, {r1.p, r2.p}, id)};
        } else {
          std::vector<Proof> ps{r2.p};
          if (all(ps)) out = {true, node(Rule::ARUnfold, g, std::move(ps), id)};
        }
        break;
      }
      default: {
        R r2 = solve(b2, i2);
        if (r2.v) {
          out = {true, node(Rule::EUR1, g, {r2.p}, id)};
          break;
        }
        R r1 = solve(b1, i1);
        if (!r1.v) break;
        R s = any();
        if (s.v) out = {true, node(Rule::EUR2, g, {r1.p, s.p}, id)};
        break;
      }
    }
    st.pop_back();
    if (--inchain_[key(g)] == 0) inchain_.erase(key(g));
    if (out.v) proved_[key(g)] = out.p;
    return out;
  }

  const KripkeModel& m_;
  const Trace& t_;
  detail::Elaboration el_;
  detail::ClosureTable ct_;
  std::size_t pos_ = 0;
  int next_id_ = 0;
  std::unordered_map<std::uint64_t, Proof> proved_;
  std::unordered_map<ClosureId, std::vector<StateId>> stacks_;
  std::unordered_map<std::uint64_t, int> inchain_;
};

bool has_fair(const Formula& f) {
  if (is_modal(f.op())) {
    if (f.fair()) return true;
    if (has_fair(f.body1())) return true;
    return is_binary_modal(f.op()) && has_fair(f.body2());
  }
  if (f.op() == Op::And || f.op() == Op::Or) return has_fair(f.lhs()) || has_fair(f.rhs());
  return false;
}

}  // namespace

Proof reconstruct_proof(const KripkeModel& m, const Formula& phi, const Trace& trace) {
  if (!trace.complete) throw PreconditionError("trace is incomplete; record it in full mode");
  if (!trace.closed_memo) throw PreconditionError("trace of a run with an open memo; set closed_memo");
  if (!trace.formula || !identical(trace.formula, phi))
    throw TraceMismatch("trace was recorded for a different formula");
  if (has_fair(phi)) throw PreconditionError("certificates are not produced under fairness");
  Proof out;
  detail::run_deep([&] {
    Replay r(m, phi, trace);
    out = r.run();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Checking. Each node is checked once (by address); the result carries the
// merge leaves below it not yet matched by an unfolding ancestor.

namespace {

struct AlphaHash {
  std::size_t operator()(const Formula& f) const { return alpha_hash(f); }
};
struct AlphaEq {
  bool operator()(const Formula& a, const Formula& b) const { return alpha_equal(a, b); }
};
using FreeSet = std::unordered_set<Formula, AlphaHash, AlphaEq>;

struct Failure {
  std::vector<std::size_t> path;  // reversed while unwinding
  std::string reason;
};

class Checker {
 public:
  explicit Checker(const KripkeModel& m) : m_(m) {}

  // nullptr free set means "none"
  std::shared_ptr<const FreeSet> check(const ProofNode* n) {
    auto it = done_.find(n);
    if (it != done_.end()) return it->second;
    auto r = check_node(n);
    done_.emplace(n, r);
    return r;
  }

  std::optional<Failure> failure;

  // Path to a merge leaf whose goal is in `free`.
  bool find_merge(const ProofNode* n, const FreeSet& free, std::vector<std::size_t>& path,
                  std::unordered_set<const ProofNode*>& seen) {
    if (!seen.insert(n).second) return false;
    if ((n->rule == Rule::EGMerge || n->rule == Rule::ARMerge) && free.count(n->goal)) return true;
    for (std::size_t i = 0; i < n->children.size(); ++i) {
      path.push_back(i);
      if (n->children[i] && find_merge(n->children[i].get(), free, path, seen)) return true;
      path.pop_back();
    }
    return false;
  }

 private:
  std::shared_ptr<const FreeSet> fail(std::string reason) {
    failure = Failure{{}, std::move(reason)};
    return nullptr;
  }

  bool state_ok(StateId s) const { return s < m_.state_count(); }

  bool term_states_ok(const Formula& f) const {
    switch (f.op()) {
      case Op::Atom:
      case Op::NegAtom:
        for (const auto& t : f.args())
          if (!t.is_state() || !state_ok(t.state_id())) return false;
        return true;
      case Op::And:
      case Op::Or:
        return term_states_ok(f.lhs()) && term_states_ok(f.rhs());
      default:
        return true;
    }
  }

  std::shared_ptr<const FreeSet> check_node(const ProofNode* n) {
    const Formula& g = n->goal;
    if (!g) return fail("node without a goal");
    if (!is_closed(g)) return fail("goal is not closed");
    if (is_modal(g.op()) && (!g.at().is_state() || !state_ok(g.at().state_id())))
      return fail("goal is evaluated at an unknown state");
    if (is_modal(g.op()) && g.fair()) return fail("fairness-constrained goals have no rules");
    for (const auto& c : n->children)
      if (!c) return fail("missing premise");
    const auto& kids = n->children;
    // premises first, so a broken node is reported where it is rather than
    // as a mismatch one level up (results are cached, the reuse below is free)
    for (std::size_t i = 0; i < kids.size(); ++i) {
      check(kids[i].get());
      if (failure) return descend(i);
    }
    auto arity = [&](std::size_t k) { return kids.size() == k; };
    auto goal_is = [&](std::size_t i, const Formula& want) { return alpha_equal(kids[i]->goal, want); };
    auto inst = [&](const Formula& body, const std::string& x, StateId s) {
      return substitute(Term::state(s), x, body);
    };
    StateId s = is_modal(g.op()) ? g.at().state_id() : 0;

    // premises whose merges pass upward: successor premises of fixpoints
    std::vector<std::size_t> chain;
    std::vector<std::size_t> bodies;

    switch (n->rule) {
      case Rule::TopR:
        if (g.op() != Op::Top || !arity(0)) return fail("top-R needs goal TRUE and no premise");
        break;
      case Rule::AtomR:
      case Rule::NegR: {
        Op want = n->rule == Rule::AtomR ? Op::Atom : Op::NegAtom;
        if (g.op() != want || !arity(0)) return fail(std::string(rule_name(n->rule)) + " does not match the goal");
        if (!term_states_ok(g)) return fail("atom argument is not a known state");
        int p = m_.predicate_index(g.pred());
        if (p < 0 || m_.arity(p) != static_cast<int>(g.args().size())) return fail("unknown predicate or arity mismatch");
        std::vector<StateId> args;
        for (const auto& t : g.args()) args.push_back(t.state_id());
        bool in = m_.eval_atom(p, args.data(), args.size());
        if (in != (want == Op::Atom)) return fail(want == Op::Atom ? "tuple not in the predicate" : "tuple is in the predicate");
        break;
      }
      case Rule::AndR:
        if (g.op() != Op::And || !arity(2) || !goal_is(0, g.lhs()) || !goal_is(1, g.rhs()))
          return fail("and-R premises do not match the conjuncts");
        bodies = {0, 1};
        break;
      case Rule::OrR1:
      case Rule::OrR2:
        if (g.op() != Op::Or || !arity(1) || !goal_is(0, n->rule == Rule::OrR1 ? g.lhs() : g.rhs()))
          return fail("or-R premise does not match the disjunct");
        bodies = {0};
        break;
      case Rule::AXR:
      case Rule::AFR2: {
        Op want = n->rule == Rule::AXR ? Op::AX : Op::AF;
        if (g.op() != want) return fail(std::string(rule_name(n->rule)) + " does not match the goal");
        const auto& succ = m_.next(s);
        if (kids.size() != succ.size()) return fail("premises do not cover the successors");
        for (std::size_t i = 0; i < succ.size(); ++i) {
          Formula w = want == Op::AX ? inst(g.body(), g.binder(), succ[i]) : g.with_at(Term::state(succ[i]));
          if (!goal_is(i, w)) return fail("premise does not match successor " + std::to_string(i));
          bodies.push_back(i);
        }
        break;
      }
      case Rule::EXR: {
        if (g.op() != Op::EX || !arity(1)) return fail("EX-R needs one premise");
        bool ok = false;
        for (StateId t : m_.next(s)) ok = ok || goal_is(0, inst(g.body(), g.binder(), t));
        if (!ok) return fail("EX-R premise is not the body at a successor");
        bodies = {0};
        break;
      }
      case Rule::AFR1:
        if (g.op() != Op::AF || !arity(1) || !goal_is(0, inst(g.body(), g.binder(), s)))
          return fail("AF-R1 premise is not the body at the state");
        bodies = {0};
        break;
      case Rule::EGR: {
        if (g.op() != Op::EG || !arity(2) || !goal_is(0, inst(g.body(), g.binder(), s)))
          return fail("EG-R first premise is not the body at the state");
        bool ok = false;
        for (StateId t : m_.next(s)) ok = ok || goal_is(1, g.with_at(Term::state(t)));
        if (!ok) return fail("EG-R second premise is not at a successor");
        bodies = {0};
        chain = {1};
        break;
      }
      case Rule::ARClose:
        if (g.op() != Op::AR || !arity(2) || !goal_is(0, inst(g.body1(), g.binder(), s)) ||
            !goal_is(1, inst(g.body2(), g.binder2(), s)))
          return fail("AR-R-close premises do not match the bodies");
        bodies = {0, 1};
        break;
      case Rule::ARUnfold: {
        if (g.op() != Op::AR || kids.empty() || !goal_is(0, inst(g.body2(), g.binder2(), s)))
          return fail("AR-R-unfold first premise is not the second body at the state");
        const auto& succ = m_.next(s);
        if (kids.size() != succ.size() + 1) return fail("premises do not cover the successors");
        for (std::size_t i = 0; i < succ.size(); ++i) {
          if (!goal_is(i + 1, g.with_at(Term::state(succ[i]))))
            return fail("premise does not match successor " + std::to_string(i));
          chain.push_back(i + 1);
        }
        bodies = {0};
        break;
      }
      case Rule::EUR1:
        if (g.op() != Op::EU || !arity(1) || !goal_is(0, inst(g.body2(), g.binder2(), s)))
          return fail("EU-R1 premise is not the second body at the state");
        bodies = {0};
        break;
      case Rule::EUR2: {
        if (g.op() != Op::EU || !arity(2) || !goal_is(0, inst(g.body1(), g.binder(), s)))
          return fail("EU-R2 first premise is not the first body at the state");
        bool ok = false;
        for (StateId t : m_.next(s)) ok = ok || goal_is(1, g.with_at(Term::state(t)));
        if (!ok) return fail("EU-R2 second premise is not at a successor");
        bodies = {0, 1};
        break;
      }
      case Rule::EGMerge:
      case Rule::ARMerge: {
        Op want = n->rule == Rule::EGMerge ? Op::EG : Op::AR;
        if (g.op() != want || !arity(0)) return fail(std::string(rule_name(n->rule)) + " does not match the goal");
        auto out = std::make_shared<FreeSet>();
        out->insert(g);
        return out;
      }
    }

    for (std::size_t i : bodies) {
      auto r = check(kids[i].get());
      if (failure) return descend(i);
      if (r && !r->empty()) return dangling(i);
    }
    std::shared_ptr<FreeSet> out;
    for (std::size_t i : chain) {
      auto r = check(kids[i].get());
      if (failure) return descend(i);
      if (r && !r->empty()) {
        if (!out) out = std::make_shared<FreeSet>();
        out->insert(r->begin(), r->end());
      }
    }
    if (out && (n->rule == Rule::EGR || n->rule == Rule::ARUnfold)) out->erase(g);
    if (out && out->empty()) out.reset();
    return out;
  }

  std::shared_ptr<const FreeSet> descend(std::size_t i) {
    failure->path.push_back(i);
    return nullptr;
  }

  // A premise that must be self-contained has an unmatched merge; the leaf
  // itself is located afterwards from the root (see check_proof).
  std::shared_ptr<const FreeSet> dangling(std::size_t i) {
    failure = Failure{{i}, "merge without prior occurrence"};
    return nullptr;
  }

  const KripkeModel& m_;
  std::unordered_map<const ProofNode*, std::shared_ptr<const FreeSet>> done_;
};

}  // namespace

CheckReport check_proof(const KripkeModel& m, const Proof& p, const std::optional<Formula>& expected) {
  CheckReport rep;
  if (!p) {
    rep.valid = false;
    rep.reason = "empty proof";
    return rep;
  }
  if (expected && !alpha_equal(p->goal, *expected)) {
    rep.valid = false;
    rep.reason = "conclusion differs from the expected formula";
    return rep;
  }
  detail::run_deep([&] {
    Checker c(m);
    auto free = c.check(p.get());
    if (c.failure) {
      rep.valid = false;
      rep.path.assign(c.failure->path.rbegin(), c.failure->path.rend());
      rep.reason = c.failure->reason;
      if (rep.reason == "merge without prior occurrence") {
        // walk to the premise, then on to an unmatched merge leaf below it
        const ProofNode* n = p.get();
        for (auto i : rep.path) n = n->children[i].get();
        Checker inner(m);
        auto leftover = inner.check(n);
        if (leftover) {
          std::vector<std::size_t> sub;
          std::unordered_set<const ProofNode*> seen;
          if (c.find_merge(n, *leftover, sub, seen)) rep.path.insert(rep.path.end(), sub.begin(), sub.end());
        }
      }
      return;
    }
    if (free && !free->empty()) {
      rep.valid = false;
      rep.reason = "merge without prior occurrence";
      std::unordered_set<const ProofNode*> seen;
      c.find_merge(p.get(), *free, rep.path, seen);
    }
  });
  return rep;
}

// ---------------------------------------------------------------------------

Proof certificate(const KripkeModel& m, const Formula& phi, EngineOptions opts) {
  opts.trace = TraceMode::Full;
  opts.closed_memo = true;
  Verdict v = prove(m, phi, opts);
  if (!v.provable) throw PreconditionError("formula does not hold; ask for a counterexample");
  return reconstruct_proof(m, phi, v.trace);
}

Proof counterexample(const KripkeModel& m, const Formula& phi, EngineOptions opts) {
  EngineOptions quiet = opts;
  quiet.trace = TraceMode::Off;
  if (prove(m, phi, quiet).provable) throw PreconditionError("formula holds; it has no counterexample");
  Formula dual = dualize(phi);
  opts.trace = TraceMode::Full;
  opts.closed_memo = true;
  Verdict v = prove(m, dual, opts);
  if (!v.provable) throw Error("internal inconsistency: neither the formula nor its dual is provable");
  return reconstruct_proof(m, dual, v.trace);
}

bool proof_equal(const Proof& a, const Proof& b) {
  std::map<std::pair<const ProofNode*, const ProofNode*>, bool> seen;
  std::function<bool(const ProofNode*, const ProofNode*)> eq = [&](const ProofNode* x, const ProofNode* y) {
    if (x == y) return true;
    if (!x || !y) return false;
    auto k = std::make_pair(x, y);
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    bool r = x->rule == y->rule && x->id == y->id && identical(x->goal, y->goal) &&
             x->children.size() == y->children.size();
    for (std::size_t i = 0; r && i < x->children.size(); ++i) r = eq(x->children[i].get(), y->children[i].get());
    seen[k] = r;
    return r;
  };
  bool r = false;
  detail::run_deep([&] { r = eq(a.get(), b.get()); });
  return r;
}

std::size_t proof_size(const Proof& p) {
  std::unordered_set<const ProofNode*> seen;
  std::vector<const ProofNode*> st;
  if (p) st.push_back(p.get());
  while (!st.empty()) {
    auto n = st.back();
    st.pop_back();
    if (!n || !seen.insert(n).second) continue;
    for (const auto& c : n->children) st.push_back(c.get());
  }
  return seen.size();
}


// ---------------------------------------------------------------------------
// Rendering

namespace {

bool successor_premise(Rule r, std::size_t i) {
  switch (r) {
    case Rule::AFR2: return true;
    case Rule::EGR:
    case Rule::EUR2: return i == 1;
    case Rule::ARUnfold: return i >= 1;
    default: return false;
  }
}

// Every distinct node once, depth first, children in order.
std::vector<const ProofNode*> collect(const Proof& p) {
  std::vector<const ProofNode*> order;
  std::unordered_set<const ProofNode*> seen;
  std::vector<std::pair<const ProofNode*, std::size_t>> st;
  if (p) {
    st.push_back({p.get(), 0});
    seen.insert(p.get());
  }
  while (!st.empty()) {
    auto& [n, i] = st.back();
    if (i < n->children.size()) {
      const ProofNode* c = n->children[i++].get();
      if (c && seen.insert(c).second) st.push_back({c, 0});
    } else {
      order.push_back(n);  // post-order
      st.pop_back();
    }
  }
  return order;
}

std::string render_text(const KripkeModel& m, const Proof& p) {
  auto nodes = collect(p);
  // display numbers: keep the recorded id unless missing or taken
  std::unordered_map<const ProofNode*, long> num;
  std::unordered_set<long> used;
  long top = -1;
  for (auto n : nodes) top = std::max<long>(top, n->id);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const ProofNode* n = *it;
    if (n->id >= 0 && used.insert(n->id).second) num[n] = n->id;
  }
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
    if (!num.count(*it)) num[*it] = ++top;

  StateNamer namer = [&](StateId s) { return m.state_name(s); };
  std::string out;
  std::unordered_map<const ProofNode*, std::vector<StateId>> gamma;
  std::unordered_set<const ProofNode*> queued;
  std::deque<const ProofNode*> q;
  if (p) {
    q.push_back(p.get());
    queued.insert(p.get());
    gamma[p.get()] = {};
  }
  while (!q.empty()) {
    const ProofNode* n = q.front();
    q.pop_front();
    std::vector<std::pair<long, std::size_t>> kids;
    for (std::size_t i = 0; i < n->children.size(); ++i)
      if (n->children[i]) kids.push_back({num[n->children[i].get()], i});
    std::stable_sort(kids.begin(), kids.end(), [](auto& a, auto& b) { return a.first > b.first; });

    const auto& g = gamma[n];
    std::string label = std::to_string(num[n]) + ":";
    if (g.empty()) {
      out += label + " |- ";
    } else {
      while (label.size() < 3) label += ' ';
      out += label;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += " \n   ";
        out += m.state_name(g[i]);
      }
      out += "\n|- ";
    }
    out += to_string(n->goal, namer, PrintStyle::Compact);
    out += "\t[";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(kids[i].first);
    }
    out += "]\n";

    for (auto [id, i] : kids) {
      const ProofNode* c = n->children[i].get();
      if (!queued.insert(c).second) continue;
      if (successor_premise(n->rule, i) && is_modal(n->goal.op())) {
        auto gg = g;
        gg.push_back(n->goal.at().state_id());
        gamma[c] = std::move(gg);
      } else {
        gamma[c] = {};
      }
      q.push_back(c);
    }
  }
  return out;
}

using json = nlohmann::json;

struct StateTable {
  std::vector<StateId> ids;
  std::unordered_map<StateId, std::size_t> index;
  std::size_t of(StateId s) {
    auto [it, fresh] = index.emplace(s, ids.size());
    if (fresh) ids.push_back(s);
    return it->second;
  }
};

json term_json(const Term& t, StateTable& st) {
  if (t.is_state()) return json{{"s", st.of(t.state_id())}};
  return json{{"v", t.name()}};
}

json formula_json(const Formula& f, StateTable& st) {
  json j;
  switch (f.op()) {
    case Op::Top: j["op"] = "TRUE"; break;
    case Op::Bottom: j["op"] = "FALSE"; break;
    case Op::Atom:
    case Op::NegAtom: {
      j["op"] = f.op() == Op::Atom ? "atom" : "negatom";
      j["pred"] = f.pred();
      json args = json::array();
      for (const auto& t : f.args()) args.push_back(term_json(t, st));
      j["args"] = args;
      break;
    }
    case Op::And:
    case Op::Or:
      j["op"] = f.op() == Op::And ? "and" : "or";
      j["l"] = formula_json(f.lhs(), st);
      j["r"] = formula_json(f.rhs(), st);
      break;
    default:
      j["op"] = op_name(f.op());
      j["x"] = f.binder();
      j["fair"] = f.fair();
      j["body1"] = formula_json(f.body1(), st);
      if (is_binary_modal(f.op())) {
        j["y"] = f.binder2();
        j["body2"] = formula_json(f.body2(), st);
      }
      j["at"] = term_json(f.at(), st);
  }
  return j;
}

std::string render_json(const KripkeModel& m, const Proof& p) {
  auto nodes = collect(p);
  std::unordered_map<const ProofNode*, std::size_t> idx;
  StateTable st;
  json jn = json::array();
  for (auto n : nodes) {
    json e;
    e["rule"] = rule_name(n->rule);
    e["goal"] = formula_json(n->goal, st);
    json kids = json::array();
    for (const auto& c : n->children) kids.push_back(idx.at(c.get()));
    e["children"] = kids;
    e["id"] = n->id;
    idx[n] = jn.size();
    jn.push_back(std::move(e));
  }
  json states = json::array();
  for (StateId s : st.ids) states.push_back(m.state_name(s));
  json doc;
  doc["format"] = "sctl-proof";
  doc["version"] = 1;
  doc["states"] = states;
  doc["nodes"] = jn;
  doc["root"] = nodes.empty() ? json(nullptr) : json(nodes.size() - 1);
  return doc.dump(1) + "\n";
}

Term parse_term(const json& j, const std::vector<StateId>& states) {
  if (j.contains("s")) {
    auto i = j.at("s").get<std::size_t>();
    if (i >= states.size()) throw InputError("state index out of range");
    return Term::state(states[i]);
  }
  return Term::var(j.at("v").get<std::string>());
}

Formula parse_formula(const json& j, const std::vector<StateId>& states) {
  auto op = j.at("op").get<std::string>();
  if (op == "TRUE") return Formula::top();
  if (op == "FALSE") return Formula::bottom();
  if (op == "atom" || op == "negatom") {
    std::vector<Term> args;
    for (const auto& a : j.at("args")) args.push_back(parse_term(a, states));
    auto pred = j.at("pred").get<std::string>();
    return op == "atom" ? Formula::atom(pred, std::move(args)) : Formula::neg_atom(pred, std::move(args));
  }
  if (op == "and") return Formula::conj(parse_formula(j.at("l"), states), parse_formula(j.at("r"), states));
  if (op == "or") return Formula::disj(parse_formula(j.at("l"), states), parse_formula(j.at("r"), states));
  auto x = j.at("x").get<std::string>();
  bool fair = j.value("fair", false);
  Formula b1 = parse_formula(j.at("body1"), states);
  Term at = parse_term(j.at("at"), states);
  if (op == "AX") return Formula::ax(x, b1, at);
  if (op == "EX") return Formula::ex(x, b1, at);
  if (op == "AF") return Formula::af(x, b1, at, fair);
  if (op == "EG") return Formula::eg(x, b1, at, fair);
  auto y = j.at("y").get<std::string>();
  Formula b2 = parse_formula(j.at("body2"), states);
  if (op == "AR") return Formula::ar(x, y, b1, b2, at);
  if (op == "EU") return Formula::eu(x, y, b1, b2, at);
  throw InputError("unknown formula operator " + op);
}

}  // namespace

std::string render_proof(const KripkeModel& m, const Proof& p, ProofFormat f) {
  return f == ProofFormat::Json ? render_json(m, p) : render_text(m, p);
}

Proof parse_proof(const std::string& text, const KripkeModel& m) {
  try {
    json doc = json::parse(text);
    if (doc.value("format", std::string{}) != "sctl-proof") throw InputError("not a proof document");
    std::vector<StateId> states;
    for (const auto& s : doc.at("states")) {
      auto name = s.get<std::string>();
      auto id = m.find_state(name);
      if (!id) throw InputError("unknown state " + name);
      states.push_back(*id);
    }
    std::vector<Proof> built;
    for (const auto& e : doc.at("nodes")) {
      auto n = std::make_shared<ProofNode>();
      auto r = rule_from_name(e.at("rule").get<std::string>());
      if (!r) throw InputError("unknown rule " + e.at("rule").get<std::string>());
      n->rule = *r;
      n->goal = parse_formula(e.at("goal"), states);
      for (const auto& c : e.at("children")) {
        auto i = c.get<std::size_t>();
        if (i >= built.size()) throw InputError("premise refers forward");
        n->children.push_back(built[i]);
      }
      n->id = e.at("id").get<int>();
      built.push_back(std::move(n));
    }
    if (doc.at("root").is_null()) return nullptr;
    auto root = doc.at("root").get<std::size_t>();
    if (root >= built.size()) throw InputError("root out of range");
    return built[root];
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed proof document: ") + e.what());
  }
}

}  // namespace sctl
