#include "sctl/engine.hpp"

#include <stdexcept>

#include "search.hpp"
#include "sctl/error.hpp"

namespace sctl {

using detail::Goal;
using detail::Search;

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::Top: return "top";
    case EventKind::Bottom: return "bottom";
    case EventKind::Atom: return "atom";
    case EventKind::NegAtom: return "negatom";
    case EventKind::And: return "and";
    case EventKind::Or: return "or";
    case EventKind::AX: return "ax";
    case EventKind::EX: return "ex";
    case EventKind::Unfold: return "unfold";
    case EventKind::Merge: return "merge";
    case EventKind::MemoHit: return "memo";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Continuation passing trees. Nodes live in an arena and are never freed;
// 0 and 1 are the leaves t and f. Exit nodes are bookkeeping inserted in
// front of a continuation when memoization is on: passing one records the
// verdict of the goal it belongs to.

enum : std::uint8_t { kSeq, kExitT, kExitF };

struct CNode {
  Goal g;
  std::uint32_t frame = 0;  // Γ of the sequent (fixpoint goals), or the exit's frame
  std::uint32_t t = 0, f = 1;
  std::uint8_t kind = kSeq;
};

class CptMachine {
 public:
  explicit CptMachine(Search& s) : S(s) {
    nodes_.push_back({});  // t
    nodes_.push_back({});  // f
    cur_ = mk(S.root_goal(), 0, 0, 1);
  }

  bool done() { skip(); return cur_ <= 1; }
  bool result() const { return cur_ == 0; }

  void step() {
    skip();
    if (cur_ <= 1) return;
    CNode n = nodes_[cur_];
    parent_size_ = S.node_of(n.g).size;
    parent_depth_ = S.frames[n.frame].depth;
    cur_ = rewrite(n);
    parent_size_ = 0;
  }

  bool run() {
    while (!done()) step();
    return result();
  }

  std::string render(const StateNamer& namer) const { return render(cur_, namer); }

 private:
  void skip() {
    while (cur_ > 1 && nodes_[cur_].kind != kSeq) {
      const CNode& n = nodes_[cur_];
      S.exit(n.g, n.frame, n.kind == kExitT);
      cur_ = n.t;
    }
  }

  std::uint32_t mk(const Goal& g, std::uint32_t F, std::uint32_t t, std::uint32_t f) {
    if (S.opts.check_rewrite_order && parent_size_ != 0) {
      auto sz = S.node_of(g).size;
      auto d = S.frames[F].depth;
      if (!(sz < parent_size_ || (sz == parent_size_ && d > parent_depth_)))
        throw std::logic_error("rewrite does not decrease the termination measure");
    }
    nodes_.push_back({g, F, t, f, kSeq});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t marker(bool v, const Goal& g, std::uint32_t F, std::uint32_t next) {
    if (!S.opts.memo) return next;
    nodes_.push_back({g, F, next, next, v ? kExitT : kExitF});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t rewrite(const CNode& n) {
    const Goal g = n.g;
    const auto& e = S.node_of(g);
    switch (e.op) {
      case Op::Top:
        S.event(EventKind::Top, g);
        return n.t;
      case Op::Bottom:
        S.event(EventKind::Bottom, g);
        return n.f;
      case Op::Atom:
      case Op::NegAtom: {
        bool r = S.eval_atom(g);
        S.event(e.op == Op::Atom ? EventKind::Atom : EventKind::NegAtom, g, r);
        return r ? n.t : n.f;
      }
      case Op::And: {
        S.event(EventKind::And, g);
        Goal l = S.child(g, 0, 0), r = S.child(g, 1, 0);
        return mk(l, 0, mk(r, 0, n.t, n.f), n.f);
      }
      case Op::Or: {
        S.event(EventKind::Or, g);
        Goal l = S.child(g, 0, 0), r = S.child(g, 1, 0);
        return mk(l, 0, n.t, mk(r, 0, n.t, n.f));
      }
      case Op::AX:
      case Op::EX: {
        int hit = S.memo_lookup(g);
        if (hit >= 0) return hit ? n.t : n.f;
        S.event(e.op == Op::AX ? EventKind::AX : EventKind::EX, g);
        const auto& succ = S.m.next(g.s);
        std::vector<Goal> kids;
        kids.reserve(succ.size());
        for (StateId s : succ) kids.push_back(S.child(g, 0, s));
        std::uint32_t t = marker(true, g, 0, n.t), f = marker(false, g, 0, n.f);
        return e.op == Op::AX ? all_chain(kids, 0, t, f) : any_chain(kids, 0, t, f);
      }
      case Op::AF:
      case Op::EG:
      case Op::AR:
      case Op::EU: {
        int hit = S.prologue(g, n.frame);
        if (hit >= 0) return hit ? n.t : n.f;
        std::uint16_t next = 0;
        std::uint32_t Fp = S.unfold(g, n.frame, next);
        Goal b1 = S.child(g, 0, g.s);
        Goal b2 = (e.op == Op::AR || e.op == Op::EU) ? S.child(g, 1, g.s) : Goal{};
        std::vector<Goal> kids;
        for (StateId s : S.m.next(g.s)) kids.push_back(Goal{g.c, s, next});
        std::uint32_t t = marker(true, g, Fp, n.t), f = marker(false, g, Fp, n.f);
        switch (e.op) {
          case Op::AF:
            return mk(b1, 0, t, all_chain(kids, Fp, t, f));
          case Op::EG:
            return mk(b1, 0, any_chain(kids, Fp, t, f), f);
          case Op::AR:
            return mk(b2, 0, mk(b1, 0, t, all_chain(kids, Fp, t, f)), f);
          default:
            return mk(b2, 0, t, mk(b1, 0, any_chain(kids, Fp, t, f), f));
        }
      }
    }
    return n.f;
  }

  std::uint32_t all_chain(const std::vector<Goal>& kids, std::uint32_t F, std::uint32_t t, std::uint32_t f) {
    std::uint32_t acc = t;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) acc = mk(*it, F, acc, f);
    return acc;
  }
  std::uint32_t any_chain(const std::vector<Goal>& kids, std::uint32_t F, std::uint32_t t, std::uint32_t f) {
    std::uint32_t acc = f;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) acc = mk(*it, F, t, acc);
    return acc;
  }

  std::uint32_t visible(std::uint32_t i) const {
    while (i > 1 && nodes_[i].kind != kSeq) i = nodes_[i].t;
    return i;
  }

  std::string render(std::uint32_t i, const StateNamer& namer) const {
    i = visible(i);
    if (i == 0) return "t";
    if (i == 1) return "f";
    const CNode& n = nodes_[i];
    std::string gamma;
    std::vector<std::string> entries;
    for (std::uint32_t fr = n.frame; fr != 0; fr = S.frames[fr].parent) {
      const auto& F = S.frames[fr];
      entries.push_back(to_string(detail::materialize(S.el, S.ct, Goal{F.c, F.s, F.phase}), namer,
                                  PrintStyle::Compact));
    }
    if (!entries.empty()) {
      gamma = "{";
      for (std::size_t k = entries.size(); k-- > 0;) {
        gamma += entries[k];
        if (k) gamma += ", ";
      }
      gamma += "} ";
    }
    return "cpt(" + gamma + "|- " +
           to_string(detail::materialize(S.el, S.ct, n.g), namer, PrintStyle::Compact) + ", " +
           render(n.t, namer) + ", " + render(n.f, namer) + ")";
  }

  Search& S;
  std::vector<CNode> nodes_;
  std::uint32_t cur_ = 0;
  std::uint32_t parent_size_ = 0, parent_depth_ = 0;
};

// ---------------------------------------------------------------------------
// The same rules as plain recursion. Goals are created in the same order as
// the cpt engine creates them so closure ids, and hence traces, coincide.

class Recursive {
 public:
  explicit Recursive(Search& s) : S(s) {}

  bool solve(const Goal& g, std::uint32_t F) {
    const auto& e = S.node_of(g);
    switch (e.op) {
      case Op::Top:
        S.event(EventKind::Top, g);
        return true;
      case Op::Bottom:
        S.event(EventKind::Bottom, g);
        return false;
      case Op::Atom:
      case Op::NegAtom: {
        bool r = S.eval_atom(g);
        S.event(e.op == Op::Atom ? EventKind::Atom : EventKind::NegAtom, g, r);
        return r;
      }
      case Op::And: {
        S.event(EventKind::And, g);
        Goal l = S.child(g, 0, 0), r = S.child(g, 1, 0);
        return solve(l, 0) && solve(r, 0);
      }
      case Op::Or: {
        S.event(EventKind::Or, g);
        Goal l = S.child(g, 0, 0), r = S.child(g, 1, 0);
        return solve(l, 0) || solve(r, 0);
      }
      case Op::AX:
      case Op::EX: {
        int hit = S.memo_lookup(g);
        if (hit >= 0) return hit;
        S.event(e.op == Op::AX ? EventKind::AX : EventKind::EX, g);
        std::vector<Goal> kids;
        for (StateId s : S.m.next(g.s)) kids.push_back(S.child(g, 0, s));
        bool v = e.op == Op::AX ? all(kids, 0) : any(kids, 0);
        S.exit(g, 0, v);
        return v;
      }
      case Op::AF:
      case Op::EG:
      case Op::AR:
      case Op::EU: {
        int hit = S.prologue(g, F);
        if (hit >= 0) return hit;
        std::uint16_t next = 0;
        std::uint32_t Fp = S.unfold(g, F, next);
        Goal b1 = S.child(g, 0, g.s);
        Goal b2 = (e.op == Op::AR || e.op == Op::EU) ? S.child(g, 1, g.s) : Goal{};
        std::vector<Goal> kids;
        for (StateId s : S.m.next(g.s)) kids.push_back(Goal{g.c, s, next});
        bool v = false;
        switch (e.op) {
          case Op::AF: v = solve(b1, 0) || all(kids, Fp); break;
          case Op::EG: v = solve(b1, 0) && any(kids, Fp); break;
          case Op::AR: v = solve(b2, 0) && (solve(b1, 0) || all(kids, Fp)); break;
          default: v = solve(b2, 0) || (solve(b1, 0) && any(kids, Fp)); break;
        }
        S.exit(g, Fp, v);
        return v;
      }
    }
    return false;
  }

 private:
  bool all(const std::vector<Goal>& kids, std::uint32_t F) {
    for (const auto& k : kids)
      if (!solve(k, F)) return false;
    return true;
  }
  bool any(const std::vector<Goal>& kids, std::uint32_t F) {
    for (const auto& k : kids)
      if (solve(k, F)) return true;
    return false;
  }

  Search& S;
};

Verdict run(const KripkeModel& m, const Formula& phi, const EngineOptions& opts,
            std::vector<Formula> C) {
  Search S(m, phi, opts, std::move(C));
  bool r = false;
  if (opts.engine == EngineKind::Cpt) {
    CptMachine machine(S);
    r = machine.run();
  } else {
    detail::run_deep([&] {
      Recursive rec(S);
      r = rec.solve(S.root_goal(), 0);
    });
  }
  return S.verdict(r);
}

}  // namespace

Verdict prove(const KripkeModel& m, const Formula& phi, const EngineOptions& opts) {
  return run(m, phi, opts, {});
}

Verdict prove_fair(const KripkeModel& m, const Formula& phi, const std::vector<Formula>& C,
                   const EngineOptions& opts) {
  return run(m, fairify(phi), opts, C);
}

namespace {
Formula instantiate(const Formula& c, StateId s) {
  auto fv = free_vars(c);
  if (fv.empty()) return c;
  if (fv.size() > 1) throw InputError("fairness constraint " + to_string(c) + " has more than one free variable");
  return substitute(Term::state(s), *fv.begin(), c);
}
}  // namespace

bool fair_loop_check(const std::vector<StateId>& loop, const std::vector<Formula>& C,
                     const std::function<bool(const Formula&)>& subprove) {
  for (const auto& c : C) {
    bool seen = false;
    for (StateId s : loop) {
      if (subprove(instantiate(c, s))) {
        seen = true;
        break;
      }
    }
    if (!seen) return false;
  }
  return true;
}

bool fair_loop_check(const std::vector<StateId>& loop, const std::vector<Formula>& C,
                     const KripkeModel& m) {
  EngineOptions o;
  o.trace = TraceMode::Off;
  return fair_loop_check(loop, C, [&](const Formula& f) { return prove(m, f, o).provable; });
}

std::string describe_event(const KripkeModel& m, const Trace& t, std::size_t i) {
  detail::Elaboration el(m, t.formula);
  detail::ClosureTable ct;
  for (std::size_t c = 0; c < t.closure_node.size(); ++c)
    ct.intern(static_cast<int>(t.closure_node[c]), t.closure_env[c].data(), t.closure_env[c].size());
  const TraceEvent& e = t.events.at(i);
  if (e.closure >= ct.size()) throw TraceMismatch("event refers to an unknown closure");
  std::string out = event_name(e.kind);
  out += ' ';
  out += to_string(detail::materialize(el, ct, Goal{e.closure, e.state, e.phase}),
                   [&](StateId s) { return m.state_name(s); }, PrintStyle::Compact);
  if (e.kind == EventKind::Atom || e.kind == EventKind::NegAtom || e.kind == EventKind::Merge ||
      e.kind == EventKind::MemoHit)
    out += e.result ? " -> t" : " -> f";
  return out;
}

// ---------------------------------------------------------------------------

struct CptSearch::Impl {
  Impl(const KripkeModel& m, const Formula& phi, const EngineOptions& o, std::vector<Formula> C)
      : search(m, phi, o, std::move(C)), machine(search) {}
  Search search;
  CptMachine machine;
};

CptSearch::CptSearch(const KripkeModel& m, const Formula& phi, const EngineOptions& opts,
                     const std::vector<Formula>& fairness)
    : impl_(std::make_unique<Impl>(m, fairness.empty() ? phi : fairify(phi), opts, fairness)) {}

CptSearch::~CptSearch() = default;

bool CptSearch::done() const { return impl_->machine.done(); }
bool CptSearch::provable() const {
  if (!impl_->machine.done()) throw PreconditionError("search has not finished");
  return impl_->machine.result();
}
void CptSearch::step() { impl_->machine.step(); }
std::string CptSearch::render(const StateNamer& namer) const { return impl_->machine.render(namer); }
Verdict CptSearch::finish() {
  bool r = impl_->machine.run();
  return impl_->search.verdict(r);
}

}  // namespace sctl
