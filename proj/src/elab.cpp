#include "elab.hpp"

#include <algorithm>

#include "sctl/error.hpp"

namespace sctl::detail {

namespace {

std::vector<std::string> skeleton_fv(const Formula& f) {
  std::set<std::string> out;
  switch (f.op()) {
    case Op::AX: case Op::EX: case Op::AF: case Op::EG:
      out = free_vars(f.body());
      out.erase(f.binder());
      break;
    case Op::AR: case Op::EU: {
      out = free_vars(f.body1());
      out.erase(f.binder());
      auto r = free_vars(f.body2());
      r.erase(f.binder2());
      out.insert(r.begin(), r.end());
      break;
    }
    default:
      out = free_vars(f);
  }
  return {out.begin(), out.end()};
}

std::uint32_t slot_of(const std::vector<std::string>& fv, const std::string& x) {
  auto it = std::lower_bound(fv.begin(), fv.end(), x);
  if (it == fv.end() || *it != x) throw InputError("internal: unresolved variable " + x);
  return static_cast<std::uint32_t>(it - fv.begin());
}

// resolves a name against own env extended by an optional binder
ArgRef resolve(const Term& t, const std::vector<std::string>& fv, const std::string* binder) {
  if (t.is_state()) return {true, t.state_id()};
  if (binder && t.name() == *binder) return {false, static_cast<std::uint32_t>(fv.size())};
  return {false, slot_of(fv, t.name())};
}

}  // namespace

Elaboration::Elaboration(const KripkeModel& m, const Formula& root) : root_(root) {
  auto fv = free_vars(root);
  if (!fv.empty()) throw InputError("formula has free variable " + *fv.begin());
  build(root, m);
  if (is_modal(root.op())) root_state_ = root.at().state_id();
}

int Elaboration::build(const Formula& f, const KripkeModel& m) {
  int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  ENode n;
  n.op = f.op();
  n.fair = f.fair();
  n.fv = skeleton_fv(f);
  n.size = static_cast<std::uint32_t>(size(f));
  n.source = f;

  auto link_kid = [&](int k, const Formula& kf, const std::string* binder) {
    int kid = build(kf, m);
    n.kid[k] = kid;
    for (const auto& v : nodes_[static_cast<std::size_t>(kid)].fv) {
      if (binder && v == *binder) n.link[k].push_back(static_cast<std::uint32_t>(n.fv.size()));
      else n.link[k].push_back(slot_of(n.fv, v));
    }
    if (is_modal(kf.op())) n.kid_at[k] = resolve(kf.at(), n.fv, binder);
  };

  switch (f.op()) {
    case Op::Top: case Op::Bottom:
      break;
    case Op::Atom: case Op::NegAtom: {
      n.pred = m.predicate_index(f.pred());
      if (n.pred < 0) throw InputError("unknown predicate " + f.pred());
      if (m.arity(n.pred) != static_cast<int>(f.args().size()))
        throw InputError("predicate " + f.pred() + " expects " + std::to_string(m.arity(n.pred)) +
                         " arguments, got " + std::to_string(f.args().size()));
      for (const auto& t : f.args()) n.args.push_back(resolve(t, n.fv, nullptr));
      break;
    }
    case Op::And: case Op::Or:
      link_kid(0, f.lhs(), nullptr);
      link_kid(1, f.rhs(), nullptr);
      break;
    case Op::AX: case Op::EX: case Op::AF: case Op::EG:
      link_kid(0, f.body(), &f.binder());
      break;
    case Op::AR: case Op::EU:
      link_kid(0, f.body1(), &f.binder());
      link_kid(1, f.body2(), &f.binder2());
      break;
  }
  nodes_[static_cast<std::size_t>(id)] = std::move(n);
  return id;
}

ClosureId ClosureTable::intern(int node, const StateId* env, std::size_t n) {
  std::size_t h = std::hash<int>{}(node);
  for (std::size_t i = 0; i < n; ++i) h = h * 1000003u ^ env[i];
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const auto& e = entries_[it->second];
    if (e.node == node && e.len == n && std::equal(env, env + n, pool_.begin() + e.off))
      return it->second;
  }
  auto id = static_cast<ClosureId>(entries_.size());
  entries_.push_back({node, static_cast<std::uint32_t>(pool_.size()), static_cast<std::uint32_t>(n)});
  pool_.insert(pool_.end(), env, env + n);
  index_.emplace(h, id);
  return id;
}

Goal child_goal(const Elaboration& el, ClosureTable& ct, ClosureId parent, int k, StateId v) {
  const ENode& pn = el.node(ct.node(parent));
  int kid = pn.kid[k];
  const ENode& kn = el.node(kid);
  StateId buf[16];
  std::vector<StateId> big;
  StateId* env = buf;
  std::size_t n = pn.link[k].size();
  if (n > 16) {
    big.resize(n);
    env = big.data();
  }
  auto penv = ct.env(parent);
  auto ext = [&](std::uint32_t slot) { return slot < penv.size() ? penv[slot] : v; };
  for (std::size_t i = 0; i < n; ++i) env[i] = ext(pn.link[k][i]);
  Goal g;
  // before intern: it may grow the pool penv points into
  if (is_modal(kn.op)) {
    const ArgRef& a = pn.kid_at[k];
    g.s = a.is_const ? a.v : ext(a.v);
  }
  g.c = ct.intern(kid, env, n);
  return g;
}

Formula materialize(const Elaboration& el, const ClosureTable& ct, const Goal& g) {
  const ENode& n = el.node(ct.node(g.c));
  Formula f = n.source;
  auto env = ct.env(g.c);
  for (std::size_t i = 0; i < n.fv.size(); ++i) f = substitute(Term::state(env[i]), n.fv[i], f);
  if (is_modal(n.op)) f = f.with_at(Term::state(g.s));
  return f;
}

bool eval_state_formula(const KripkeModel& m, const Formula& f, StateId s) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: case Op::NegAtom: {
      std::vector<StateId> args;
      for (const auto& t : f.args()) args.push_back(t.is_state() ? t.state_id() : s);
      bool r = m.eval_atom(f.pred(), args);
      return f.op() == Op::Atom ? r : !r;
    }
    case Op::And: return eval_state_formula(m, f.lhs(), s) && eval_state_formula(m, f.rhs(), s);
    case Op::Or: return eval_state_formula(m, f.lhs(), s) || eval_state_formula(m, f.rhs(), s);
    default:
      throw InputError("fairness constraints must not contain temporal operators");
  }
}

}  // namespace sctl::detail
