#include "search.hpp"

#include <pthread.h>

#include <algorithm>
#include <exception>

#include "sctl/error.hpp"

namespace sctl::detail {

Search::Search(const KripkeModel& model, const Formula& phi, const EngineOptions& o,
               std::vector<Formula> fairness)
    : m(model), el(model, phi), opts(o), C_(std::move(fairness)) {
  for (const auto& c : C_) {
    if (free_vars(c).size() > 1)
      throw InputError("fairness constraint " + to_string(c) + " has more than one free variable");
    // surfaces temporal operators and unknown predicates up front
    eval_state_formula(m, c, m.initial());
  }
  if (C_.size() > 0xfffe) throw InputError("too many fairness constraints");
  frames.emplace_back();
  if (opts.memo) memo_ = make_visited_store(opts.visited, m);
  if (opts.trace == TraceMode::Ring) events_.reserve(std::min<std::size_t>(opts.ring_capacity, 1 << 16));
}

Goal Search::root_goal() {
  Goal g;
  g.c = ct.intern(0, nullptr, 0);
  g.s = el.root_state();
  return g;
}

void Search::event(EventKind k, const Goal& g, bool result, std::uint16_t next) {
  ++stats_.steps;
  if (opts.step_limit && stats_.steps > opts.step_limit)
    throw ResourceError("step limit of " + std::to_string(opts.step_limit) + " reached");
  if (opts.trace == TraceMode::Off) return;
  TraceEvent e{k, result, g.phase, next, g.c, g.s};
  if (opts.trace == TraceMode::Full || events_.size() < opts.ring_capacity) {
    events_.push_back(e);
  } else if (opts.ring_capacity > 0) {
    events_[head_] = e;
    head_ = (head_ + 1) % opts.ring_capacity;
  }
}

bool Search::eval_atom(const Goal& g) {
  const ENode& n = node_of(g);
  auto env = ct.env(g.c);
  StateId buf[16];
  std::vector<StateId> big;
  StateId* a = buf;
  if (n.args.size() > 16) {
    big.resize(n.args.size());
    a = big.data();
  }
  for (std::size_t i = 0; i < n.args.size(); ++i) a[i] = n.args[i].is_const ? n.args[i].v : env[n.args[i].v];
  bool r = m.eval_atom(n.pred, a, n.args.size());
  return n.op == Op::Atom ? r : !r;
}

void Search::pop(Chain& ch) {
  const Frame& f = frames[ch.frames.back()];
  ch.index.erase(key(f.s, f.phase));
  if (memo_ && memo_->query(f.c, f.s) == Visit::InProgress) memo_->mark(f.c, f.s, Visit::Unknown);
  ch.frames.pop_back();
}

void Search::push(Chain& ch, std::uint32_t fid) {
  const Frame& f = frames[fid];
  ch.frames.push_back(fid);
  ch.index[key(f.s, f.phase)] = f.depth;
  if (memo_ && !node_of(Goal{f.c, f.s, 0}).fair && memo_->query(f.c, f.s) == Visit::Unknown)
    memo_->mark(f.c, f.s, Visit::InProgress);
}

Search::Chain& Search::sync(ClosureId c, std::uint32_t F) {
  if (chains_.size() <= c) chains_.resize(std::max<std::size_t>(c + 1, chains_.size() * 2));
  Chain& ch = chains_[c];
  std::uint32_t d = frames[F].depth;
  while (ch.frames.size() > d) pop(ch);
  if (ch.frames.size() == d && (d == 0 || ch.frames[d - 1] == F)) return ch;
  // the chain was left in another branch's shape; rebuild from F
  while (!ch.frames.empty()) pop(ch);
  std::vector<std::uint32_t> path;
  for (std::uint32_t f = F; f != 0; f = frames[f].parent) path.push_back(f);
  for (auto it = path.rbegin(); it != path.rend(); ++it) push(ch, *it);
  return ch;
}

bool Search::constraint_holds(std::size_t i, StateId s) {
  std::uint64_t k = (static_cast<std::uint64_t>(i) << 32) | s;
  auto it = chold_.find(k);
  if (it != chold_.end()) return it->second;
  bool r = eval_state_formula(m, C_[i], s);
  chold_.emplace(k, r);
  return r;
}

int Search::prologue(const Goal& g, std::uint32_t F) {
  const ENode& n = node_of(g);
  Chain& ch = sync(g.c, F);
  auto it = ch.index.find(key(g.s, g.phase));
  if (it != ch.index.end()) {
    std::uint32_t target = it->second;
    ++stats_.merges;
    bool r = false;
    if (n.fair) {
      bool fair = true;
      for (std::size_t i = 0; i < C_.size() && fair; ++i) {
        bool seen = false;
        for (std::size_t j = target - 1; j < ch.frames.size() && !seen; ++j)
          seen = constraint_holds(i, frames[ch.frames[j]].s);
        fair = seen;
      }
      r = n.op == Op::EG ? fair : !fair;
    } else {
      r = n.op == Op::EG || n.op == Op::AR;
    }
    if (memo_ && F != 0) frames[F].low = std::min(frames[F].low, target);
    event(EventKind::Merge, g, r);
    return r ? 1 : 0;
  }
  int hit = memo_lookup(g);
  if (hit >= 0 || !memo_ || F == 0 || n.fair) return hit;
  auto t = tentative_.find(goal_key(g.c, g.s));
  if (t == tentative_.end()) return -1;
  const Tentative& tv = t->second;
  if (tv.low > ch.frames.size() || ch.frames[tv.low - 1] != tv.frame) {
    tentative_.erase(t);
    return -1;
  }
  frames[F].low = std::min(frames[F].low, tv.low);
  ++stats_.memo_hits;
  event(EventKind::MemoHit, g, tv.v);
  return tv.v ? 1 : 0;
}

int Search::memo_lookup(const Goal& g) {
  if (!memo_) return -1;
  Visit v = memo_->query(g.c, g.s);
  if (v != Visit::Proved && v != Visit::Disproved) return -1;
  ++stats_.memo_hits;
  event(EventKind::MemoHit, g, v == Visit::Proved);
  return v == Visit::Proved ? 1 : 0;
}

std::uint32_t Search::unfold(const Goal& g, std::uint32_t F, std::uint16_t& next) {
  const ENode& n = node_of(g);
  next = 0;
  if (n.fair && !C_.empty()) {
    next = g.phase;
    if (constraint_holds(g.phase, g.s)) next = static_cast<std::uint16_t>((g.phase + 1) % C_.size());
  }
  event(EventKind::Unfold, g, false, next);
  Frame fr;
  fr.parent = F;
  fr.depth = frames[F].depth + 1;
  fr.c = g.c;
  fr.s = g.s;
  fr.phase = g.phase;
  fr.low = fr.depth;
  auto id = static_cast<std::uint32_t>(frames.size());
  frames.push_back(std::move(fr));
  push(chains_[g.c], id);
  stats_.peak_gamma = std::max<std::uint64_t>(stats_.peak_gamma, frames[id].depth);
  return id;
}

// Verdicts that hold whatever Γ the search ran under.
bool Search::cacheable_now(const ENode& n, bool v, bool tainted) const {
  if (!tainted) return true;
  switch (n.op) {
    case Op::AF: return !n.fair || !v;
    // a plain EG proved through a merge has found a real lasso; it is only
    // kept out of a closed memo because its proof ends in that merge
    case Op::EG: return n.fair ? v : (!v || !opts.closed_memo);
    case Op::AR: return !v;
    case Op::EU: return v;
    default: return true;
  }
}

// Tainted verdicts that become facts once an untainted ancestor in the same
// chain reaches the same verdict.
bool Search::pending_kind(const ENode& n, bool v) const {
  return (n.op == Op::EU && !v) || (n.op == Op::EG && n.fair && !v) || (n.op == Op::AF && n.fair && v) ||
         (n.op == Op::AR && v && !opts.closed_memo);
}

void Search::exit(const Goal& g, std::uint32_t Fp, bool v) {
  if (!memo_) return;
  const Visit mark = v ? Visit::Proved : Visit::Disproved;
  if (Fp == 0) {
    memo_->mark(g.c, g.s, mark);
    return;
  }
  const ENode& n = node_of(g);
  Frame& f = frames[Fp];
  bool tainted = f.low < f.depth;
  if (f.parent != 0) {
    Frame& p = frames[f.parent];
    p.low = std::min(p.low, f.low);
  }
  if (cacheable_now(n, v, tainted)) memo_->mark(g.c, g.s, mark);
  else if (memo_->query(g.c, g.s) == Visit::InProgress) memo_->mark(g.c, g.s, Visit::Unknown);
  if (!tainted) {
    for (const auto& p : f.pending)
      if (p.v == v) memo_->mark(p.c, p.s, p.v ? Visit::Proved : Visit::Disproved);
  } else if (f.parent != 0) {
    auto& dst = frames[f.parent].pending;
    if (pending_kind(n, v)) {
      dst.push_back({g.c, g.s, v});
      if (!n.fair) {
        // unless rebuilt since, the chain still holds Fp's ancestry
        const auto& cf = chains_[g.c].frames;
        if (f.low >= 1 && f.depth <= cf.size() && cf[f.depth - 1] == Fp)
          tentative_[goal_key(g.c, g.s)] = {v, f.low, cf[f.low - 1]};
      }
    }
    dst.insert(dst.end(), f.pending.begin(), f.pending.end());
  }
  f.pending.clear();
  f.pending.shrink_to_fit();
}

Verdict Search::verdict(bool provable) {
  Verdict out;
  out.provable = provable;
  stats_.closures = ct.size();
  if (memo_) stats_.memo_entries = memo_->size();
  out.stats = stats_;
  Trace& t = out.trace;
  t.formula = el.formula();
  t.total = stats_.steps;
  if (opts.trace != TraceMode::Off) {
    t.complete = events_.size() == stats_.steps;
    t.closed_memo = !opts.memo || opts.closed_memo;
    t.events.reserve(events_.size());
    for (std::size_t i = 0; i < events_.size(); ++i) t.events.push_back(events_[(head_ + i) % events_.size()]);
    t.closure_node.reserve(ct.size());
    t.closure_env.reserve(ct.size());
    for (ClosureId c = 0; c < ct.size(); ++c) {
      t.closure_node.push_back(static_cast<std::uint32_t>(ct.node(c)));
      auto e = ct.env(c);
      t.closure_env.emplace_back(e.begin(), e.end());
    }
  }
  return out;
}

namespace {
struct DeepArgs {
  const std::function<void()>* fn;
  std::exception_ptr err;
};
void* deep_entry(void* p) {
  auto* a = static_cast<DeepArgs*>(p);
  try {
    (*a->fn)();
  } catch (...) {
    a->err = std::current_exception();
  }
  return nullptr;
}
}  // namespace

void run_deep(const std::function<void()>& fn) {
  DeepArgs args{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t{1} << 30);
  pthread_t th;
  if (pthread_create(&th, &attr, deep_entry, &args) != 0) {
    pthread_attr_destroy(&attr);
    fn();  // no thread available; run inline
    return;
  }
  pthread_join(th, nullptr);
  pthread_attr_destroy(&attr);
  if (args.err) std::rethrow_exception(args.err);
}

}  // namespace sctl::detail
