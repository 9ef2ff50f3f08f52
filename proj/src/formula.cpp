#include "sctl/formula.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace sctl {

const char* op_name(Op op) {
  switch (op) {
    case Op::Top: return "TRUE";
    case Op::Bottom: return "FALSE";
    case Op::Atom: return "atom";
    case Op::NegAtom: return "!atom";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::AX: return "AX";
    case Op::EX: return "EX";
    case Op::AF: return "AF";
    case Op::EG: return "EG";
    case Op::AR: return "AR";
    case Op::EU: return "EU";
  }
  return "?";
}

bool is_modal(Op op) { return op >= Op::AX; }
bool is_fixpoint(Op op) { return op >= Op::AF; }
bool is_binary_modal(Op op) { return op == Op::AR || op == Op::EU; }

namespace {

Formula::Node base(Op op) {
  Formula::Node n;
  n.op = op;
  return n;
}

Formula make(Formula::Node n) { return Formula::from_node(std::move(n)); }

}  // namespace

Formula Formula::top() { return make(base(Op::Top)); }
Formula Formula::bottom() { return make(base(Op::Bottom)); }

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  auto n = base(Op::Atom);
  n.pred = std::move(pred);
  n.args = std::move(args);
  return make(std::move(n));
}

Formula Formula::neg_atom(std::string pred, std::vector<Term> args) {
  auto n = base(Op::NegAtom);
  n.pred = std::move(pred);
  n.args = std::move(args);
  return make(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = base(Op::And);
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  auto n = base(Op::Or);
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make(std::move(n));
}

static Formula unary(Op op, std::string x, Formula body, Term at, bool fair) {
  auto n = base(op);
  n.x = std::move(x);
  n.lhs = std::move(body);
  n.at = std::move(at);
  n.fair = fair;
  return make(std::move(n));
}

static Formula binary(Op op, std::string x, std::string y, Formula b1, Formula b2, Term at) {
  auto n = base(op);
  n.x = std::move(x);
  n.y = std::move(y);
  n.lhs = std::move(b1);
  n.rhs = std::move(b2);
  n.at = std::move(at);
  return make(std::move(n));
}

Formula Formula::ax(std::string x, Formula body, Term at) {
  return unary(Op::AX, std::move(x), std::move(body), std::move(at), false);
}
Formula Formula::ex(std::string x, Formula body, Term at) {
  return unary(Op::EX, std::move(x), std::move(body), std::move(at), false);
}
Formula Formula::af(std::string x, Formula body, Term at, bool fair) {
  return unary(Op::AF, std::move(x), std::move(body), std::move(at), fair);
}
Formula Formula::eg(std::string x, Formula body, Term at, bool fair) {
  return unary(Op::EG, std::move(x), std::move(body), std::move(at), fair);
}
Formula Formula::ar(std::string x, std::string y, Formula b1, Formula b2, Term at) {
  return binary(Op::AR, std::move(x), std::move(y), std::move(b1), std::move(b2), std::move(at));
}
Formula Formula::eu(std::string x, std::string y, Formula b1, Formula b2, Term at) {
  return binary(Op::EU, std::move(x), std::move(y), std::move(b1), std::move(b2), std::move(at));
}

Op Formula::op() const { return node_->op; }
bool Formula::fair() const { return node_->fair; }
const std::string& Formula::pred() const { return node_->pred; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
const std::string& Formula::binder() const { return node_->x; }
const std::string& Formula::binder2() const { return node_->y; }
const Term& Formula::at() const { return node_->at; }

Formula Formula::with_at(Term at) const {
  assert(is_modal(op()));
  Node n = *node_;
  n.at = std::move(at);
  return make(std::move(n));
}

Formula Formula::from_node(Node n) {
  return Formula(std::make_shared<const Node>(std::move(n)));
}

// ---------------------------------------------------------------------------
// binder-aware comparison

namespace {

using Scope = std::vector<const std::string*>;

int level_of(const Scope& sc, const std::string& name) {
  for (std::size_t i = sc.size(); i-- > 0;)
    if (*sc[i] == name) return static_cast<int>(i);
  return -1;
}

bool term_alpha_eq(const Term& a, const Scope& sa, const Term& b, const Scope& sb) {
  if (a.is_state() || b.is_state())
    return a.is_state() && b.is_state() && a.state_id() == b.state_id();
  int la = level_of(sa, a.name());
  int lb = level_of(sb, b.name());
  if (la != lb) return false;
  return la >= 0 || a.name() == b.name();
}

bool alpha_rec(const Formula& a, Scope& sa, const Formula& b, Scope& sb) {
  if (a.node() == b.node() && sa.empty() && sb.empty()) return true;
  if (a.op() != b.op() || a.fair() != b.fair()) return false;
  switch (a.op()) {
    case Op::Top:
    case Op::Bottom:
      return true;
    case Op::Atom:
    case Op::NegAtom: {
      if (a.pred() != b.pred() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_alpha_eq(a.args()[i], sa, b.args()[i], sb)) return false;
      return true;
    }
    case Op::And:
    case Op::Or:
      return alpha_rec(a.lhs(), sa, b.lhs(), sb) && alpha_rec(a.rhs(), sa, b.rhs(), sb);
    case Op::AX:
    case Op::EX:
    case Op::AF:
    case Op::EG: {
      if (!term_alpha_eq(a.at(), sa, b.at(), sb)) return false;
      sa.push_back(&a.binder());
      sb.push_back(&b.binder());
      bool r = alpha_rec(a.body(), sa, b.body(), sb);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
    case Op::AR:
    case Op::EU: {
      if (!term_alpha_eq(a.at(), sa, b.at(), sb)) return false;
      sa.push_back(&a.binder());
      sb.push_back(&b.binder());
      bool r = alpha_rec(a.body1(), sa, b.body1(), sb);
      sa.back() = &a.binder2();
      sb.back() = &b.binder2();
      r = r && alpha_rec(a.body2(), sa, b.body2(), sb);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
  }
  return false;
}

inline void mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

void hash_term(std::size_t& h, const Term& t, const Scope& sc) {
  if (t.is_state()) {
    mix(h, 0x51ULL);
    mix(h, t.state_id());
    return;
  }
  int l = level_of(sc, t.name());
  if (l >= 0) {
    mix(h, 0xb0ULL);
    mix(h, static_cast<std::size_t>(l));
  } else {
    mix(h, 0xf0ULL);
    mix(h, std::hash<std::string>{}(t.name()));
  }
}

void hash_rec(std::size_t& h, const Formula& f, Scope& sc) {
  mix(h, static_cast<std::size_t>(f.op()) * 2 + (f.fair() ? 1 : 0));
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return;
    case Op::Atom:
    case Op::NegAtom:
      mix(h, std::hash<std::string>{}(f.pred()));
      for (const auto& t : f.args()) hash_term(h, t, sc);
      return;
    case Op::And:
    case Op::Or:
      hash_rec(h, f.lhs(), sc);
      hash_rec(h, f.rhs(), sc);
      return;
    case Op::AX:
    case Op::EX:
    case Op::AF:
    case Op::EG:
      hash_term(h, f.at(), sc);
      sc.push_back(&f.binder());
      hash_rec(h, f.body(), sc);
      sc.pop_back();
      return;
    case Op::AR:
    case Op::EU:
      hash_term(h, f.at(), sc);
      sc.push_back(&f.binder());
      hash_rec(h, f.body1(), sc);
      sc.back() = &f.binder2();
      hash_rec(h, f.body2(), sc);
      sc.pop_back();
      return;
  }
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  if (!a || !b) return !a && !b;
  Scope sa, sb;
  return alpha_rec(a, sa, b, sb);
}

std::size_t alpha_hash(const Formula& f) {
  std::size_t h = 0;
  if (!f) return h;
  Scope sc;
  hash_rec(h, f, sc);
  return h;
}

bool identical(const Formula& a, const Formula& b) {
  if (!a || !b) return !a && !b;
  if (a.node() == b.node()) return true;
  const auto& x = *a.node();
  const auto& y = *b.node();
  return x.op == y.op && x.fair == y.fair && x.pred == y.pred && x.args == y.args &&
         x.x == y.x && x.y == y.y && x.at == y.at && identical(x.lhs, y.lhs) &&
         identical(x.rhs, y.rhs);
}

// ---------------------------------------------------------------------------
// variables

namespace {

void free_rec(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_var() && std::find(bound.begin(), bound.end(), t.name()) == bound.end())
      out.insert(t.name());
  };
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return;
    case Op::Atom:
    case Op::NegAtom:
      for (const auto& t : f.args()) term(t);
      return;
    case Op::And:
    case Op::Or:
      free_rec(f.lhs(), bound, out);
      free_rec(f.rhs(), bound, out);
      return;
    case Op::AX:
    case Op::EX:
    case Op::AF:
    case Op::EG:
      term(f.at());
      bound.push_back(f.binder());
      free_rec(f.body(), bound, out);
      bound.pop_back();
      return;
    case Op::AR:
    case Op::EU:
      term(f.at());
      bound.push_back(f.binder());
      free_rec(f.body1(), bound, out);
      bound.back() = f.binder2();
      free_rec(f.body2(), bound, out);
      bound.pop_back();
      return;
  }
}

void all_rec(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom || f.op() == Op::NegAtom) {
    for (const auto& t : f.args())
      if (t.is_var()) out.insert(t.name());
    return;
  }
  if (is_modal(f.op())) {
    out.insert(f.binder());
    if (is_binary_modal(f.op())) out.insert(f.binder2());
    if (f.at().is_var()) out.insert(f.at().name());
  }
  if (f.lhs()) all_rec(f.lhs(), out);
  if (f.rhs()) all_rec(f.rhs(), out);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_rec(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  all_rec(f, out);
  return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

std::size_t size(const Formula& f) {
  std::size_t n = 1;
  if (f.lhs()) n += size(f.lhs());
  if (f.rhs()) n += size(f.rhs());
  return n;
}

std::string fresh_name(const std::set<std::string>& avoid) {
  if (!avoid.count("z")) return "z";
  for (unsigned i = 1;; ++i) {
    std::string c = "z" + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

// ---------------------------------------------------------------------------
// substitution

namespace {

bool occurs_free(const std::string& x, const Formula& f) { return free_vars(f).count(x) != 0; }

Term subst_term(const Term& t, const std::string& x, const Term& by) {
  return (t.is_var() && t.name() == x) ? by : t;
}

// (t/x) applied under binder b; returns the possibly renamed binder and body.
std::pair<std::string, Formula> under_binder(const Term& t, const std::string& x,
                                             const std::string& b, const Formula& body) {
  if (b == x || !occurs_free(x, body)) return {b, body};
  if (t.is_var() && t.name() == b) {
    auto avoid = all_vars(body);
    avoid.insert(x);
    avoid.insert(b);
    std::string z = fresh_name(avoid);
    Formula renamed = substitute(Term::var(z), b, body);
    return {z, substitute(t, x, renamed)};
  }
  return {b, substitute(t, x, body)};
}

}  // namespace

Formula substitute(const Term& t, const std::string& x, const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom:
    case Op::NegAtom: {
      bool hit = false;
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) {
        args.push_back(subst_term(a, x, t));
        hit |= !(args.back() == a);
      }
      if (!hit) return f;
      return f.op() == Op::Atom ? Formula::atom(f.pred(), std::move(args))
                                : Formula::neg_atom(f.pred(), std::move(args));
    }
    case Op::And:
    case Op::Or: {
      Formula l = substitute(t, x, f.lhs());
      Formula r = substitute(t, x, f.rhs());
      if (l.node() == f.lhs().node() && r.node() == f.rhs().node()) return f;
      return f.op() == Op::And ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Op::AX:
    case Op::EX:
    case Op::AF:
    case Op::EG: {
      Term at = subst_term(f.at(), x, t);
      auto [b, body] = under_binder(t, x, f.binder(), f.body());
      if (at == f.at() && b == f.binder() && body.node() == f.body().node()) return f;
      Formula::Node n = *f.node();
      n.at = at;
      n.x = b;
      n.lhs = body;
      return Formula::from_node(std::move(n));
    }
    case Op::AR:
    case Op::EU: {
      Term at = subst_term(f.at(), x, t);
      auto [b1, body1] = under_binder(t, x, f.binder(), f.body1());
      auto [b2, body2] = under_binder(t, x, f.binder2(), f.body2());
      if (at == f.at() && b1 == f.binder() && b2 == f.binder2() &&
          body1.node() == f.body1().node() && body2.node() == f.body2().node())
        return f;
      Formula::Node n = *f.node();
      n.at = at;
      n.x = b1;
      n.y = b2;
      n.lhs = body1;
      n.rhs = body2;
      return Formula::from_node(std::move(n));
    }
  }
  return f;
}

Formula dualize(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return Formula::bottom();
    case Op::Bottom: return Formula::top();
    case Op::Atom: return Formula::neg_atom(f.pred(), f.args());
    case Op::NegAtom: return Formula::atom(f.pred(), f.args());
    case Op::And: return Formula::disj(dualize(f.lhs()), dualize(f.rhs()));
    case Op::Or: return Formula::conj(dualize(f.lhs()), dualize(f.rhs()));
    case Op::AX: return Formula::ex(f.binder(), dualize(f.body()), f.at());
    case Op::EX: return Formula::ax(f.binder(), dualize(f.body()), f.at());
    case Op::AF: return Formula::eg(f.binder(), dualize(f.body()), f.at(), f.fair());
    case Op::EG: return Formula::af(f.binder(), dualize(f.body()), f.at(), f.fair());
    case Op::AR:
      return Formula::eu(f.binder(), f.binder2(), dualize(f.body1()), dualize(f.body2()), f.at());
    case Op::EU:
      return Formula::ar(f.binder(), f.binder2(), dualize(f.body1()), dualize(f.body2()), f.at());
  }
  return f;
}

Formula fairify(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
    case Op::NegAtom:
      return f;
    case Op::And: return Formula::conj(fairify(f.lhs()), fairify(f.rhs()));
    case Op::Or: return Formula::disj(fairify(f.lhs()), fairify(f.rhs()));
    case Op::AX: {
      const auto& x = f.binder();
      return Formula::ax(x, Formula::disj(fairify(f.body()),
                                          Formula::af("z", Formula::bottom(), Term::var(x), true)),
                         f.at());
    }
    case Op::EX: {
      const auto& x = f.binder();
      return Formula::ex(x, Formula::conj(fairify(f.body()),
                                          Formula::eg("z", Formula::top(), Term::var(x), true)),
                         f.at());
    }
    case Op::AF: return Formula::af(f.binder(), fairify(f.body()), f.at(), true);
    case Op::EG: return Formula::eg(f.binder(), fairify(f.body()), f.at(), true);
    case Op::AR: {
      const auto& y = f.binder2();
      return Formula::ar(f.binder(), y, fairify(f.body1()),
                         Formula::disj(fairify(f.body2()),
                                       Formula::af("z", Formula::bottom(), Term::var(y), true)),
                         f.at());
    }
    case Op::EU: {
      const auto& y = f.binder2();
      return Formula::eu(f.binder(), y, fairify(f.body1()),
                         Formula::conj(fairify(f.body2()),
                                       Formula::eg("z", Formula::top(), Term::var(y), true)),
                         f.at());
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// printing

namespace {

struct Printer {
  const StateNamer& namer;
  PrintStyle style;
  std::string out;

  const char* sep() const { return style == PrintStyle::Compact ? "," : ", "; }

  void term(const Term& t) {
    if (t.is_var()) {
      out += t.name();
    } else if (namer) {
      out += namer(t.state_id());
    } else {
      out += '#';
      out += std::to_string(t.state_id());
    }
  }

  void atom(bool neg, const std::string& pred, const std::vector<Term>& args) {
    if (neg) out += '!';
    out += pred;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += sep();
      term(args[i]);
    }
    out += ')';
  }
};

// precedence: 0 implication, 1 disjunction, 2 conjunction, 3 everything else
void print_core(Printer& p, const Formula& f, int min_prec) {
  auto binop = [&](const char* sym, int prec) {
    bool paren = prec < min_prec;
    if (paren) p.out += '(';
    print_core(p, f.lhs(), prec);
    p.out += sym;
    print_core(p, f.rhs(), prec + 1);
    if (paren) p.out += ')';
  };
  switch (f.op()) {
    case Op::Top: p.out += "TRUE"; return;
    case Op::Bottom: p.out += "FALSE"; return;
    case Op::Atom: p.atom(false, f.pred(), f.args()); return;
    case Op::NegAtom: p.atom(true, f.pred(), f.args()); return;
    case Op::And: binop(" && ", 2); return;
    case Op::Or: binop(" || ", 1); return;
    default: break;
  }
  if (f.fair()) p.out += f.op() == Op::AF ? "ACF" : "ECG";
  else p.out += op_name(f.op());
  p.out += '(';
  p.out += f.binder();
  if (is_binary_modal(f.op())) {
    p.out += ',';  // binder pairs stay tight: EU(x,y, ...)
    p.out += f.binder2();
    p.out += p.sep();
    print_core(p, f.body1(), 0);
    p.out += p.sep();
    print_core(p, f.body2(), 0);
  } else {
    p.out += p.sep();
    print_core(p, f.body(), 0);
  }
  p.out += p.sep();
  p.term(f.at());
  p.out += ')';
}

}  // namespace

std::string to_string(const Formula& f, const StateNamer& namer, PrintStyle style) {
  Printer p{namer, style, {}};
  print_core(p, f, 0);
  return p.out;
}

// ---------------------------------------------------------------------------
// sugared formulas

const char* sop_name(SOp op) {
  switch (op) {
    case SOp::Top: return "TRUE";
    case SOp::Bottom: return "FALSE";
    case SOp::Atom: return "atom";
    case SOp::NegAtom: return "!atom";
    case SOp::And: return "&&";
    case SOp::Or: return "||";
    case SOp::Implies: return "->";
    case SOp::AX: return "AX";
    case SOp::EX: return "EX";
    case SOp::AF: return "AF";
    case SOp::EG: return "EG";
    case SOp::AR: return "AR";
    case SOp::EU: return "EU";
    case SOp::EF: return "EF";
    case SOp::AG: return "AG";
    case SOp::AU: return "AU";
    case SOp::ER: return "ER";
  }
  return "?";
}

namespace {

bool sop_unary_modal(SOp op) {
  return op == SOp::AX || op == SOp::EX || op == SOp::AF || op == SOp::EG || op == SOp::EF ||
         op == SOp::AG;
}
bool sop_binary_modal(SOp op) {
  return op == SOp::AR || op == SOp::EU || op == SOp::AU || op == SOp::ER;
}

SugaredFormula::Node sbase(SOp op) {
  SugaredFormula::Node n;
  n.op = op;
  return n;
}

}  // namespace

SugaredFormula SugaredFormula::top() {
  return SugaredFormula(std::make_shared<const Node>(sbase(SOp::Top)));
}
SugaredFormula SugaredFormula::bottom() {
  return SugaredFormula(std::make_shared<const Node>(sbase(SOp::Bottom)));
}
SugaredFormula SugaredFormula::atom(std::string pred, std::vector<Term> args) {
  auto n = sbase(SOp::Atom);
  n.pred = std::move(pred);
  n.args = std::move(args);
  return SugaredFormula(std::make_shared<const Node>(std::move(n)));
}
SugaredFormula SugaredFormula::neg_atom(std::string pred, std::vector<Term> args) {
  auto n = sbase(SOp::NegAtom);
  n.pred = std::move(pred);
  n.args = std::move(args);
  return SugaredFormula(std::make_shared<const Node>(std::move(n)));
}
SugaredFormula SugaredFormula::binary(SOp op, SugaredFormula lhs, SugaredFormula rhs) {
  assert(op == SOp::And || op == SOp::Or || op == SOp::Implies);
  auto n = sbase(op);
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return SugaredFormula(std::make_shared<const Node>(std::move(n)));
}
SugaredFormula SugaredFormula::unary_modal(SOp op, std::string x, SugaredFormula body, Term at) {
  assert(sop_unary_modal(op));
  auto n = sbase(op);
  n.x = std::move(x);
  n.lhs = std::move(body);
  n.at = std::move(at);
  return SugaredFormula(std::make_shared<const Node>(std::move(n)));
}
SugaredFormula SugaredFormula::binary_modal(SOp op, std::string x, std::string y,
                                            SugaredFormula b1, SugaredFormula b2, Term at) {
  assert(sop_binary_modal(op));
  auto n = sbase(op);
  n.x = std::move(x);
  n.y = std::move(y);
  n.lhs = std::move(b1);
  n.rhs = std::move(b2);
  n.at = std::move(at);
  return SugaredFormula(std::make_shared<const Node>(std::move(n)));
}

SugaredFormula SugaredFormula::from_core(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return top();
    case Op::Bottom: return bottom();
    case Op::Atom: return atom(f.pred(), f.args());
    case Op::NegAtom: return neg_atom(f.pred(), f.args());
    case Op::And: return binary(SOp::And, from_core(f.lhs()), from_core(f.rhs()));
    case Op::Or: return binary(SOp::Or, from_core(f.lhs()), from_core(f.rhs()));
    case Op::AX: return unary_modal(SOp::AX, f.binder(), from_core(f.body()), f.at());
    case Op::EX: return unary_modal(SOp::EX, f.binder(), from_core(f.body()), f.at());
    case Op::AF: return unary_modal(SOp::AF, f.binder(), from_core(f.body()), f.at());
    case Op::EG: return unary_modal(SOp::EG, f.binder(), from_core(f.body()), f.at());
    case Op::AR:
      return binary_modal(SOp::AR, f.binder(), f.binder2(), from_core(f.body1()),
                          from_core(f.body2()), f.at());
    case Op::EU:
      return binary_modal(SOp::EU, f.binder(), f.binder2(), from_core(f.body1()),
                          from_core(f.body2()), f.at());
  }
  return {};
}

SOp SugaredFormula::op() const { return node_->op; }
const std::string& SugaredFormula::pred() const { return node_->pred; }
const std::vector<Term>& SugaredFormula::args() const { return node_->args; }
const SugaredFormula& SugaredFormula::lhs() const { return node_->lhs; }
const SugaredFormula& SugaredFormula::rhs() const { return node_->rhs; }
const std::string& SugaredFormula::binder() const { return node_->x; }
const std::string& SugaredFormula::binder2() const { return node_->y; }
const Term& SugaredFormula::at() const { return node_->at; }

bool operator==(const SugaredFormula& a, const SugaredFormula& b) {
  if (!a || !b) return !a && !b;
  if (a.node() == b.node()) return true;
  const auto& x = *a.node();
  const auto& y = *b.node();
  return x.op == y.op && x.pred == y.pred && x.args == y.args && x.x == y.x && x.y == y.y &&
         x.at == y.at && x.lhs == y.lhs && x.rhs == y.rhs;
}

namespace {

void sfree_rec(const SugaredFormula& f, std::vector<std::string>& bound,
               std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_var() && std::find(bound.begin(), bound.end(), t.name()) == bound.end())
      out.insert(t.name());
  };
  SOp op = f.op();
  if (op == SOp::Atom || op == SOp::NegAtom) {
    for (const auto& t : f.args()) term(t);
  } else if (op == SOp::And || op == SOp::Or || op == SOp::Implies) {
    sfree_rec(f.lhs(), bound, out);
    sfree_rec(f.rhs(), bound, out);
  } else if (sop_unary_modal(op)) {
    term(f.at());
    bound.push_back(f.binder());
    sfree_rec(f.lhs(), bound, out);
    bound.pop_back();
  } else if (sop_binary_modal(op)) {
    term(f.at());
    bound.push_back(f.binder());
    sfree_rec(f.lhs(), bound, out);
    bound.back() = f.binder2();
    sfree_rec(f.rhs(), bound, out);
    bound.pop_back();
  }
}

void sall_rec(const SugaredFormula& f, std::set<std::string>& out) {
  SOp op = f.op();
  if (op == SOp::Atom || op == SOp::NegAtom) {
    for (const auto& t : f.args())
      if (t.is_var()) out.insert(t.name());
    return;
  }
  if (sop_unary_modal(op) || sop_binary_modal(op)) {
    out.insert(f.binder());
    if (sop_binary_modal(op)) out.insert(f.binder2());
    if (f.at().is_var()) out.insert(f.at().name());
  }
  if (f.lhs()) sall_rec(f.lhs(), out);
  if (f.rhs()) sall_rec(f.rhs(), out);
}

Formula expand_er(const std::string& x, const std::string& y, const Formula& p1,
                  const Formula& p2, const Term& at) {
  auto avoid = all_vars(p1);
  for (const auto& v : all_vars(p2)) avoid.insert(v);
  avoid.insert(x);
  avoid.insert(y);
  std::string z = fresh_name(avoid);
  Formula both = Formula::conj(substitute(Term::var(z), x, p1), substitute(Term::var(z), y, p2));
  return Formula::disj(Formula::eu(y, z, p2, both, at), Formula::eg(y, p2, at));
}

}  // namespace

std::set<std::string> free_vars(const SugaredFormula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  sfree_rec(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const SugaredFormula& f) {
  std::set<std::string> out;
  sall_rec(f, out);
  return out;
}

Formula expand_abbrev(const SugaredFormula& f) {
  switch (f.op()) {
    case SOp::Top: return Formula::top();
    case SOp::Bottom: return Formula::bottom();
    case SOp::Atom: return Formula::atom(f.pred(), f.args());
    case SOp::NegAtom: return Formula::neg_atom(f.pred(), f.args());
    case SOp::And: return Formula::conj(expand_abbrev(f.lhs()), expand_abbrev(f.rhs()));
    case SOp::Or: return Formula::disj(expand_abbrev(f.lhs()), expand_abbrev(f.rhs()));
    case SOp::Implies:
      return Formula::disj(dualize(expand_abbrev(f.lhs())), expand_abbrev(f.rhs()));
    case SOp::AX: return Formula::ax(f.binder(), expand_abbrev(f.lhs()), f.at());
    case SOp::EX: return Formula::ex(f.binder(), expand_abbrev(f.lhs()), f.at());
    case SOp::AF: return Formula::af(f.binder(), expand_abbrev(f.lhs()), f.at());
    case SOp::EG: return Formula::eg(f.binder(), expand_abbrev(f.lhs()), f.at());
    case SOp::AR:
      return Formula::ar(f.binder(), f.binder2(), expand_abbrev(f.lhs()), expand_abbrev(f.rhs()),
                         f.at());
    case SOp::EU:
      return Formula::eu(f.binder(), f.binder2(), expand_abbrev(f.lhs()), expand_abbrev(f.rhs()),
                         f.at());
    case SOp::EF: {
      Formula body = expand_abbrev(f.lhs());
      auto avoid = all_vars(body);
      avoid.insert(f.binder());
      return Formula::eu(fresh_name(avoid), f.binder(), Formula::top(), body, f.at());
    }
    case SOp::AG: {
      // not EF(not body), with the negation pushed through EU(TRUE, .)
      Formula body = expand_abbrev(f.lhs());
      auto avoid = all_vars(body);
      avoid.insert(f.binder());
      return Formula::ar(fresh_name(avoid), f.binder(), Formula::bottom(), body, f.at());
    }
    case SOp::ER:
      return expand_er(f.binder(), f.binder2(), expand_abbrev(f.lhs()), expand_abbrev(f.rhs()),
                       f.at());
    case SOp::AU: {
      Formula n1 = dualize(expand_abbrev(f.lhs()));
      Formula n2 = dualize(expand_abbrev(f.rhs()));
      return dualize(expand_er(f.binder(), f.binder2(), n1, n2, f.at()));
    }
  }
  return {};
}

namespace {

void print_sugared(Printer& p, const SugaredFormula& f, int min_prec) {
  auto binop = [&](const char* sym, int prec, bool right_assoc) {
    bool paren = prec < min_prec;
    if (paren) p.out += '(';
    print_sugared(p, f.lhs(), right_assoc ? prec + 1 : prec);
    p.out += sym;
    print_sugared(p, f.rhs(), right_assoc ? prec : prec + 1);
    if (paren) p.out += ')';
  };
  SOp op = f.op();
  switch (op) {
    case SOp::Top: p.out += "TRUE"; return;
    case SOp::Bottom: p.out += "FALSE"; return;
    case SOp::Atom: p.atom(false, f.pred(), f.args()); return;
    case SOp::NegAtom: p.atom(true, f.pred(), f.args()); return;
    case SOp::Implies: binop(" -> ", 0, true); return;
    case SOp::Or: binop(" || ", 1, false); return;
    case SOp::And: binop(" && ", 2, false); return;
    default: break;
  }
  p.out += sop_name(op);
  p.out += '(';
  p.out += f.binder();
  if (sop_binary_modal(op)) {
    p.out += ',';
    p.out += f.binder2();
    p.out += p.sep();
    print_sugared(p, f.lhs(), 0);
    p.out += p.sep();
    print_sugared(p, f.rhs(), 0);
  } else {
    p.out += p.sep();
    print_sugared(p, f.lhs(), 0);
  }
  p.out += p.sep();
  p.term(f.at());
  p.out += ')';
}

}  // namespace

std::string to_string(const SugaredFormula& f, const StateNamer& namer, PrintStyle style) {
  Printer p{namer, style, {}};
  print_sugared(p, f, 0);
  return p.out;
}

}  // namespace sctl
