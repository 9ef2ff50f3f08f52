#include "sctl/model_def.hpp"

#include <map>
#include <optional>
#include <set>

namespace sctl {

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

Expr Expr::boolean(bool v, Span sp) {
  Expr e;
  e.kind = ExprKind::Bool;
  e.bval = v;
  e.span = sp;
  return e;
}
Expr Expr::integer(std::int64_t v, Span sp) {
  Expr e;
  e.kind = ExprKind::Int;
  e.ival = v;
  e.span = sp;
  return e;
}
Expr Expr::var(std::string n, Span sp) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(n);
  e.span = sp;
  return e;
}
Expr Expr::access(std::string param, std::string v, Span sp) {
  Expr e;
  e.kind = ExprKind::Access;
  e.param = std::move(param);
  e.name = std::move(v);
  e.span = sp;
  return e;
}
Expr Expr::negate(Expr x, Span sp) {
  Expr e;
  e.kind = ExprKind::Not;
  e.kids.push_back(std::move(x));
  e.span = sp;
  return e;
}
Expr Expr::minus(Expr x, Span sp) {
  Expr e;
  e.kind = ExprKind::Neg;
  e.kids.push_back(std::move(x));
  e.span = sp;
  return e;
}
Expr Expr::binary(BinOp op, Expr l, Expr r, Span sp) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.bop = op;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  e.span = sp;
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Bool: return a.bval == b.bval;
    case ExprKind::Int: return a.ival == b.ival;
    case ExprKind::Var: return a.name == b.name;
    case ExprKind::Access: return a.name == b.name && a.param == b.param;
    case ExprKind::Not:
    case ExprKind::Neg: return a.kids == b.kids;
    case ExprKind::Binary: return a.bop == b.bop && a.kids == b.kids;
  }
  return false;
}

bool operator==(const VarDecl& a, const VarDecl& b) {
  return a.name == b.name && a.is_bool == b.is_bool && (a.is_bool || (a.lo == b.lo && a.hi == b.hi));
}
bool operator==(const Assignment& a, const Assignment& b) {
  return a.var == b.var && a.value == b.value;
}
bool operator==(const TransitionDef& a, const TransitionDef& b) {
  return a.guard == b.guard && a.assigns == b.assigns;
}
bool operator==(const AtomicDef& a, const AtomicDef& b) {
  return a.name == b.name && a.params == b.params && a.body == b.body;
}
bool operator==(const SpecDef& a, const SpecDef& b) {
  return a.name == b.name && a.formula == b.formula;
}
bool operator==(const ModelDef& a, const ModelDef& b) {
  return a.name == b.name && a.vars == b.vars && a.init == b.init &&
         a.transitions == b.transitions && a.atomics == b.atomics && a.fairness == b.fairness &&
         a.specs == b.specs;
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string out;
  if (!file.empty()) out += file + ":";
  if (d.span.line > 0) out += std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ":";
  if (!out.empty()) out += ' ';
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  return out;
}

// ---------------------------------------------------------------------------
// checking

namespace {

enum class Ty { Bool, Int };

const char* ty_name(Ty t) { return t == Ty::Bool ? "Bool" : "integer"; }

struct Checker {
  const ModelDef& def;
  std::vector<Diagnostic> out;
  std::map<std::string, const VarDecl*> vars;
  std::map<std::string, const AtomicDef*> atomics;

  void error(Span sp, std::string msg) { out.push_back({Severity::Error, sp, std::move(msg)}); }

  // params: names allowed in Access, null outside atomic bodies
  std::optional<Ty> type_of(const Expr& e, const std::vector<std::string>* params) {
    switch (e.kind) {
      case ExprKind::Bool: return Ty::Bool;
      case ExprKind::Int: return Ty::Int;
      case ExprKind::Var: {
        if (params) {
          error(e.span, "bare variable '" + e.name + "' in an atomic body; use param(" + e.name + ")");
          return std::nullopt;
        }
        auto it = vars.find(e.name);
        if (it == vars.end()) {
          error(e.span, "unknown variable '" + e.name + "'");
          return std::nullopt;
        }
        return it->second->is_bool ? Ty::Bool : Ty::Int;
      }
      case ExprKind::Access: {
        if (!params) {
          error(e.span, "state access '" + e.param + "(" + e.name + ")' outside an atomic body");
          return std::nullopt;
        }
        bool known = false;
        for (const auto& p : *params) known |= p == e.param;
        if (!known) {
          error(e.span, "unknown state parameter '" + e.param + "'");
          return std::nullopt;
        }
        auto it = vars.find(e.name);
        if (it == vars.end()) {
          error(e.span, "unknown variable '" + e.name + "'");
          return std::nullopt;
        }
        return it->second->is_bool ? Ty::Bool : Ty::Int;
      }
      case ExprKind::Not: {
        auto t = type_of(e.kids[0], params);
        if (t && *t != Ty::Bool) error(e.span, "operand of '!' must be Bool");
        return Ty::Bool;
      }
      case ExprKind::Neg: {
        auto t = type_of(e.kids[0], params);
        if (t && *t != Ty::Int) error(e.span, "operand of unary '-' must be an integer");
        return Ty::Int;
      }
      case ExprKind::Binary: {
        auto l = type_of(e.kids[0], params);
        auto r = type_of(e.kids[1], params);
        const char* sym = binop_symbol(e.bop);
        auto want = [&](Ty t) {
          if ((l && *l != t) || (r && *r != t))
            error(e.span, std::string("operands of '") + sym + "' must be " + ty_name(t));
        };
        switch (e.bop) {
          case BinOp::Add:
          case BinOp::Sub: want(Ty::Int); return Ty::Int;
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge: want(Ty::Int); return Ty::Bool;
          case BinOp::And:
          case BinOp::Or: want(Ty::Bool); return Ty::Bool;
          case BinOp::Eq:
          case BinOp::Ne:
            if (l && r && *l != *r)
              error(e.span, std::string("operands of '") + sym + "' have different types");
            return Ty::Bool;
        }
      }
    }
    return std::nullopt;
  }

  void assignment(const Assignment& a, const std::vector<std::string>* params) {
    auto it = vars.find(a.var);
    if (it == vars.end()) {
      error(a.span, "assignment to unknown variable '" + a.var + "'");
      type_of(a.value, params);
      return;
    }
    auto t = type_of(a.value, params);
    Ty want = it->second->is_bool ? Ty::Bool : Ty::Int;
    if (t && *t != want)
      error(a.value.span, "cannot assign " + std::string(ty_name(*t)) + " to " +
                              (want == Ty::Bool ? "Bool" : "range") + " variable '" + a.var + "'");
  }

  void formula(const SugaredFormula& f, Span sp, bool allow_modal, const std::string& what) {
    SOp op = f.op();
    if (op == SOp::Atom || op == SOp::NegAtom) {
      auto it = atomics.find(f.pred());
      if (it == atomics.end()) {
        error(sp, "unknown atomic predicate '" + f.pred() + "' in " + what);
      } else if (it->second->params.size() != f.args().size()) {
        error(sp, "predicate '" + f.pred() + "' expects " +
                      std::to_string(it->second->params.size()) + " argument(s), got " +
                      std::to_string(f.args().size()));
      }
      return;
    }
    if (op == SOp::Top || op == SOp::Bottom) return;
    if (op == SOp::And || op == SOp::Or || op == SOp::Implies) {
      formula(f.lhs(), sp, allow_modal, what);
      formula(f.rhs(), sp, allow_modal, what);
      return;
    }
    if (!allow_modal) {
      error(sp, std::string("temporal operator ") + sop_name(op) + " is not allowed in " + what);
      return;
    }
    if (f.binder() == "ini" || ((op == SOp::AR || op == SOp::EU || op == SOp::AU ||
                                 op == SOp::ER) && f.binder2() == "ini"))
      error(sp, "'ini' is reserved and cannot be bound");
    formula(f.lhs(), sp, allow_modal, what);
    if (f.rhs()) formula(f.rhs(), sp, allow_modal, what);
  }

  void run() {
    for (const auto& v : def.vars) {
      if (vars.count(v.name)) error(v.span, "duplicate variable '" + v.name + "'");
      else vars[v.name] = &v;
      if (!v.is_bool && v.lo > v.hi) error(v.span, "empty range for '" + v.name + "'");
    }
    std::set<std::string> inited;
    for (const auto& a : def.init) {
      if (!inited.insert(a.var).second) error(a.span, "variable '" + a.var + "' initialized twice");
      assignment(a, nullptr);
      if (has_var_ref(a.value)) error(a.value.span, "initial value must be a constant expression");
    }
    for (const auto& v : def.vars)
      if (!inited.count(v.name)) error(v.span, "variable '" + v.name + "' has no initial value");
    for (const auto& t : def.transitions) {
      auto g = type_of(t.guard, nullptr);
      if (g && *g != Ty::Bool) error(t.guard.span, "guard must be Bool");
      std::set<std::string> seen;
      for (const auto& a : t.assigns) {
        if (!seen.insert(a.var).second)
          error(a.span, "variable '" + a.var + "' assigned twice in one transition");
        assignment(a, nullptr);
      }
    }
    for (const auto& a : def.atomics) {
      if (atomics.count(a.name)) error(a.span, "duplicate atomic predicate '" + a.name + "'");
      else atomics[a.name] = &a;
      std::set<std::string> ps;
      for (const auto& p : a.params)
        if (!ps.insert(p).second) error(a.span, "duplicate parameter '" + p + "'");
      auto t = type_of(a.body, &a.params);
      if (t && *t != Ty::Bool) error(a.body.span, "atomic body must be Bool");
    }
    for (const auto& f : def.fairness) {
      formula(f, {}, false, "a fairness constraint");
      if (free_vars(f).size() > 1)
        error({}, "fairness constraint '" + to_string(f) + "' has more than one free variable");
    }
    std::set<std::string> names;
    for (const auto& s : def.specs) {
      if (!names.insert(s.name).second) error(s.span, "duplicate specification '" + s.name + "'");
      formula(s.formula, s.span, true, "specification '" + s.name + "'");
      for (const auto& v : free_vars(s.formula))
        if (v != "ini")
          error(s.span, "free variable '" + v + "' in specification '" + s.name + "'");
    }
  }

  static bool has_var_ref(const Expr& e) {
    if (e.kind == ExprKind::Var || e.kind == ExprKind::Access) return true;
    for (const auto& k : e.kids)
      if (has_var_ref(k)) return true;
    return false;
  }
};

}  // namespace

std::vector<Diagnostic> check_model(const ModelDef& def) {
  Checker c{def, {}, {}, {}};
  c.run();
  return std::move(c.out);
}

// ---------------------------------------------------------------------------
// rendering

namespace {

int prec_of(const Expr& e) {
  if (e.kind != ExprKind::Binary) return 5;
  switch (e.bop) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    default: return 3;
  }
}

void render(const Expr& e, int min_prec, std::string& out) {
  switch (e.kind) {
    case ExprKind::Bool: out += e.bval ? "true" : "false"; return;
    case ExprKind::Int:
      if (e.ival < 0) {
        // keeps the literal intact when reparsed
        if (min_prec > 4) out += '(';
        out += std::to_string(e.ival);
        if (min_prec > 4) out += ')';
      } else {
        out += std::to_string(e.ival);
      }
      return;
    case ExprKind::Var: out += e.name; return;
    case ExprKind::Access: out += e.param + "(" + e.name + ")"; return;
    case ExprKind::Not:
      out += '!';
      render(e.kids[0], 5, out);
      return;
    case ExprKind::Neg:
      out += '-';
      if (e.kids[0].kind == ExprKind::Int) {
        out += '(';
        render(e.kids[0], 0, out);
        out += ')';
      } else {
        render(e.kids[0], 5, out);
      }
      return;
    case ExprKind::Binary: {
      int p = prec_of(e);
      bool paren = p < min_prec;
      if (paren) out += '(';
      render(e.kids[0], p == 3 ? 4 : p, out);
      out += ' ';
      out += binop_symbol(e.bop);
      out += ' ';
      render(e.kids[1], p == 3 ? 4 : p + 1, out);
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace

std::string render_expr(const Expr& e) {
  std::string out;
  render(e, 0, out);
  return out;
}

std::string render_model(const ModelDef& def) {
  std::string o;
  o += "Model " + def.name + "()\n{\n  Var {\n";
  for (const auto& v : def.vars) {
    o += "    " + v.name + " : ";
    o += v.is_bool ? "Bool" : "(" + std::to_string(v.lo) + " .. " + std::to_string(v.hi) + ")";
    o += ";\n";
  }
  o += "  }\n  Init {\n";
  for (const auto& a : def.init) o += "    " + a.var + " := " + render_expr(a.value) + ";\n";
  o += "  }\n  Transition {\n";
  for (const auto& t : def.transitions) {
    o += "    " + render_expr(t.guard) + " : {";
    for (const auto& a : t.assigns) o += a.var + " := " + render_expr(a.value) + ";";
    o += "};\n";
  }
  o += "  }\n  Atomic {\n";
  for (const auto& a : def.atomics) {
    o += "    " + a.name + "(";
    for (std::size_t i = 0; i < a.params.size(); ++i) o += (i ? ", " : "") + a.params[i];
    o += ") := " + render_expr(a.body) + ";\n";
  }
  o += "  }\n";
  if (!def.fairness.empty()) {
    o += "  Fairness {\n    ";
    for (std::size_t i = 0; i < def.fairness.size(); ++i)
      o += (i ? ", " : "") + to_string(def.fairness[i]);
    o += "\n  }\n";
  }
  o += "  Spec {\n";
  for (const auto& s : def.specs) o += "    " + s.name + " := " + to_string(s.formula) + ";\n";
  o += "  }\n}\n";
  return o;
}

}  // namespace sctl
