#pragma once

// Parsed form of a model file: variables, initial values, guarded
// transitions with parallel assignments, atomic predicate definitions,
// fairness constraints and named specifications.

#include <cstdint>
#include <string>
#include <vector>

#include "sctl/formula.hpp"

namespace sctl {

struct Span {
  int line = 0;
  int col = 0;
};

enum class ExprKind : std::uint8_t { Bool, Int, Var, Access, Not, Neg, Binary };
enum class BinOp : std::uint8_t { Add, Sub, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* binop_symbol(BinOp op);

struct Expr {
  ExprKind kind = ExprKind::Bool;
  bool bval = false;
  std::int64_t ival = 0;
  std::string name;   // variable; for Access the variable read from `param`
  std::string param;  // Access only
  BinOp bop = BinOp::And;
  std::vector<Expr> kids;
  Span span;

  static Expr boolean(bool v, Span sp = {});
  static Expr integer(std::int64_t v, Span sp = {});
  static Expr var(std::string n, Span sp = {});
  static Expr access(std::string param, std::string var, Span sp = {});
  static Expr negate(Expr e, Span sp = {});  // boolean !
  static Expr minus(Expr e, Span sp = {});   // arithmetic -
  static Expr binary(BinOp op, Expr l, Expr r, Span sp = {});
};

bool operator==(const Expr& a, const Expr& b);  // ignores spans

struct VarDecl {
  std::string name;
  bool is_bool = true;
  std::int64_t lo = 0, hi = 1;
  Span span;
};

struct Assignment {
  std::string var;
  Expr value;
  Span span;
};

struct TransitionDef {
  Expr guard;
  std::vector<Assignment> assigns;
  Span span;
};

struct AtomicDef {
  std::string name;
  std::vector<std::string> params;
  Expr body;
  Span span;
};

struct SpecDef {
  std::string name;
  SugaredFormula formula;  // may mention the reserved constant `ini` as a variable
  Span span;
};

struct ModelDef {
  std::string name;
  std::vector<VarDecl> vars;
  std::vector<Assignment> init;
  std::vector<TransitionDef> transitions;
  std::vector<AtomicDef> atomics;
  std::vector<SugaredFormula> fairness;
  std::vector<SpecDef> specs;
};

bool operator==(const VarDecl& a, const VarDecl& b);
bool operator==(const Assignment& a, const Assignment& b);
bool operator==(const TransitionDef& a, const TransitionDef& b);
bool operator==(const AtomicDef& a, const AtomicDef& b);
bool operator==(const SpecDef& a, const SpecDef& b);
bool operator==(const ModelDef& a, const ModelDef& b);

enum class Severity : std::uint8_t { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d, const std::string& file = {});

/// Name resolution and typing. Returns every problem found; an empty
/// result means compile() will accept the definition.
std::vector<Diagnostic> check_model(const ModelDef& def);

/// Renders in the concrete model syntax; parse_model(render_model(d)) == d.
std::string render_model(const ModelDef& def);
std::string render_expr(const Expr& e);

}  // namespace sctl
