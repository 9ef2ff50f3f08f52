#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "sctl/frontend.hpp"

namespace sctl {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  Span span;
};

struct SyntaxError {
  Span span;
  std::string message;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* syms[] = {":=", "..", "!=", "<=", ">=", "&&", "||", "->", "{", "}", "(", ")", ";",
                               ":",  ",",  "=",  "<",  ">",  "!",  "+",  "-"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (src.compare(i, 2, "/*") == 0) {
      Span start{line, col};
      auto end = src.find("*/", i + 2);
      if (end == std::string::npos) throw SyntaxError{start, "unterminated comment"};
      adv(end + 2 - i);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.span = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw SyntaxError{t.span, "integer literal out of range"};
      }
      adv(j - i);
    } else {
      bool found = false;
      for (const char* s : syms) {
        std::size_t n = std::char_traits<char>::length(s);
        if (src.compare(i, n, s) == 0) {
          t.kind = Tok::Sym;
          t.text = s;
          adv(n);
          found = true;
          break;
        }
      }
      if (!found) throw SyntaxError{t.span, std::string("unexpected character '") + c + "'"};
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.span = {line, col};
  out.push_back(end);
  return out;
}

bool is_unary_modal(const std::string& s) {
  return s == "AX" || s == "EX" || s == "AF" || s == "EG" || s == "EF" || s == "AG";
}
bool is_binary_modal_kw(const std::string& s) { return s == "AR" || s == "ER" || s == "AU" || s == "EU"; }

SOp sop_of(const std::string& s) {
  if (s == "AX") return SOp::AX;
  if (s == "EX") return SOp::EX;
  if (s == "AF") return SOp::AF;
  if (s == "EG") return SOp::EG;
  if (s == "EF") return SOp::EF;
  if (s == "AG") return SOp::AG;
  if (s == "AR") return SOp::AR;
  if (s == "ER") return SOp::ER;
  if (s == "AU") return SOp::AU;
  return SOp::EU;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  ModelDef model() {
    ModelDef d;
    keyword("Model");
    d.name = ident("model name");
    sym("(");
    sym(")");
    sym("{");
    section("Var");
    while (!peek_sym("}")) var_decls(d);
    sym("}");
    if (peek_kw("Init")) {
      section("Init");
      while (!peek_sym("}")) d.init.push_back(assignment());
      sym("}");
    }
    if (peek_kw("Transition")) {
      section("Transition");
      while (!peek_sym("}")) d.transitions.push_back(transition());
      sym("}");
    }
    if (peek_kw("Atomic")) {
      section("Atomic");
      while (!peek_sym("}")) d.atomics.push_back(atomic());
      sym("}");
    }
    if (peek_kw("Fairness")) {
      section("Fairness");
      if (!peek_sym("}")) {
        d.fairness.push_back(formula());
        while (accept(",")) d.fairness.push_back(formula());
      }
      sym("}");
    }
    section("Spec");
    while (!peek_sym("}")) {
      SpecDef s;
      s.span = cur().span;
      s.name = ident("specification name");
      sym(":=");
      s.formula = formula();
      sym(";");
      d.specs.push_back(std::move(s));
    }
    sym("}");
    sym("}");
    if (cur().kind != Tok::End) fail("unexpected text after the model");
    return d;
  }

  SugaredFormula formula_only() {
    auto f = formula();
    if (cur().kind != Tok::End) fail("unexpected text after the formula");
    return f;
  }

 private:
  const Token& cur() const { return t_[pos_]; }
  const Token& ahead(std::size_t k) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError{cur().span, msg}; }

  static std::string show(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  bool peek_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool peek_kw(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool accept(const char* s) {
    if (!peek_sym(s)) return false;
    ++pos_;
    return true;
  }
  void sym(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "', found " + show(cur()));
  }
  void keyword(const char* s) {
    if (!peek_kw(s)) fail(std::string("expected '") + s + "', found " + show(cur()));
    ++pos_;
  }
  void section(const char* s) {
    keyword(s);
    sym("{");
  }
  std::string ident(const char* what) {
    if (cur().kind != Tok::Ident) fail(std::string("expected ") + what + ", found " + show(cur()));
    return t_[pos_++].text;
  }
  std::int64_t integer() {
    bool neg = accept("-");
    if (cur().kind != Tok::Int) fail("expected an integer, found " + show(cur()));
    std::int64_t v = t_[pos_++].value;
    return neg ? -v : v;
  }

  void var_decls(ModelDef& d) {
    std::vector<std::pair<std::string, Span>> names;
    do {
      Span sp = cur().span;
      names.push_back({ident("variable name"), sp});
    } while (accept(","));
    sym(":");
    VarDecl proto;
    if (peek_kw("Bool")) {
      ++pos_;
      proto.is_bool = true;
      proto.lo = 0;
      proto.hi = 1;
    } else {
      sym("(");
      proto.is_bool = false;
      proto.lo = integer();
      sym("..");
      proto.hi = integer();
      sym(")");
    }
    sym(";");
    for (auto& [n, sp] : names) {
      VarDecl v = proto;
      v.name = n;
      v.span = sp;
      d.vars.push_back(std::move(v));
    }
  }

  Assignment assignment() {
    Assignment a;
    a.span = cur().span;
    a.var = ident("variable name");
    sym(":=");
    a.value = expr();
    sym(";");
    return a;
  }

  TransitionDef transition() {
    TransitionDef t;
    t.span = cur().span;
    t.guard = expr();
    sym(":");
    sym("{");
    while (!peek_sym("}")) t.assigns.push_back(assignment());
    sym("}");
    sym(";");
    return t;
  }

  AtomicDef atomic() {
    AtomicDef a;
    a.span = cur().span;
    a.name = ident("predicate name");
    sym("(");
    if (!peek_sym(")")) {
      a.params.push_back(ident("parameter name"));
      while (accept(",")) a.params.push_back(ident("parameter name"));
    }
    sym(")");
    sym(":=");
    a.body = expr();
    sym(";");
    return a;
  }

  // expressions: || < && < comparison < + - < unary
  Expr expr() { return expr_or(); }

  Expr expr_or() {
    Expr l = expr_and();
    while (peek_sym("||")) {
      Span sp = cur().span;
      ++pos_;
      l = Expr::binary(BinOp::Or, std::move(l), expr_and(), sp);
    }
    return l;
  }

  Expr expr_and() {
    Expr l = expr_cmp();
    while (peek_sym("&&")) {
      Span sp = cur().span;
      ++pos_;
      l = Expr::binary(BinOp::And, std::move(l), expr_cmp(), sp);
    }
    return l;
  }

  std::optional<BinOp> cmp_op() const {
    if (cur().kind != Tok::Sym) return std::nullopt;
    const auto& s = cur().text;
    if (s == "=") return BinOp::Eq;
    if (s == "!=") return BinOp::Ne;
    if (s == "<") return BinOp::Lt;
    if (s == "<=") return BinOp::Le;
    if (s == ">") return BinOp::Gt;
    if (s == ">=") return BinOp::Ge;
    return std::nullopt;
  }

  Expr expr_cmp() {
    Expr l = expr_add();
    if (auto op = cmp_op()) {
      Span sp = cur().span;
      ++pos_;
      l = Expr::binary(*op, std::move(l), expr_add(), sp);
      if (cmp_op()) fail("comparisons do not chain; add parentheses");
    }
    return l;
  }

  Expr expr_add() {
    Expr l = expr_unary();
    while (peek_sym("+") || peek_sym("-")) {
      Span sp = cur().span;
      BinOp op = cur().text == "+" ? BinOp::Add : BinOp::Sub;
      ++pos_;
      l = Expr::binary(op, std::move(l), expr_unary(), sp);
    }
    return l;
  }

  Expr expr_unary() {
    Span sp = cur().span;
    if (accept("!")) return Expr::negate(expr_unary(), sp);
    if (accept("-")) {
      if (cur().kind == Tok::Int) {
        // a literal keeps its sign
        std::int64_t v = t_[pos_++].value;
        return Expr::integer(-v, sp);
      }
      return Expr::minus(expr_unary(), sp);
    }
    return expr_primary();
  }

  Expr expr_primary() {
    Span sp = cur().span;
    if (cur().kind == Tok::Int) return Expr::integer(t_[pos_++].value, sp);
    if (accept("(")) {
      Expr e = expr();
      sym(")");
      return e;
    }
    if (cur().kind == Tok::Ident) {
      std::string n = t_[pos_++].text;
      if (n == "true" || n == "false") return Expr::boolean(n == "true", sp);
      if (accept("(")) {
        std::string v = ident("variable name");
        sym(")");
        return Expr::access(n, v, sp);
      }
      return Expr::var(n, sp);
    }
    fail("expected an expression, found " + show(cur()));
  }

  // formulas: -> (right) < || < && < unary
  SugaredFormula formula() {
    SugaredFormula l = f_or();
    if (accept("->")) return SugaredFormula::binary(SOp::Implies, l, formula());
    return l;
  }

  SugaredFormula f_or() {
    SugaredFormula l = f_and();
    while (accept("||")) l = SugaredFormula::binary(SOp::Or, l, f_and());
    return l;
  }

  SugaredFormula f_and() {
    SugaredFormula l = f_unary();
    while (accept("&&")) l = SugaredFormula::binary(SOp::And, l, f_unary());
    return l;
  }

  std::vector<Term> terms() {
    std::vector<Term> out;
    sym("(");
    if (!peek_sym(")")) {
      out.push_back(Term::var(ident("state variable")));
      while (accept(",")) out.push_back(Term::var(ident("state variable")));
    }
    sym(")");
    return out;
  }

  SugaredFormula f_unary() {
    if (accept("!")) {
      std::string p = ident("predicate after '!' (negation applies to atoms only)");
      return SugaredFormula::neg_atom(p, terms());
    }
    if (accept("(")) {
      auto f = formula();
      sym(")");
      return f;
    }
    if (cur().kind != Tok::Ident) fail("expected a formula, found " + show(cur()));
    Span sp = cur().span;
    std::string n = t_[pos_++].text;
    if (n == "TRUE") return SugaredFormula::top();
    if (n == "FALSE") return SugaredFormula::bottom();
    if (is_unary_modal(n) || is_binary_modal_kw(n)) return modal(n, sp);
    return SugaredFormula::atom(n, terms());
  }

  struct Arg {
    bool bare = false;
    std::string name;
    SugaredFormula f;
    Span span;
  };

  SugaredFormula modal(const std::string& kw, Span sp) {
    sym("(");
    std::vector<Arg> args;
    do {
      Arg a;
      a.span = cur().span;
      if (cur().kind == Tok::Ident && (ahead(1).text == "," || ahead(1).text == ")") && ahead(1).kind == Tok::Sym &&
          cur().text != "TRUE" && cur().text != "FALSE") {
        a.bare = true;
        a.name = t_[pos_++].text;
      } else {
        a.f = formula();
      }
      args.push_back(std::move(a));
    } while (accept(","));
    sym(")");
    bool binary = is_binary_modal_kw(kw);
    std::size_t want = binary ? 5 : 3;
    if (args.size() != want)
      throw SyntaxError{sp, "arity mismatch: " + kw + " expects " + std::to_string(want) + " arguments (" +
                                (binary ? "x, y, f1, f2, t" : "x, f, t") + "), got " +
                                std::to_string(args.size())};
    auto binder = [&](const Arg& a) {
      if (!a.bare) throw SyntaxError{a.span, kw + ": expected a bound variable"};
      return a.name;
    };
    auto body = [&](const Arg& a) {
      if (a.bare) throw SyntaxError{a.span, kw + ": expected a formula, found variable '" + a.name + "'"};
      return a.f;
    };
    const Arg& last = args.back();
    if (!last.bare) throw SyntaxError{last.span, kw + ": the last argument must be ini or a bound variable"};
    Term at = Term::var(last.name);
    if (binary)
      return SugaredFormula::binary_modal(sop_of(kw), binder(args[0]), binder(args[1]), body(args[2]),
                                          body(args[3]), at);
    return SugaredFormula::unary_modal(sop_of(kw), binder(args[0]), body(args[1]), at);
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_model(const std::string& text) {
  ParseResult r;
  ModelDef d;
  try {
    Parser p(lex(text));
    d = p.model();
  } catch (const SyntaxError& e) {
    r.diagnostics.push_back({Severity::Error, e.span, e.message});
    return r;
  }
  r.diagnostics = check_model(d);
  bool errors = false;
  for (const auto& x : r.diagnostics) errors = errors || x.severity == Severity::Error;
  if (!errors) r.model = std::move(d);
  return r;
}

ParseResult parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({Severity::Error, {}, "cannot open file '" + path + "'"});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::optional<SugaredFormula> parse_formula(const std::string& text, std::vector<Diagnostic>* diagnostics) {
  try {
    Parser p(lex(text));
    return p.formula_only();
  } catch (const SyntaxError& e) {
    if (diagnostics) diagnostics->push_back({Severity::Error, e.span, e.message});
    return std::nullopt;
  }
}

Formula spec_formula(const SugaredFormula& spec, StateId init) {
  return substitute(Term::state(init), "ini", expand_abbrev(spec));
}

}  // namespace sctl
