#pragma once

// CTL_P formulas: CTL whose modalities bind state variables and whose
// atoms are n-ary relations over states.
//
// A Formula is an immutable handle onto a shared node; copies are cheap and
// the same node may be referenced from many places. Negation only occurs on
// atoms. The binder of AX/EX/AF/EG scopes over the body only, never over the
// evaluation term `at`; AR/EU bind `x` in the first body and `y` in the
// second.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace sctl {

using StateId = std::uint32_t;

class Term {
 public:
  Term() : v_(std::string{}) {}
  static Term var(std::string name) { return Term(std::move(name)); }
  static Term state(StateId s) { return Term(s); }

  bool is_var() const { return std::holds_alternative<std::string>(v_); }
  bool is_state() const { return std::holds_alternative<StateId>(v_); }
  const std::string& name() const { return std::get<std::string>(v_); }
  StateId state_id() const { return std::get<StateId>(v_); }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  explicit Term(std::string n) : v_(std::move(n)) {}
  explicit Term(StateId s) : v_(s) {}
  std::variant<std::string, StateId> v_;
};

enum class Op : std::uint8_t { Top, Bottom, Atom, NegAtom, And, Or, AX, EX, AF, EG, AR, EU };

const char* op_name(Op op);
bool is_modal(Op op);
bool is_fixpoint(Op op);  // AF, EG, AR, EU
bool is_binary_modal(Op op);  // AR, EU

class Formula {
 public:
  struct Node;

  Formula() = default;  // null handle; only valid as a placeholder

  static Formula top();
  static Formula bottom();
  static Formula atom(std::string pred, std::vector<Term> args);
  static Formula neg_atom(std::string pred, std::vector<Term> args);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula ax(std::string x, Formula body, Term at);
  static Formula ex(std::string x, Formula body, Term at);
  /// `fair` selects the fairness-constrained variant A_C F.
  static Formula af(std::string x, Formula body, Term at, bool fair = false);
  /// `fair` selects the fairness-constrained variant E_C G.
  static Formula eg(std::string x, Formula body, Term at, bool fair = false);
  static Formula ar(std::string x, std::string y, Formula body1, Formula body2, Term at);
  static Formula eu(std::string x, std::string y, Formula body1, Formula body2, Term at);

  explicit operator bool() const { return node_ != nullptr; }
  Op op() const;
  bool fair() const;
  const std::string& pred() const;
  const std::vector<Term>& args() const;
  const Formula& lhs() const;   // And/Or left, modal body (first body for AR/EU)
  const Formula& rhs() const;   // And/Or right, second body of AR/EU
  const Formula& body() const { return lhs(); }
  const Formula& body1() const { return lhs(); }
  const Formula& body2() const { return rhs(); }
  const std::string& binder() const;   // x
  const std::string& binder2() const;  // y (AR/EU only)
  const Term& at() const;

  /// Same modality and bodies, evaluated at a different term.
  Formula with_at(Term at) const;

  const Node* node() const { return node_.get(); }
  static Formula from_node(Node n);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op = Op::Top;
  bool fair = false;
  std::string pred;
  std::vector<Term> args;
  Formula lhs, rhs;
  std::string x, y;
  Term at;
};

/// Structural equality modulo renaming of bound variables.
bool alpha_equal(const Formula& a, const Formula& b);
std::size_t alpha_hash(const Formula& f);
/// Exact structural equality, binder names included.
bool identical(const Formula& a, const Formula& b);

inline bool operator==(const Formula& a, const Formula& b) { return alpha_equal(a, b); }

std::set<std::string> free_vars(const Formula& f);
/// Every variable name occurring anywhere, bound or free.
std::set<std::string> all_vars(const Formula& f);
bool is_closed(const Formula& f);
/// Constructor count.
std::size_t size(const Formula& f);

/// Capture-avoiding (t/x)f.
Formula substitute(const Term& t, const std::string& x, const Formula& f);

/// Negation normal form of the negation of f.
Formula dualize(const Formula& f);

/// Replaces every path quantifier by its fairness-constrained form: EG and AF
/// become fair, and EX, AX, EU, AR are rewritten through fair EG(TRUE) and
/// fair AF(FALSE) at the successor or witness state.
Formula fairify(const Formula& f);

/// First of z, z1, z2, ... not in `avoid`.
std::string fresh_name(const std::set<std::string>& avoid);

enum class PrintStyle { Source, Compact };
using StateNamer = std::function<std::string(StateId)>;

/// Renders in the model-file syntax; state constants through `namer`
/// (defaults to `#<id>`).
std::string to_string(const Formula& f, const StateNamer& namer = {},
                      PrintStyle style = PrintStyle::Source);

// ---------------------------------------------------------------------------
// Sugared formulas: the core constructors plus implication and the derived
// modalities EF, AG, AU, ER. expand_abbrev lowers them.

enum class SOp : std::uint8_t {
  Top, Bottom, Atom, NegAtom, And, Or, Implies,
  AX, EX, AF, EG, AR, EU, EF, AG, AU, ER
};

const char* sop_name(SOp op);

class SugaredFormula {
 public:
  struct Node;

  SugaredFormula() = default;

  static SugaredFormula top();
  static SugaredFormula bottom();
  static SugaredFormula atom(std::string pred, std::vector<Term> args);
  static SugaredFormula neg_atom(std::string pred, std::vector<Term> args);
  static SugaredFormula binary(SOp op, SugaredFormula lhs, SugaredFormula rhs);
  static SugaredFormula unary_modal(SOp op, std::string x, SugaredFormula body, Term at);
  static SugaredFormula binary_modal(SOp op, std::string x, std::string y, SugaredFormula b1,
                                     SugaredFormula b2, Term at);
  /// Embeds a core formula (fairness flags are dropped).
  static SugaredFormula from_core(const Formula& f);

  explicit operator bool() const { return node_ != nullptr; }
  SOp op() const;
  const std::string& pred() const;
  const std::vector<Term>& args() const;
  const SugaredFormula& lhs() const;
  const SugaredFormula& rhs() const;
  const std::string& binder() const;
  const std::string& binder2() const;
  const Term& at() const;
  const Node* node() const { return node_.get(); }

 private:
  explicit SugaredFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct SugaredFormula::Node {
  SOp op = SOp::Top;
  std::string pred;
  std::vector<Term> args;
  SugaredFormula lhs, rhs;
  std::string x, y;
  Term at;
};

bool operator==(const SugaredFormula& a, const SugaredFormula& b);  // exact
std::set<std::string> free_vars(const SugaredFormula& f);
std::set<std::string> all_vars(const SugaredFormula& f);

/// Lowers implication and EF/AG/AU/ER to core constructors. Fresh
/// variables avoid every name in the rewritten bodies.
Formula expand_abbrev(const SugaredFormula& f);

std::string to_string(const SugaredFormula& f, const StateNamer& namer = {},
                      PrintStyle style = PrintStyle::Source);

}  // namespace sctl
