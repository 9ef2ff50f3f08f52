#include "sctl/kripke.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_set>

#include "sctl/error.hpp"

namespace sctl {

bool KripkeModel::eval_atom(const std::string& pred, const std::vector<StateId>& args) const {
  int p = predicate_index(pred);
  if (p < 0) throw InputError("unknown predicate '" + pred + "'");
  if (arity(p) != static_cast<int>(args.size()))
    throw InputError("predicate '" + pred + "' expects " + std::to_string(arity(p)) +
                     " argument(s), got " + std::to_string(args.size()));
  return eval_atom(p, args.data(), args.size());
}

std::vector<bool> KripkeModel::state_bits(StateId) const { return {}; }

// ---------------------------------------------------------------------------

StateId ExplicitModel::add_state(std::string name) {
  auto id = static_cast<StateId>(names_.size());
  names_.push_back(std::move(name));
  adj_.emplace_back();
  self_.push_back({id});
  return id;
}

void ExplicitModel::add_edge(StateId from, StateId to) {
  auto& a = adj_.at(from);
  if (to >= names_.size()) throw PreconditionError("edge to unknown state");
  if (std::find(a.begin(), a.end(), to) == a.end()) a.push_back(to);
}

void ExplicitModel::add_predicate(const std::string& name, int arity) {
  if (predicate_index(name) >= 0) throw PreconditionError("duplicate predicate '" + name + "'");
  preds_.push_back({name, arity, {}, true});
}

void ExplicitModel::add_tuple(const std::string& pred, std::vector<StateId> tuple) {
  int p = predicate_index(pred);
  if (p < 0) throw InputError("unknown predicate '" + pred + "'");
  if (static_cast<int>(tuple.size()) != preds_[p].arity)
    throw InputError("arity mismatch for '" + pred + "'");
  auto& ts = preds_[p].tuples;
  auto it = std::lower_bound(ts.begin(), ts.end(), tuple);
  if (it == ts.end() || *it != tuple) ts.insert(it, std::move(tuple));
}

const std::vector<StateId>& ExplicitModel::next(StateId s) const {
  const auto& a = adj_.at(s);
  return a.empty() ? self_[s] : a;
}

int ExplicitModel::predicate_index(const std::string& name) const {
  for (std::size_t i = 0; i < preds_.size(); ++i)
    if (preds_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool ExplicitModel::eval_atom(int pred, const StateId* args, std::size_t n) const {
  const auto& ts = preds_.at(pred).tuples;
  std::vector<StateId> key(args, args + n);
  return std::binary_search(ts.begin(), ts.end(), key);
}

std::optional<StateId> ExplicitModel::find_state(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<StateId>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// compiled expressions

struct CompiledModel::Code {
  ExprKind kind;
  BinOp bop = BinOp::And;
  std::int64_t value = 0;
  int param = 0;  // Access
  std::size_t var = 0;
  std::vector<Code> kids;

  // `states` holds one payload per atomic parameter, or the current state
  // for guards and assignments.
  std::int64_t eval(const std::int32_t* const* states) const {
    switch (kind) {
      case ExprKind::Bool:
      case ExprKind::Int: return value;
      case ExprKind::Var: return states[0][var];
      case ExprKind::Access: return states[param][var];
      case ExprKind::Not: return kids[0].eval(states) ? 0 : 1;
      case ExprKind::Neg: return -kids[0].eval(states);
      case ExprKind::Binary: {
        if (bop == BinOp::And) return kids[0].eval(states) && kids[1].eval(states);
        if (bop == BinOp::Or) return kids[0].eval(states) || kids[1].eval(states);
        std::int64_t l = kids[0].eval(states), r = kids[1].eval(states);
        switch (bop) {
          case BinOp::Add: return l + r;
          case BinOp::Sub: return l - r;
          case BinOp::Eq: return l == r;
          case BinOp::Ne: return l != r;
          case BinOp::Lt: return l < r;
          case BinOp::Le: return l <= r;
          case BinOp::Gt: return l > r;
          case BinOp::Ge: return l >= r;
          default: return 0;
        }
      }
    }
    return 0;
  }
};

namespace {

using Code = CompiledModel::Code;

Code lower(const Expr& e, const std::vector<VarDecl>& vars, const std::vector<std::string>& params) {
  Code c;
  c.kind = e.kind;
  auto var_index = [&](const std::string& n) -> std::size_t {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == n) return i;
    throw InputError("unknown variable '" + n + "'");
  };
  switch (e.kind) {
    case ExprKind::Bool: c.value = e.bval ? 1 : 0; break;
    case ExprKind::Int: c.value = e.ival; break;
    case ExprKind::Var: c.var = var_index(e.name); break;
    case ExprKind::Access:
      c.var = var_index(e.name);
      c.param = static_cast<int>(std::find(params.begin(), params.end(), e.param) - params.begin());
      break;
    case ExprKind::Binary: c.bop = e.bop; [[fallthrough]];
    case ExprKind::Not:
    case ExprKind::Neg:
      for (const auto& k : e.kids) c.kids.push_back(lower(k, vars, params));
      break;
  }
  return c;
}

std::string value_text(const VarDecl& v, std::int64_t x) {
  if (v.is_bool) return x ? "true" : "false";
  return std::to_string(x);
}

bool in_range(const VarDecl& v, std::int64_t x) {
  return v.is_bool ? (x == 0 || x == 1) : (x >= v.lo && x <= v.hi);
}

}  // namespace

CompiledModel::CompiledModel() = default;

std::size_t CompiledModel::PayloadHash::operator()(const Payload& p) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : p) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ULL;
  }
  return h;
}

std::unique_ptr<CompiledModel> compile(const ModelDef& def) {
  auto diags = check_model(def);
  for (const auto& d : diags)
    if (d.severity == Severity::Error) throw InputError(format_diagnostic(d));

  std::unique_ptr<CompiledModel> m(new CompiledModel());
  m->name_ = def.name;
  m->vars_ = def.vars;
  const std::vector<std::string> none;

  CompiledModel::Payload init(def.vars.size(), 0);
  for (const auto& a : def.init) {
    std::size_t i = 0;
    while (def.vars[i].name != a.var) ++i;
    Code c = lower(a.value, def.vars, none);
    std::int64_t v = c.eval(nullptr);
    if (!in_range(def.vars[i], v))
      throw ModelError("initial value " + std::to_string(v) + " of '" + a.var +
                       "' is outside its declared range");
    init[i] = static_cast<std::int32_t>(v);
  }
  for (const auto& t : def.transitions) {
    CompiledModel::Rule r;
    r.guard = std::make_shared<const Code>(lower(t.guard, def.vars, none));
    for (const auto& a : t.assigns) {
      std::size_t i = 0;
      while (def.vars[i].name != a.var) ++i;
      r.assigns.emplace_back(i, std::make_shared<const Code>(lower(a.value, def.vars, none)));
    }
    m->rules_.push_back(std::move(r));
  }
  for (const auto& a : def.atomics) {
    CompiledModel::Atomic at;
    at.name = a.name;
    at.arity = static_cast<int>(a.params.size());
    at.body = std::make_shared<const Code>(lower(a.body, def.vars, a.params));
    m->atomics_.push_back(std::move(at));
  }
  m->init_ = m->intern(init);
  return m;
}

StateId CompiledModel::intern(const Payload& p) const {
  {
    std::shared_lock lk(mu_);
    auto it = index_.find(p);
    if (it != index_.end()) return it->second;
  }
  std::unique_lock lk(mu_);
  auto it = index_.find(p);
  if (it != index_.end()) return it->second;
  auto id = static_cast<StateId>(payloads_.size());
  payloads_.push_back(p);
  succ_.emplace_back();
  index_.emplace(p, id);
  return id;
}

CompiledModel::Payload CompiledModel::payload(StateId s) const {
  std::shared_lock lk(mu_);
  return payloads_.at(s);
}

std::size_t CompiledModel::state_count() const {
  std::shared_lock lk(mu_);
  return payloads_.size();
}

std::vector<StateId> CompiledModel::successors(StateId s) const {
  Payload p = payload(s);
  const std::int32_t* cur[1] = {p.data()};
  std::vector<StateId> out;
  for (const auto& r : rules_) {
    if (!r.guard->eval(cur)) continue;
    Payload q = p;
    for (const auto& [var, code] : r.assigns) {
      std::int64_t v = code->eval(cur);
      if (!in_range(vars_[var], v))
        throw ModelError("assignment " + vars_[var].name + " := " + std::to_string(v) +
                         " leaves the declared range in state " + state_name(s));
      q[var] = static_cast<std::int32_t>(v);
    }
    StateId t = intern(q);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  if (out.empty()) out.push_back(s);
  return out;
}

const std::vector<StateId>& CompiledModel::next(StateId s) const {
  {
    std::shared_lock lk(mu_);
    if (s >= succ_.size()) throw PreconditionError("unknown state id " + std::to_string(s));
    if (succ_[s]) return *succ_[s];
  }
  auto list = std::make_unique<std::vector<StateId>>(successors(s));
  std::unique_lock lk(mu_);
  if (!succ_[s]) succ_[s] = std::move(list);
  return *succ_[s];
}

int CompiledModel::predicate_index(const std::string& name) const {
  for (std::size_t i = 0; i < atomics_.size(); ++i)
    if (atomics_[i].name == name) return static_cast<int>(i);
  return -1;
}

int CompiledModel::arity(int pred) const { return atomics_.at(pred).arity; }
const std::string& CompiledModel::predicate_name(int pred) const { return atomics_.at(pred).name; }
int CompiledModel::predicate_count() const { return static_cast<int>(atomics_.size()); }

bool CompiledModel::eval_atom(int pred, const StateId* args, std::size_t n) const {
  const auto& a = atomics_.at(pred);
  std::vector<const std::int32_t*> ptrs(n);
  std::shared_lock lk(mu_);
  for (std::size_t i = 0; i < n; ++i) ptrs[i] = payloads_.at(args[i]).data();
  return a.body->eval(ptrs.data()) != 0;
}

std::string CompiledModel::state_name(StateId s) const {
  Payload p = payload(s);
  std::string out = "{";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    out += vars_[i].name + ":=" + value_text(vars_[i], p[i]);
    if (i + 1 < vars_.size()) out += ';';
  }
  out += '}';
  return out;
}

std::optional<StateId> CompiledModel::find_state(const std::string& name) const {
  if (name.size() < 2 || name.front() != '{' || name.back() != '}') return std::nullopt;
  Payload p(vars_.size(), 0);
  std::vector<bool> seen(vars_.size(), false);
  std::string body = name.substr(1, name.size() - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t end = body.find(';', pos);
    if (end == std::string::npos) end = body.size();
    std::string item = body.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    auto eq = item.find(":=");
    if (eq == std::string::npos) return std::nullopt;
    std::string var = item.substr(0, eq), val = item.substr(eq + 2);
    std::size_t i = 0;
    while (i < vars_.size() && vars_[i].name != var) ++i;
    if (i == vars_.size() || seen[i]) return std::nullopt;
    std::int64_t v;
    if (val == "true") v = 1;
    else if (val == "false") v = 0;
    else {
      try {
        std::size_t used = 0;
        v = std::stoll(val, &used);
        if (used != val.size()) return std::nullopt;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    if (vars_[i].is_bool != (val == "true" || val == "false")) return std::nullopt;
    if (!in_range(vars_[i], v)) return std::nullopt;
    p[i] = static_cast<std::int32_t>(v);
    seen[i] = true;
  }
  for (bool b : seen)
    if (!b) return std::nullopt;
  return intern(p);
}

std::vector<bool> CompiledModel::state_bits(StateId s) const {
  Payload p = payload(s);
  std::vector<bool> bits;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].is_bool) {
      bits.push_back(p[i] != 0);
      continue;
    }
    auto span = static_cast<std::uint64_t>(vars_[i].hi - vars_[i].lo);
    auto v = static_cast<std::uint64_t>(p[i] - vars_[i].lo);
    for (; span; span >>= 1, v >>= 1) bits.push_back(v & 1);
  }
  return bits;
}

std::vector<StateId> reachable_states(const KripkeModel& m, std::size_t limit) {
  std::vector<StateId> order{m.initial()};
  std::unordered_set<StateId> seen{m.initial()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (StateId t : m.next(order[i])) {
      if (seen.insert(t).second) {
        if (order.size() >= limit)
          throw ResourceError("reachable state space exceeds " + std::to_string(limit) + " states");
        order.push_back(t);
      }
    }
  }
  return order;
}

}  // namespace sctl
