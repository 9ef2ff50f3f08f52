#pragma once

// Finite Kripke models. States are interned behind dense ids; successor
// lists are total (a state without outgoing transitions loops on itself)
// and come back in a fixed order on every call.

#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/model_def.hpp"

namespace sctl {

class KripkeModel {
 public:
  virtual ~KripkeModel() = default;

  virtual StateId initial() const = 0;
  /// Non-empty, duplicate-free; the reference stays valid for the
  /// lifetime of the model.
  virtual const std::vector<StateId>& next(StateId s) const = 0;

  /// -1 when the predicate is unknown.
  virtual int predicate_index(const std::string& name) const = 0;
  virtual int arity(int pred) const = 0;
  virtual const std::string& predicate_name(int pred) const = 0;
  virtual int predicate_count() const = 0;
  virtual bool eval_atom(int pred, const StateId* args, std::size_t n) const = 0;

  /// Checked lookup by name; throws InputError on unknown predicate or
  /// arity mismatch.
  bool eval_atom(const std::string& pred, const std::vector<StateId>& args) const;

  virtual std::string state_name(StateId s) const = 0;
  virtual std::optional<StateId> find_state(const std::string& name) const = 0;
  /// Number of states interned so far.
  virtual std::size_t state_count() const = 0;

  /// Boolean slice of a state's payload, used by the decision-diagram
  /// visited backend. Empty when the model has no such encoding.
  virtual std::vector<bool> state_bits(StateId s) const;
};

/// Explicitly enumerated states and predicate extensions.
class ExplicitModel : public KripkeModel {
 public:
  StateId add_state(std::string name);
  void add_edge(StateId from, StateId to);
  void add_predicate(const std::string& name, int arity);
  void add_tuple(const std::string& pred, std::vector<StateId> tuple);
  void set_initial(StateId s) { init_ = s; }

  StateId initial() const override { return init_; }
  const std::vector<StateId>& next(StateId s) const override;
  int predicate_index(const std::string& name) const override;
  int arity(int pred) const override { return preds_[pred].arity; }
  const std::string& predicate_name(int pred) const override { return preds_[pred].name; }
  int predicate_count() const override { return static_cast<int>(preds_.size()); }
  bool eval_atom(int pred, const StateId* args, std::size_t n) const override;
  using KripkeModel::eval_atom;
  std::string state_name(StateId s) const override { return names_[s]; }
  std::optional<StateId> find_state(const std::string& name) const override;
  std::size_t state_count() const override { return names_.size(); }

 private:
  struct Pred {
    std::string name;
    int arity = 0;
    std::vector<std::vector<StateId>> tuples;  // sorted
    bool sorted = true;
  };
  std::vector<std::string> names_;
  std::vector<std::vector<StateId>> adj_;
  std::vector<std::vector<StateId>> self_;
  std::vector<Pred> preds_;
  StateId init_ = 0;
};

/// A model compiled from a ModelDef. States are explored lazily; the
/// interning table tolerates concurrent readers.
class CompiledModel : public KripkeModel {
 public:
  using Payload = std::vector<std::int32_t>;

  StateId initial() const override { return init_; }
  const std::vector<StateId>& next(StateId s) const override;
  int predicate_index(const std::string& name) const override;
  int arity(int pred) const override;
  const std::string& predicate_name(int pred) const override;
  int predicate_count() const override;
  bool eval_atom(int pred, const StateId* args, std::size_t n) const override;
  using KripkeModel::eval_atom;
  std::string state_name(StateId s) const override;
  std::optional<StateId> find_state(const std::string& name) const override;
  std::size_t state_count() const override;
  std::vector<bool> state_bits(StateId s) const override;

  const std::string& name() const { return name_; }
  std::size_t var_count() const { return vars_.size(); }
  const VarDecl& var(std::size_t i) const { return vars_[i]; }
  Payload payload(StateId s) const;
  StateId intern(const Payload& p) const;

  struct Code;  // compiled expression, see kripke.cpp

 private:
  friend std::unique_ptr<CompiledModel> compile(const ModelDef& def);
  CompiledModel();

  struct PayloadHash {
    std::size_t operator()(const Payload& p) const noexcept;
  };
  struct Rule {
    std::shared_ptr<const Code> guard;
    std::vector<std::pair<std::size_t, std::shared_ptr<const Code>>> assigns;
  };
  struct Atomic {
    std::string name;
    int arity = 0;
    std::shared_ptr<const Code> body;
  };

  std::vector<StateId> successors(StateId s) const;

  std::string name_;
  std::vector<VarDecl> vars_;
  std::vector<Rule> rules_;
  std::vector<Atomic> atomics_;
  StateId init_ = 0;

  mutable std::shared_mutex mu_;
  mutable std::vector<Payload> payloads_;
  mutable std::unordered_map<Payload, StateId, PayloadHash> index_;
  mutable std::vector<std::unique_ptr<std::vector<StateId>>> succ_;
};

/// Compiles a checked definition. Throws InputError when check_model
/// reports an error and ModelError when an initial value leaves its range.
std::unique_ptr<CompiledModel> compile(const ModelDef& def);

/// Breadth-first enumeration of the states reachable from the initial
/// state; throws ResourceError beyond `limit` states.
std::vector<StateId> reachable_states(const KripkeModel& m, std::size_t limit = std::size_t{1} << 20);

}  // namespace sctl
