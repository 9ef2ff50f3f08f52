#pragma once

// Formula elaboration shared by the search engines, proof replay and the
// CPT printer. A formula becomes a table of nodes; a closure pairs a node
// with the states bound to its free variables, and a goal is a closure
// evaluated at a state.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl::detail {

struct ArgRef {
  bool is_const = false;
  std::uint32_t v = 0;  // state id, or slot in the extended environment
};

struct ENode {
  Op op = Op::Top;
  bool fair = false;
  int pred = -1;
  std::vector<ArgRef> args;  // atoms; slots index the node's own env
  // free variables of the node without its evaluation term, sorted
  std::vector<std::string> fv;
  int kid[2] = {-1, -1};
  // env of kid k drawn from the extended env: own env, then the binder value
  std::vector<std::uint32_t> link[2];
  ArgRef kid_at[2];  // evaluation term of a modal kid, over the extended env
  std::uint32_t size = 1;
  Formula source;  // the subformula, free variables intact
};

class Elaboration {
 public:
  /// Throws InputError for unknown predicates, arity mismatches and free
  /// variables.
  Elaboration(const KripkeModel& m, const Formula& root);

  const ENode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t node_count() const { return nodes_.size(); }
  const Formula& formula() const { return root_; }
  StateId root_state() const { return root_state_; }

 private:
  int build(const Formula& f, const KripkeModel& m);

  std::vector<ENode> nodes_;
  Formula root_;
  StateId root_state_ = 0;
};

using ClosureId = std::uint32_t;

class ClosureTable {
 public:
  ClosureId intern(int node, const StateId* env, std::size_t n);
  int node(ClosureId c) const { return entries_[c].node; }
  std::span<const StateId> env(ClosureId c) const {
    const auto& e = entries_[c];
    return {pool_.data() + e.off, e.len};
  }
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    int node;
    std::uint32_t off, len;
  };
  std::vector<Entry> entries_;
  std::vector<StateId> pool_;
  std::unordered_multimap<std::size_t, ClosureId> index_;
};

struct Goal {
  ClosureId c = 0;
  StateId s = 0;
  std::uint16_t phase = 0;
  friend bool operator==(const Goal&, const Goal&) = default;
};

/// Goal for kid k of closure `parent`, the parent's binder bound to `v`
/// (ignored for connectives).
Goal child_goal(const Elaboration& el, ClosureTable& ct, ClosureId parent, int k, StateId v);

/// The closed formula a goal stands for.
Formula materialize(const Elaboration& el, const ClosureTable& ct, const Goal& g);

/// Evaluates a non-modal formula whose only free variable (if any) is
/// bound to s. Throws InputError on temporal operators.
bool eval_state_formula(const KripkeModel& m, const Formula& f, StateId s);

}  // namespace sctl::detail
