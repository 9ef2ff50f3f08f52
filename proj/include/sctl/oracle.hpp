#pragma once

// Semantic ground truth: fixpoint evaluation over the enumerated reachable
// states. Slow and simple on purpose; the engines are tested against it.

#include <map>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl {

using Env = std::map<std::string, StateId>;

struct OracleOptions {
  std::size_t state_limit = std::size_t{1} << 20;
};

/// M, env |= phi. env must cover the free variables of phi. Throws
/// ResourceError when the reachable space exceeds the limit.
bool valid(const KripkeModel& m, const Formula& phi, const Env& env = {},
           const OracleOptions& o = {});

/// Fair semantics: path quantifiers range over paths on which every member
/// of C (one free variable, read at the path state) holds infinitely often.
bool valid_fair(const KripkeModel& m, const Formula& phi, const std::vector<Formula>& C,
                const Env& env = {}, const OracleOptions& o = {});

/// States (reachable from the initial state) that start a fair path.
std::vector<StateId> fair_states(const KripkeModel& m, const std::vector<Formula>& C,
                                 const OracleOptions& o = {});

}  // namespace sctl
