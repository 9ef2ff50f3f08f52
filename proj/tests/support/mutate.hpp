#pragma once

// Single-node edits of a proof. Each edit is chosen so that the result is
// never a correct derivation of the same conclusion: the node's premises
// stop matching its rule, or its goal becomes false in the model (by the
// oracle), which no sound proof can conclude. Moving a goal to another true
// instance is not enough: EX-R and friends may pick any successor.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "random_instances.hpp"
#include "sctl/certify.hpp"
#include "sctl/oracle.hpp"

namespace sctl::testing {

inline void collect_paths(const Proof& p, std::vector<std::size_t>& cur,
                          std::vector<std::vector<std::size_t>>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < p->children.size(); ++i) {
    cur.push_back(i);
    collect_paths(p->children[i], cur, out);
    cur.pop_back();
  }
}

// Node positions as paths from the root (shared nodes appear once per path).
inline std::vector<std::vector<std::size_t>> node_paths(const Proof& p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  collect_paths(p, cur, out);
  return out;
}

inline Proof rebuild(const Proof& p, const std::vector<std::size_t>& path, std::size_t depth,
                     const std::function<void(ProofNode&)>& edit) {
  auto copy = std::make_shared<ProofNode>(*p);
  if (depth == path.size())
    edit(*copy);
  else
    copy->children[path[depth]] = rebuild(p->children[path[depth]], path, depth + 1, edit);
  return copy;
}

struct Mutation {
  Proof proof;
  std::string kind;
};

// A state different from s, when the model has one.
inline StateId other_state(Rng& r, std::size_t states, StateId s) {
  if (states < 2) return s;
  StateId t = static_cast<StateId>(roll(r, states - 1));
  return t >= s ? t + 1 : t;
}

inline Mutation mutate(Rng& r, const Proof& p, const KripkeModel& m) {
  const std::size_t states = m.state_count();
  auto paths = node_paths(p);
  const auto& path = paths[roll(r, paths.size())];
  std::string kind;
  auto edit = [&](ProofNode& n) {
    const Formula& g = n.goal;
    switch (roll(r, 5)) {
      case 1:
        for (int tries = 0; tries < 4 && states > 1; ++tries) {
          Formula moved;
          if (is_modal(g.op())) {
            moved = g.with_at(Term::state(other_state(r, states, g.at().state_id())));
          } else if (g.op() == Op::Atom || g.op() == Op::NegAtom) {
            auto args = g.args();
            std::size_t k = roll(r, args.size());
            args[k] = Term::state(other_state(r, states, args[k].state_id()));
            moved = g.op() == Op::Atom ? Formula::atom(g.pred(), args) : Formula::neg_atom(g.pred(), args);
          } else {
            break;
          }
          if (valid(m, moved)) continue;
          kind = is_modal(g.op()) ? "move the evaluation state" : "change an atom argument";
          n.goal = moved;
          return;
        }
        break;
      case 2:
        kind = n.children.empty() ? "add a premise" : "drop a premise";
        if (n.children.empty())
          n.children.push_back(p);
        else
          n.children.erase(n.children.begin() + static_cast<long>(roll(r, n.children.size())));
        return;
      case 3: {
        Rule old = n.rule;
        for (int tries = 0; tries < 20; ++tries) {
          auto nr = static_cast<Rule>(roll(r, static_cast<std::size_t>(Rule::EUR2) + 1));
          if (nr == old) continue;
          // or-R1 and or-R2 coincide on A || A
          bool same_or = g.op() == Op::Or && alpha_equal(g.lhs(), g.rhs()) &&
                         (nr == Rule::OrR1 || nr == Rule::OrR2) && (old == Rule::OrR1 || old == Rule::OrR2);
          if (same_or) continue;
          kind = std::string("relabel ") + rule_name(old) + " as " + rule_name(nr);
          n.rule = nr;
          return;
        }
        break;
      }
      case 4: {
        for (std::size_t i = 0; i < n.children.size(); ++i)
          for (std::size_t j = i + 1; j < n.children.size(); ++j)
            if (!alpha_equal(n.children[i]->goal, n.children[j]->goal)) {
              kind = "swap premises";
              std::swap(n.children[i], n.children[j]);
              return;
            }
        break;
      }
      default: break;
    }
    kind = "negate the goal";
    n.goal = dualize(g);
  };
  return {rebuild(p, path, 0, edit), kind};
}

}  // namespace sctl::testing
