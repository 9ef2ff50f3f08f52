#pragma once

// Proof trees for the sequent calculus: built by replaying an engine trace,
// checked independently against the model, rendered in the numbered text
// format or as JSON.
//
// A proof is a DAG: a subproof found once and reused through the memo is
// shared. The merge context Γ is not stored in the nodes; it is the chain
// of same-modality ancestors, and the checker recovers it from the shape.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sctl/engine.hpp"
#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl {

enum class Rule : std::uint8_t {
  AtomR, NegR, TopR, AndR, OrR1, OrR2, AXR, EXR, AFR1, AFR2,
  EGR, EGMerge, ARUnfold, ARClose, ARMerge, EUR1, EUR2
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

// Premise order per rule:
//   AndR [lhs, rhs]; OrR1 [lhs]; OrR2 [rhs]; AXR one per successor, in
//   next() order; EXR [body at the chosen successor]; AFR1 [body];
//   AFR2 one per successor; EGR [body, EG at a successor];
//   ARClose [body1, body2]; ARUnfold [body2, AR per successor];
//   EUR1 [body2]; EUR2 [body1, EU at a successor]; merges and axioms none.
struct ProofNode {
  Rule rule = Rule::TopR;
  Formula goal;  // closed
  std::vector<Proof> children;
  int id = -1;  // display number, -1 = unnumbered
};

struct CheckReport {
  bool valid = true;
  std::vector<std::size_t> path;  // child indices from the root to the failing node
  std::string reason;
};

/// Rebuilds the proof of phi from a complete trace of a provable run without
/// fairness. Throws TraceMismatch when the trace does not replay,
/// PreconditionError when it is incomplete, not provable or fair.
Proof reconstruct_proof(const KripkeModel& m, const Formula& phi, const Trace& trace);

/// Checks every rule instance against the model. `expected` additionally
/// pins the conclusion.
CheckReport check_proof(const KripkeModel& m, const Proof& p,
                        const std::optional<Formula>& expected = std::nullopt);

/// Proof of phi. Throws PreconditionError when phi does not hold.
Proof certificate(const KripkeModel& m, const Formula& phi, EngineOptions opts = {});

/// Proof of dualize(phi). Throws PreconditionError when phi holds.
Proof counterexample(const KripkeModel& m, const Formula& phi, EngineOptions opts = {});

enum class ProofFormat : std::uint8_t { Text, Json };

/// Text: numbered lines "N: Γ |- formula\t[ids]" in breadth-first order,
/// children listed by descending number, shared subproofs printed once.
/// Json: a states table and a node table; parse_proof inverts it.
std::string render_proof(const KripkeModel& m, const Proof& p, ProofFormat f = ProofFormat::Text);

/// Inverse of render_proof(..., Json). Throws InputError on malformed input
/// or unknown states.
Proof parse_proof(const std::string& text, const KripkeModel& m);

/// Same rules, identical goals (binder names included), children and ids.
bool proof_equal(const Proof& a, const Proof& b);

/// Distinct nodes reachable from p.
std::size_t proof_size(const Proof& p);

}  // namespace sctl
