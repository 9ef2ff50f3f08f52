#pragma once

// Proof search by rewriting continuation passing trees. A tree node holds a
// sequent and two continuations (success, failure); the root is rewritten
// until a leaf t or f remains. A plain recursive search over the same rules
// is available for comparison and yields the same trace.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/kripke.hpp"

namespace sctl {

enum class EngineKind : std::uint8_t { Cpt, Recursive };
enum class VisitedBackend : std::uint8_t { Hash, Bdd };
enum class TraceMode : std::uint8_t { Off, Ring, Full };

struct EngineOptions {
  EngineKind engine = EngineKind::Cpt;
  bool memo = true;
  VisitedBackend visited = VisitedBackend::Hash;
  TraceMode trace = TraceMode::Ring;
  std::size_t ring_capacity = 4096;
  std::uint64_t step_limit = 0;  // 0 = unlimited
  // assert the termination measure decreases on every rewrite (cpt engine)
  bool check_rewrite_order = false;
  // Memoize only verdicts whose subproofs close on their own. Off, the memo
  // also keeps co-inductive results that leaned on an ancestor once that
  // ancestor is settled: fewer steps, but such a trace cannot be turned
  // into a proof. certificate() and counterexample() switch it on.
  bool closed_memo = false;
};

enum class EventKind : std::uint8_t {
  Top, Bottom, Atom, NegAtom, And, Or, AX, EX, Unfold, Merge, MemoHit
};

const char* event_name(EventKind k);

/// One rewrite. `closure` indexes Trace::closure_node/closure_env.
struct TraceEvent {
  EventKind kind = EventKind::Top;
  bool result = false;  // Atom, NegAtom, Merge, MemoHit
  std::uint16_t phase = 0;
  std::uint16_t next_phase = 0;  // Unfold: phase handed to the successors
  std::uint32_t closure = 0;
  StateId state = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  Formula formula;  // the formula actually searched
  std::vector<TraceEvent> events;
  bool complete = false;  // false when a ring dropped early events
  bool closed_memo = true;  // see EngineOptions::closed_memo
  std::uint64_t total = 0;
  // closure tables: elaboration node index and bound states
  std::vector<std::uint32_t> closure_node;
  std::vector<std::vector<StateId>> closure_env;
};

/// Human-readable "EVENT goal" line for event i.
std::string describe_event(const KripkeModel& m, const Trace& t, std::size_t i);

struct EngineStats {
  std::uint64_t steps = 0;
  std::uint64_t peak_gamma = 0;
  std::uint64_t memo_entries = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t merges = 0;
  std::uint64_t closures = 0;
};

struct Verdict {
  bool provable = false;
  Trace trace;
  EngineStats stats;
};

/// Decides M |= phi for closed phi. Throws InputError on free variables or
/// unknown predicates, ModelError from the model, ResourceError when the
/// step limit is hit.
Verdict prove(const KripkeModel& m, const Formula& phi, const EngineOptions& opts = {});

/// Fairness-constrained search: every path quantifier of phi ranges over
/// paths on which each member of C holds infinitely often. Members of C are
/// non-temporal with at most one free variable, read at the path state.
Verdict prove_fair(const KripkeModel& m, const Formula& phi, const std::vector<Formula>& C,
                   const EngineOptions& opts = {});

/// True iff every constraint holds (per `subprove`, given the constraint
/// instantiated at a state) somewhere on the loop.
bool fair_loop_check(const std::vector<StateId>& loop, const std::vector<Formula>& C,
                     const std::function<bool(const Formula&)>& subprove);
/// Same, deciding constraints with the prover.
bool fair_loop_check(const std::vector<StateId>& loop, const std::vector<Formula>& C,
                     const KripkeModel& m);

/// Step-by-step driver over the cpt engine, for inspection and tests.
class CptSearch {
 public:
  CptSearch(const KripkeModel& m, const Formula& phi, const EngineOptions& opts = {},
            const std::vector<Formula>& fairness = {});
  ~CptSearch();
  CptSearch(const CptSearch&) = delete;
  CptSearch& operator=(const CptSearch&) = delete;

  bool done() const;
  bool provable() const;  // once done
  /// One rewrite at the root (bookkeeping nodes are passed transparently).
  void step();
  /// Current tree, e.g. "cpt(|- P(a), t, f)"; shared subtrees print in full.
  std::string render(const StateNamer& namer = {}) const;
  Verdict finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class Visit : std::uint8_t { Unknown, Proved, Disproved, InProgress };

/// Per-subformula map from states to search status.
class VisitedStore {
 public:
  virtual ~VisitedStore() = default;
  virtual Visit query(std::uint32_t sub, StateId s) const = 0;
  /// Marking Unknown erases the entry.
  virtual void mark(std::uint32_t sub, StateId s, Visit v) = 0;
  /// Entries whose status is not Unknown.
  virtual std::size_t size() const = 0;
};

std::unique_ptr<VisitedStore> make_visited_store(VisitedBackend b, const KripkeModel& m);

}  // namespace sctl
