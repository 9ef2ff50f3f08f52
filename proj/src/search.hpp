#pragma once

// State shared by the cpt and recursive engines: closure table, Γ frames,
// the memo store, fairness phases and trace recording. Both engines call
// the same hooks in the same order, which is what makes their traces
// identical.

#include <memory>
#include <unordered_map>
#include <vector>

#include "elab.hpp"
#include "sctl/engine.hpp"

namespace sctl::detail {

struct Pending {
  ClosureId c;
  StateId s;
  bool v;
};

// One Γ entry. Frames of a chain all belong to one closure; `parent` is the
// entry below in the same chain (0 = none). `low` is the shallowest depth a
// merge inside this frame's subsearch pointed at.
struct Frame {
  std::uint32_t parent = 0;
  std::uint32_t depth = 0;
  ClosureId c = 0;
  StateId s = 0;
  std::uint16_t phase = 0;
  std::uint32_t low = 0;
  std::vector<Pending> pending;
};

class Search {
 public:
  Search(const KripkeModel& m, const Formula& phi, const EngineOptions& o,
         std::vector<Formula> fairness);

  const ENode& node_of(const Goal& g) const { return el.node(ct.node(g.c)); }
  Goal root_goal();
  Goal child(const Goal& g, int k, StateId v) { return child_goal(el, ct, g.c, k, v); }

  void event(EventKind k, const Goal& g, bool result = false, std::uint16_t next = 0);
  bool eval_atom(const Goal& g);

  /// Γ check then memo check for a fixpoint goal in context frame F.
  /// -1 when the goal must be unfolded.
  int prologue(const Goal& g, std::uint32_t F);
  /// Memo check alone (AX/EX). -1 on miss.
  int memo_lookup(const Goal& g);
  /// Pushes the Γ entry for g and records the unfold; returns the frame and
  /// sets `next` to the successors' phase.
  std::uint32_t unfold(const Goal& g, std::uint32_t F, std::uint16_t& next);
  /// Verdict of the goal unfolded into frame Fp (0 for AX/EX) is known.
  void exit(const Goal& g, std::uint32_t Fp, bool v);

  Verdict verdict(bool provable);

  const KripkeModel& m;
  Elaboration el;
  ClosureTable ct;
  EngineOptions opts;
  std::vector<Frame> frames;

 private:
  struct Chain {
    std::vector<std::uint32_t> frames;
    std::unordered_map<std::uint64_t, std::uint32_t> index;  // (state, phase) -> depth
  };
  static std::uint64_t key(StateId s, std::uint16_t phase) {
    return (static_cast<std::uint64_t>(phase) << 32) | s;
  }
  Chain& sync(ClosureId c, std::uint32_t F);
  void pop(Chain& ch);
  void push(Chain& ch, std::uint32_t fid);
  bool constraint_holds(std::size_t i, StateId s);
  bool cacheable_now(const ENode& n, bool v, bool tainted) const;
  bool pending_kind(const ENode& n, bool v) const;

  // Tainted non-fair verdicts still waiting for their lowest Γ entry to
  // settle. While that entry is on the chain the verdict may be reused, at
  // the price of the same taint (as lowlinks in Tarjan's algorithm).
  struct Tentative {
    bool v;
    std::uint32_t low;    // chain depth
    std::uint32_t frame;  // frame id at that depth
  };
  static std::uint64_t goal_key(ClosureId c, StateId s) { return (static_cast<std::uint64_t>(c) << 32) | s; }
  std::unordered_map<std::uint64_t, Tentative> tentative_;

  std::unique_ptr<VisitedStore> memo_;
  std::vector<Formula> C_;
  std::unordered_map<std::uint64_t, bool> chold_;
  std::vector<Chain> chains_;
  std::vector<TraceEvent> events_;
  std::size_t head_ = 0;
  EngineStats stats_;
};

/// Runs fn on a thread with a large stack, rethrowing its exception.
void run_deep(const std::function<void()>& fn);

}  // namespace sctl::detail
