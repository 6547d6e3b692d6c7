#ifndef BAAC_SUPERVISOR_HPP
#define BAAC_SUPERVISOR_HPP

#include <functional>
#include <random>

#include "baac/config.hpp"
#include "baac/semantics.hpp"

namespace baac {

// One proposed action with its effect constraint resolved against the
// authoritative sequence: deff is the conjunction of the effects of the
// laws whose preconditions fire now.
struct CandidateAction {
  std::string agent;
  std::string action;
  int priority = 0;
  ConstraintPtr deff;
};

// Initial state: the lexicographically smallest solution of the union of
// the initially axioms, all remaining fluents at their domain minimum.
struct InitialState {
  std::optional<State> state;
  std::string error;  // InconsistentInitialState / initial global violation
};
InitialState collect_initial(const Problem& problem);

CandidateAction make_candidate(const Problem& problem, const StateSeq& seq,
                               const std::string& agent, const std::string& action);

// Satisfiability of a chosen action subset in context; returns the solved
// partial next state on success.
using SatFn =
    std::function<std::optional<PartialState>(const std::vector<const CandidateAction*>&)>;

// Joint effects alone (conflict detection, stage one).
std::optional<PartialState> solve_candidates(const Problem& problem, const StateSeq& seq,
                                             const std::vector<const CandidateAction*>& chosen);

// Joint effects plus every active global constraint; fluents the globals
// mention but no effect touches are pinned to their inertial values.
std::optional<PartialState> solve_candidates_with_globals(
    const Problem& problem, const StateSeq& seq,
    const std::vector<const CandidateAction*>& chosen);

struct FilterResult {
  std::vector<const CandidateAction*> survivors;
  std::vector<const CandidateAction*> inhibited;
};

// Iteratively drops every action of the lowest-priority agents present in
// the conflict until the survivors are consistent or only one priority
// level remains.
FilterResult priority_filter(const std::vector<const CandidateAction*>& conflict,
                             const SatFn& sat);

// Active supervisor arbitration. max_subset maximizes the enabled count,
// ties broken lexicographically by (agent, action); random enables exactly
// one action drawn from the seeded generator.
std::vector<const CandidateAction*> arbitrate(
    const std::vector<const CandidateAction*>& conflict, Strategy strategy,
    const SatFn& sat, std::mt19937_64& rng);

// Negotiation hook (mode = negotiate): returns the surviving subset and is
// responsible for recording per-action fates with the agents.
using NegotiateFn = std::function<std::vector<const CandidateAction*>(
    const std::vector<const CandidateAction*>& conflict, const SatFn& sat)>;

struct StepResolution {
  struct Inhibited {
    CandidateAction action;
    std::string reason;  // priority | arbitration | negotiation | global
  };
  std::vector<CandidateAction> enabled;
  std::vector<Inhibited> inhibited;
  State next;
  bool global_unsat = false;
  bool had_conflict = false;
  std::vector<CandidateAction> conflict_set;
};

// The full per-step pipeline: conflict detection on the joint effects,
// priority filter, arbitration or negotiation, global-constraint
// enforcement with re-arbitration over the contributing actions, commit.
StepResolution resolve_step(const Problem& problem, const StateSeq& seq,
                            std::vector<CandidateAction> proposals, Strategy strategy,
                            ConflictMode mode, std::mt19937_64& rng,
                            const NegotiateFn& negotiate);

}  // namespace baac

#endif
