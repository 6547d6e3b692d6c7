#ifndef BAAC_PLANNER_HPP
#define BAAC_PLANNER_HPP

#include <span>

#include "baac/semantics.hpp"

namespace baac {

// A constraint that must hold at an absolute time index (help obligations,
// add_goal constraints are (C, N)).
struct TimedGoal {
  ConstraintPtr cond;
  int at;
};

// Action synthesized from a request plus the owner's help axioms. The
// exec condition already contains the trigger shifted one step into the
// past; the effect is the requested constraint (and the offered reward).
struct SynthAction {
  std::string name;
  std::vector<ConstraintPtr> exec_alternatives;
  ConstraintPtr effect;
};

// The requester-side twin: while planning, an agent may rely on one of its
// own request axioms being served, one step after the trigger held.
struct PlanAction {
  std::string name;
  bool virtual_request = false;
  int request_index = -1;

  bool operator==(const PlanAction&) const = default;
};

struct Plan {
  std::vector<std::vector<PlanAction>> steps;  // one set per remaining step

  std::vector<std::string> proposed_names(int step) const;  // virtuals stripped
};

enum class PlanStatus { Found, NoPlan, BudgetExceeded };

struct PlanResult {
  PlanStatus status = PlanStatus::NoPlan;
  Plan plan;
  long nodes = 0;
};

struct PlannerOptions {
  int max_actions_per_step = 1;
  long node_budget = 200000;
};

// Bounded-horizon planning for one agent over its local theory: finds a
// sequence of action sets whose local simulation (the agent acting alone,
// everything else inertial) satisfies every goal at time N, every timed
// goal at its index, and the agent's own global constraints throughout.
// Iterative deepening over the active prefix; within a depth, depth-first
// with failed-state memoization.
PlanResult plan(const Problem& problem, const AgentTheory& owner, const StateSeq& seq,
                int total_horizon, std::span<const ConstraintPtr> goals,
                std::span<const TimedGoal> extras, std::span<const SynthAction> synths,
                const PlannerOptions& options);

// Replanning from scratch: identical search from the current sequence.
PlanResult replan(const Problem& problem, const AgentTheory& owner, const StateSeq& seq,
                  int total_horizon, std::span<const ConstraintPtr> goals,
                  std::span<const TimedGoal> extras, std::span<const SynthAction> synths,
                  const PlannerOptions& options);

// One (request axiom, help axiom) pair. Multiple matching help axioms are
// disjunctive alternatives of the same serve action.
SynthAction synthesize_help_action(const std::string& requester, int axiom_index,
                                   const RequestAxiom& request, const HelpAxiom& help);

struct RequestInstance {
  std::string requester;
  int requester_priority = 0;
  int axiom_index = 0;
  int posted_step = 0;
  const RequestAxiom* axiom = nullptr;
};

struct EvaluateRequestResult {
  bool accept = false;
  bool planned = false;  // false when rejected before any planning
  PlanResult plan;
  SynthAction synth;
  TimedGoal obligation;
};

// Responder-side request evaluation at time i (= seq.size()-1): gate on a
// matching help axiom whose condition holds now and on knowing every
// fluent of the requested (and offered) constraint, then plan in the
// enlarged theory with the obligation "C1 holds_at i+1".
EvaluateRequestResult evaluate_request(const Problem& problem, const AgentTheory& responder,
                                       const StateSeq& seq, const RequestInstance& request,
                                       int total_horizon,
                                       std::span<const ConstraintPtr> goals,
                                       std::span<const TimedGoal> obligations,
                                       std::span<const SynthAction> synths,
                                       const PlannerOptions& options);

// Local simulation of one step of own actions (other fluents inertial).
// Virtual request actions contribute their anticipated effects.
std::optional<State> simulate_own_step(const Problem& problem, const AgentTheory& owner,
                                       const StateSeq& seq,
                                       std::span<const PlanAction> actions,
                                       std::span<const SynthAction> synths);

}  // namespace baac

#endif
