#ifndef BAAC_AGENT_HPP
#define BAAC_AGENT_HPP

#include "baac/coordination.hpp"
#include "baac/planner.hpp"

namespace baac {

// Per-agent execution state: the current plan and cursor, accumulated
// add_goal constraints, committed help obligations and their serve
// actions, and the retry bookkeeping of the reaction policies.
struct AgentRuntime {
  enum class Status { Active, Failed, Done };
  enum class ReplanReason { None, Mismatch, Policy };

  const AgentTheory* theory = nullptr;
  std::string name;
  Status status = Status::Active;
  PlannerOptions options;
  int horizon = 0;
  int max_replans_per_step = 3;
  int replans_this_step = 0;

  Plan current_plan;
  bool has_plan = false;
  int cursor = 0;
  bool plan_fresh = false;  // replaced during the exchange phase
  ReplanReason replan_reason = ReplanReason::None;

  std::vector<ConstraintPtr> goals;       // theory goals + accumulated add_goals
  std::vector<TimedGoal> obligations;     // committed help obligations
  std::vector<SynthAction> synths;        // committed serve actions

  // retry schedule: nops_left consecutive nop proposals, then the action
  bool retrying = false;
  int nops_left = 0;
  std::string retry_action;

  // negotiated fate for the step in flight (precedence over on_failure)
  enum class NegotiatedFate { None, Forego, Retry };
  NegotiatedFate negotiated = NegotiatedFate::None;
  int negotiated_delay = 0;
  std::string negotiated_action;

  std::optional<State> expected;           // own-actions-only next state
  std::vector<std::string> last_proposal;  // real action names, empty = nop
  long planner_nodes = 0;                  // cumulative, for diagnostics
  bool last_plan_budget_hit = false;
};

void init_runtime(AgentRuntime& rt, const AgentTheory& theory, const RunConfig& cfg);

// Proposal phase: refresh the plan if needed, emit the next action set
// (virtual request steps propose nothing), record the expected state.
std::vector<std::string> agent_propose(AgentRuntime& rt, const Problem& problem,
                                       const StateSeq& seq);

// Failure policies, scanned in declaration order, first applicable one
// executed. Called with the sequence including the freshly committed
// state. A policy replan that later yields NoPlan fails the agent.
void handle_failure(AgentRuntime& rt, const Problem& problem, const StateSeq& seq,
                    const std::string& failed_action);

// Outcome phase: routes negotiated fates, failure policies, mismatch
// detection and plan-cursor advancement.
void agent_handle_outcome(AgentRuntime& rt, const Problem& problem, const StateSeq& seq,
                          bool success, const std::string& failed_action);

// The state the agent expects after its own proposed actions execute and
// everything else stays inert.
std::optional<State> expected_state(const AgentRuntime& rt, const Problem& problem,
                                    const StateSeq& seq,
                                    const std::vector<std::string>& proposal);

}  // namespace baac

#endif
