#include "baac/agent.hpp"

#include <algorithm>
#include <cassert>

namespace baac {

void init_runtime(AgentRuntime& rt, const AgentTheory& theory, const RunConfig& cfg) {
  rt.theory = &theory;
  rt.name = theory.name;
  rt.goals = theory.goals;
  rt.horizon = cfg.horizon;
  rt.max_replans_per_step = cfg.max_replans_per_step;
  rt.options.max_actions_per_step = cfg.max_actions_per_step;
  rt.options.node_budget = cfg.node_budget;
}

namespace {

PlanResult run_planner(AgentRuntime& rt, const Problem& problem, const StateSeq& seq) {
  PlanResult r = plan(problem, *rt.theory, seq, rt.horizon, rt.goals, rt.obligations,
                      rt.synths, rt.options);
  rt.planner_nodes += r.nodes;
  rt.last_plan_budget_hit = r.status == PlanStatus::BudgetExceeded;
  return r;
}

}  // namespace

std::vector<std::string> agent_propose(AgentRuntime& rt, const Problem& problem,
                                       const StateSeq& seq) {
  rt.last_proposal.clear();
  rt.expected.reset();
  if (rt.status != AgentRuntime::Status::Active) return {};

  if (rt.retrying) {
    if (rt.nops_left > 0) {
      --rt.nops_left;
      rt.expected = seq.back();
      return {};
    }
    rt.retrying = false;
    if (executable_in(problem, *rt.theory, seq, rt.retry_action)) {
      rt.last_proposal = {rt.retry_action};
      rt.expected = expected_state(rt, problem, seq, rt.last_proposal);
      // the surrounding plan is stale either way once the retry resolves
      rt.replan_reason = AgentRuntime::ReplanReason::Mismatch;
      return rt.last_proposal;
    }
    // the retried action lost its executability condition
    rt.replan_reason = AgentRuntime::ReplanReason::Policy;
  }

  if (rt.plan_fresh) {
    // adopted during the exchange phase, already planned from the current
    // prefix; supersedes any pending replan
    rt.plan_fresh = false;
    rt.replan_reason = AgentRuntime::ReplanReason::None;
  } else if (!rt.has_plan || rt.replan_reason != AgentRuntime::ReplanReason::None) {
    if (rt.replans_this_step >= rt.max_replans_per_step) {
      rt.expected = seq.back();
      return {};  // replanning deferred to the next step
    }
    ++rt.replans_this_step;
    bool policy = rt.replan_reason == AgentRuntime::ReplanReason::Policy;
    PlanResult r = run_planner(rt, problem, seq);
    if (r.status == PlanStatus::Found) {
      rt.current_plan = std::move(r.plan);
      rt.has_plan = true;
      rt.cursor = 0;
      rt.replan_reason = AgentRuntime::ReplanReason::None;
    } else if (r.status == PlanStatus::NoPlan && policy) {
      // a failure policy demanded this replan; no plan means giving up
      rt.status = AgentRuntime::Status::Failed;
      return {};
    } else {
      // ask for a nop and try again next step
      rt.expected = seq.back();
      return {};
    }
  }

  if (!rt.has_plan || rt.cursor >= static_cast<int>(rt.current_plan.steps.size())) {
    rt.expected = seq.back();
    rt.last_proposal.clear();
    return {};
  }
  rt.last_proposal = rt.current_plan.proposed_names(rt.cursor);
  // The expectation covers the whole planned step, anticipated request
  // effects included; if nobody serves the request, the mismatch forces a
  // replan instead of running the plan ahead of reality.
  rt.expected = simulate_own_step(problem, *rt.theory, seq,
                                  rt.current_plan.steps[rt.cursor], rt.synths);
  return rt.last_proposal;
}

void handle_failure(AgentRuntime& rt, const Problem& problem, const StateSeq& seq,
                    const std::string& failed_action) {
  (void)problem;
  int j = static_cast<int>(seq.size()) - 1;
  const ActionDecl* decl = rt.theory->find_action(failed_action);
  if (decl) {
    for (const auto& opt : decl->on_failure) {
      ConstraintPtr cond = opt.cond ? opt.cond : ctrue();
      if (!holds_or_false(seq, j, *cond)) continue;
      switch (opt.kind) {
        case FailureOption::Kind::RetryAfter:
          rt.retrying = true;
          rt.nops_left = opt.delay - 1;
          rt.retry_action = failed_action;
          return;
        case FailureOption::Kind::Replan:
          if (opt.add_goal) rt.goals.push_back(opt.add_goal);
          rt.replan_reason = AgentRuntime::ReplanReason::Policy;
          return;
        case FailureOption::Kind::Fail:
          rt.status = AgentRuntime::Status::Failed;
          return;
      }
    }
  }
  // nothing applicable: behave as "replan if true"
  rt.replan_reason = AgentRuntime::ReplanReason::Policy;
}

void agent_handle_outcome(AgentRuntime& rt, const Problem& problem, const StateSeq& seq,
                          bool success, const std::string& failed_action) {
  if (rt.status != AgentRuntime::Status::Active) return;

  if (!success) {
    switch (rt.negotiated) {
      case AgentRuntime::NegotiatedFate::Forego:
        // the negotiated outcome stands in for the failure policies
        rt.replan_reason = AgentRuntime::ReplanReason::Mismatch;
        break;
      case AgentRuntime::NegotiatedFate::Retry:
        rt.retrying = true;
        rt.nops_left = rt.negotiated_delay;
        rt.retry_action = rt.negotiated_action;
        break;
      case AgentRuntime::NegotiatedFate::None:
        handle_failure(rt, problem, seq, failed_action);
        break;
    }
    rt.negotiated = AgentRuntime::NegotiatedFate::None;
    return;
  }
  rt.negotiated = AgentRuntime::NegotiatedFate::None;

  if (rt.retrying) return;  // committed to the nop schedule

  // replanning is triggered when the reached state differs from the
  // expected one on the agent's own fluents
  if (rt.expected && !rt.plan_fresh) {
    const State& actual = seq.back();
    for (const auto& f : rt.theory->fluents) {
      int id = problem.table.index_of(f.name);
      if ((*rt.expected)[id] != actual[id]) {
        rt.replan_reason = AgentRuntime::ReplanReason::Mismatch;
        break;
      }
    }
  }
  if (!rt.plan_fresh && rt.replan_reason == AgentRuntime::ReplanReason::None &&
      rt.has_plan && rt.cursor < static_cast<int>(rt.current_plan.steps.size())) {
    ++rt.cursor;
  }
}

std::optional<State> expected_state(const AgentRuntime& rt, const Problem& problem,
                                    const StateSeq& seq,
                                    const std::vector<std::string>& proposal) {
  std::vector<PlanAction> actions;
  for (const auto& name : proposal) actions.push_back({name, false, -1});
  return simulate_own_step(problem, *rt.theory, seq, actions, rt.synths);
}

}  // namespace baac
