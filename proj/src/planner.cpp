#include "baac/planner.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace baac {

std::vector<std::string> Plan::proposed_names(int step) const {
  std::vector<std::string> out;
  if (step < 0 || step >= static_cast<int>(steps.size())) return out;
  for (const auto& a : steps[step])
    if (!a.virtual_request) out.push_back(a.name);
  return out;
}

SynthAction synthesize_help_action(const std::string& requester, int axiom_index,
                                   const RequestAxiom& request, const HelpAxiom& help) {
  SynthAction out;
  out.name = serve_action_name(requester, axiom_index);
  ConstraintPtr cond = help.cond ? help.cond : ctrue();
  out.exec_alternatives.push_back(conj({cond, shift_time(request.trigger, -1)}));
  out.effect = request.offer ? conj({request.requested, request.offer}) : request.requested;
  return out;
}

namespace {

struct PoolAction {
  PlanAction tag;
  std::vector<ConstraintPtr> exec_alternatives;
  std::vector<std::pair<ConstraintPtr, ConstraintPtr>> laws;  // (prec, eff)
};

struct PlannerContext {
  const Problem& problem;
  const AgentTheory& owner;
  int N;  // absolute horizon
  std::span<const ConstraintPtr> goals;
  std::span<const TimedGoal> extras;
  const PlannerOptions& options;
  std::vector<PoolAction> pool;
  int lookback = 1;
  long nodes_left = 0;
  bool budget_hit = false;
  long nodes_used = 0;

  // failed (time, state window) nodes of the current deepening iteration
  std::set<std::vector<Value>> failed;

  bool charge() {
    ++nodes_used;
    if (--nodes_left < 0) {
      budget_hit = true;
      return false;
    }
    return true;
  }

  std::vector<Value> node_key(int j, const StateSeq& seq) const {
    std::vector<Value> key;
    key.push_back(j);
    int first = std::max(0, static_cast<int>(seq.size()) - (lookback + 1));
    for (size_t s = first; s < seq.size(); ++s)
      key.insert(key.end(), seq[s].begin(), seq[s].end());
    return key;
  }

  bool executable(const PoolAction& a, const StateSeq& seq) const {
    int j = static_cast<int>(seq.size()) - 1;
    for (const auto& cond : a.exec_alternatives)
      if (holds_or_false(seq, j, *cond)) return true;
    return false;
  }

  ConstraintPtr effects_of(const PoolAction& a, const StateSeq& seq) const {
    int j = static_cast<int>(seq.size()) - 1;
    std::vector<ConstraintPtr> firing;
    for (const auto& [prec, eff] : a.laws)
      if (holds_or_false(seq, j, *prec)) firing.push_back(eff);
    return conj(std::move(firing));
  }

  // Timed goals and own global constraints against the state just reached.
  bool state_admissible(const StateSeq& seq) const {
    int j = static_cast<int>(seq.size()) - 1;
    for (const auto& e : extras)
      if (e.at == j && !holds_or_false(seq, j, *e.cond)) return false;
    for (const auto& g : owner.globals) {
      if (g.always) {
        if (!holds_or_false(seq, j, *g.cond)) return false;
      } else if (g.at_time == j) {
        if (!holds_or_false(seq, j, *g.cond)) return false;
      }
    }
    return true;
  }

  // Everything after time j stays inert; check the remaining obligations,
  // globals and the goals at N.
  bool tail_succeeds(const StateSeq& seq) const {
    int j = static_cast<int>(seq.size()) - 1;
    StateSeq ext = seq;
    for (int t = j + 1; t <= N; ++t) {
      ext.push_back(ext.back());
      StateSeq& e = ext;
      int idx = static_cast<int>(e.size()) - 1;
      for (const auto& ex : extras)
        if (ex.at == idx && !holds_or_false(e, idx, *ex.cond)) return false;
      for (const auto& g : owner.globals) {
        if (g.always) {
          if (!holds_or_false(e, idx, *g.cond)) return false;
        } else if (g.at_time == idx) {
          if (!holds_or_false(e, idx, *g.cond)) return false;
        }
      }
    }
    for (const auto& goal : goals)
      if (!holds_or_false(ext, N, *goal)) return false;
    return true;
  }

  // Depth-first to the horizon. At each node the inertial tail is tried
  // first (act no further; everything after stays inert), then the action
  // sets singleton-first, then the empty step. A successful branch leaves
  // its steps in plan_steps, nop-padded to the horizon by the caller.
  bool dfs(StateSeq& seq, std::vector<std::vector<PlanAction>>& plan_steps) {
    if (budget_hit) return false;
    int j = static_cast<int>(seq.size()) - 1;
    if (tail_succeeds(seq)) return true;
    if (j == N) return false;
    if (!charge()) return false;
    std::vector<Value> key = node_key(j, seq);
    if (failed.count(key)) return false;

    std::vector<int> executables;
    for (size_t i = 0; i < pool.size(); ++i)
      if (executable(pool[i], seq)) executables.push_back(static_cast<int>(i));

    int cap = std::min<int>(options.max_actions_per_step,
                            static_cast<int>(executables.size()));
    auto try_set = [&](const std::vector<int>& subset) -> bool {
      std::vector<ConstraintPtr> parts;
      for (int idx : subset) parts.push_back(effects_of(pool[idx], seq));
      ConstraintPtr joint = conj(std::move(parts));
      // The supervisor commits the lexicographically smallest solution of
      // the joint effects; the local simulation follows the same choice.
      auto sigmas = solve_next_all(problem.table, seq, *joint, 1, &nodes_left,
                                   &budget_hit);
      if (budget_hit) return false;
      for (const auto& sigma : sigmas) {
        seq.push_back(inertial_complete(sigma, seq));
        bool ok = state_admissible(seq);
        if (ok) {
          plan_steps.emplace_back();
          for (int idx : subset) plan_steps.back().push_back(pool[idx].tag);
          if (dfs(seq, plan_steps)) return true;
          plan_steps.pop_back();
        }
        seq.pop_back();
        if (budget_hit) return false;
      }
      return false;
    };

    std::vector<int> subset;
    for (int size = 1; size <= cap; ++size) {
      // combinations of the executables, lexicographic in pool order
      std::vector<int> cursor(size);
      for (int i = 0; i < size; ++i) cursor[i] = i;
      while (true) {
        subset.clear();
        for (int i : cursor) subset.push_back(executables[i]);
        if (try_set(subset)) return true;
        if (budget_hit) return false;
        int k = size - 1;
        while (k >= 0 && cursor[k] == static_cast<int>(executables.size()) - size + k)
          --k;
        if (k < 0) break;
        ++cursor[k];
        for (int i = k + 1; i < size; ++i) cursor[i] = cursor[i - 1] + 1;
      }
    }

    // the empty step: pure inertia (distinct from stopping, because later
    // steps may act again)
    {
      seq.push_back(seq.back());
      bool ok = state_admissible(seq);
      if (ok) {
        plan_steps.emplace_back();
        if (dfs(seq, plan_steps)) return true;
        plan_steps.pop_back();
      }
      seq.pop_back();
      if (budget_hit) return false;
    }
    failed.insert(std::move(key));
    return false;
  }
};

void build_pool(PlannerContext& ctx, std::span<const SynthAction> synths) {
  for (const auto& decl : ctx.owner.actions) {
    PoolAction a;
    a.tag = {decl.name, false, -1};
    for (const auto& e : ctx.owner.execs)
      if (e.action == decl.name) a.exec_alternatives.push_back(e.cond);
    for (const auto& l : ctx.owner.laws)
      if (l.action == decl.name) a.laws.emplace_back(l.prec, l.eff);
    ctx.pool.push_back(std::move(a));
  }
  for (const auto& s : synths) {
    PoolAction a;
    a.tag = {s.name, false, -1};
    a.exec_alternatives = s.exec_alternatives;
    a.laws.emplace_back(ctrue(), s.effect);
    ctx.pool.push_back(std::move(a));
  }
  for (size_t k = 0; k < ctx.owner.requests.size(); ++k) {
    const RequestAxiom& r = ctx.owner.requests[k];
    PoolAction a;
    a.tag = {"request@" + std::to_string(k), true, static_cast<int>(k)};
    a.exec_alternatives.push_back(shift_time(r.trigger, -1));
    ConstraintPtr eff = r.offer ? conj({r.requested, r.offer}) : r.requested;
    a.laws.emplace_back(ctrue(), eff);
    ctx.pool.push_back(std::move(a));
  }

  int lb = 1;
  auto widen = [&](const ConstraintPtr& c) {
    if (c) lb = std::max(lb, lookback_depth(*c));
  };
  for (const auto& a : ctx.pool) {
    for (const auto& e : a.exec_alternatives) widen(e);
    for (const auto& [p, e] : a.laws) {
      widen(p);
      widen(e);
    }
  }
  for (const auto& g : ctx.goals) widen(g);
  for (const auto& e : ctx.extras) widen(e.cond);
  for (const auto& g : ctx.owner.globals) widen(g.cond);
  ctx.lookback = lb;
}

}  // namespace

PlanResult plan(const Problem& problem, const AgentTheory& owner, const StateSeq& seq,
                int total_horizon, std::span<const ConstraintPtr> goals,
                std::span<const TimedGoal> extras, std::span<const SynthAction> synths,
                const PlannerOptions& options) {
  assert(!seq.empty());
  PlanResult result;
  PlannerContext ctx{problem, owner, total_horizon, goals, extras, options};
  build_pool(ctx, synths);
  ctx.nodes_left = options.node_budget;

  int start = static_cast<int>(seq.size()) - 1;
  int remaining = total_horizon - start;
  if (remaining < 0) {
    result.status = PlanStatus::NoPlan;
    return result;
  }

  StateSeq working = seq;
  std::vector<std::vector<PlanAction>> steps;
  bool found = ctx.dfs(working, steps);
  result.nodes = ctx.nodes_used;
  if (found) {
    while (static_cast<int>(steps.size()) < remaining) steps.emplace_back();
    result.plan.steps = std::move(steps);
    result.status = PlanStatus::Found;
    return result;
  }
  result.status =
      ctx.budget_hit ? PlanStatus::BudgetExceeded : PlanStatus::NoPlan;
  return result;
}

PlanResult replan(const Problem& problem, const AgentTheory& owner, const StateSeq& seq,
                  int total_horizon, std::span<const ConstraintPtr> goals,
                  std::span<const TimedGoal> extras, std::span<const SynthAction> synths,
                  const PlannerOptions& options) {
  return plan(problem, owner, seq, total_horizon, goals, extras, synths, options);
}

EvaluateRequestResult evaluate_request(const Problem& problem, const AgentTheory& responder,
                                       const StateSeq& seq, const RequestInstance& request,
                                       int total_horizon,
                                       std::span<const ConstraintPtr> goals,
                                       std::span<const TimedGoal> obligations,
                                       std::span<const SynthAction> synths,
                                       const PlannerOptions& options) {
  EvaluateRequestResult out;
  assert(request.axiom);
  int i = static_cast<int>(seq.size()) - 1;

  // Only an agent knowing every fluent of the requested condition (and of
  // the promised reward) can answer.
  for (int id : timeless_fluents(*request.axiom->requested))
    if (!responder.declares_fluent(problem.table.info(id).name)) return out;
  if (request.axiom->offer) {
    for (int id : timeless_fluents(*request.axiom->offer))
      if (!responder.declares_fluent(problem.table.info(id).name)) return out;
  }

  // A matching help axiom whose condition holds now gates the evaluation.
  std::vector<const HelpAxiom*> matching;
  for (const auto& h : responder.helps) {
    bool donor = h.all || std::find(h.donors.begin(), h.donors.end(),
                                    request.requester) != h.donors.end();
    if (!donor) continue;
    ConstraintPtr cond = h.cond ? h.cond : ctrue();
    if (holds_or_false(seq, i, *cond)) matching.push_back(&h);
  }
  if (matching.empty()) return out;

  SynthAction merged;
  merged.name = serve_action_name(request.requester, request.axiom_index);
  for (const HelpAxiom* h : matching) {
    SynthAction one = synthesize_help_action(request.requester, request.axiom_index,
                                             *request.axiom, *h);
    merged.exec_alternatives.insert(merged.exec_alternatives.end(),
                                    one.exec_alternatives.begin(),
                                    one.exec_alternatives.end());
    merged.effect = one.effect;
  }

  std::vector<SynthAction> enlarged_synths(synths.begin(), synths.end());
  bool already = false;
  for (const auto& s : enlarged_synths)
    if (s.name == merged.name) already = true;
  if (!already) enlarged_synths.push_back(merged);

  TimedGoal obligation{request.axiom->requested, i + 1};
  std::vector<TimedGoal> enlarged(obligations.begin(), obligations.end());
  enlarged.push_back(obligation);

  out.planned = true;
  out.plan = plan(problem, responder, seq, total_horizon, goals, enlarged,
                  enlarged_synths, options);
  out.accept = out.plan.status == PlanStatus::Found;
  out.synth = merged;
  out.obligation = obligation;
  return out;
}

std::optional<State> simulate_own_step(const Problem& problem, const AgentTheory& owner,
                                       const StateSeq& seq,
                                       std::span<const PlanAction> actions,
                                       std::span<const SynthAction> synths) {
  int j = static_cast<int>(seq.size()) - 1;
  std::vector<ConstraintPtr> parts;
  for (const auto& a : actions) {
    if (a.virtual_request) {
      const RequestAxiom& r = owner.requests[a.request_index];
      parts.push_back(r.offer ? conj({r.requested, r.offer}) : r.requested);
      continue;
    }
    bool synth_found = false;
    for (const auto& s : synths) {
      if (s.name == a.name) {
        parts.push_back(s.effect);
        synth_found = true;
        break;
      }
    }
    if (synth_found) continue;
    std::vector<ConstraintPtr> firing;
    for (const auto& l : owner.laws)
      if (l.action == a.name && holds_or_false(seq, j, *l.prec)) firing.push_back(l.eff);
    parts.push_back(conj(std::move(firing)));
  }
  ConstraintPtr joint = conj(std::move(parts));
  auto sigma = solve_next(problem.table, seq, *joint);
  if (!sigma) return std::nullopt;
  return inertial_complete(*sigma, seq);
}

}  // namespace baac
