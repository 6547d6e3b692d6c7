#include "baac/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace baac {

std::string serve_action_name(const std::string& requester, int axiom_index) {
  return "serve@" + requester + "@r" + std::to_string(axiom_index);
}

bool parse_serve_action_name(const std::string& name, std::string* requester,
                             int* axiom_index) {
  if (name.rfind("serve@", 0) != 0) return false;
  size_t second = name.find('@', 6);
  if (second == std::string::npos || second + 2 >= name.size()) return false;
  if (name[second + 1] != 'r') return false;
  *requester = name.substr(6, second - 6);
  try {
    *axiom_index = std::stoi(name.substr(second + 2));
  } catch (...) {
    return false;
  }
  return true;
}

std::optional<ActionSemantics> resolve_action_semantics(const Problem& problem,
                                                        const AgentTheory& owner,
                                                        const std::string& action) {
  ActionSemantics sem;
  if (action == kNopName) {
    sem.exec_alternatives.push_back(ctrue());
    return sem;
  }
  if (owner.find_action(action)) {
    for (const auto& e : owner.execs)
      if (e.action == action) sem.exec_alternatives.push_back(e.cond);
    for (const auto& l : owner.laws)
      if (l.action == action) sem.laws.emplace_back(l.prec, l.eff);
    return sem;
  }
  std::string requester;
  int axiom_index = 0;
  if (parse_serve_action_name(action, &requester, &axiom_index)) {
    const AgentTheory* req_theory = problem.theory(requester);
    if (!req_theory) return std::nullopt;
    if (axiom_index < 0 ||
        axiom_index >= static_cast<int>(req_theory->requests.size()))
      return std::nullopt;
    const RequestAxiom& r = req_theory->requests[axiom_index];
    ConstraintPtr trigger_past = shift_time(r.trigger, -1);
    for (const auto& h : owner.helps) {
      bool donor_match = h.all || std::find(h.donors.begin(), h.donors.end(),
                                            requester) != h.donors.end();
      if (!donor_match) continue;
      ConstraintPtr cond = h.cond ? h.cond : ctrue();
      sem.exec_alternatives.push_back(conj({cond, trigger_past}));
    }
    if (sem.exec_alternatives.empty()) return std::nullopt;
    ConstraintPtr eff = r.offer ? conj({r.requested, r.offer}) : r.requested;
    sem.laws.emplace_back(ctrue(), eff);
    return sem;
  }
  return std::nullopt;
}

bool executable_in(const Problem& problem, const AgentTheory& owner,
                   const StateSeq& seq, const std::string& action) {
  auto sem = resolve_action_semantics(problem, owner, action);
  if (!sem) return false;
  int i = static_cast<int>(seq.size()) - 1;
  for (const auto& cond : sem->exec_alternatives)
    if (holds_or_false(seq, i, *cond)) return true;
  return false;
}

ConstraintPtr desired_effects(const Problem& problem, const AgentTheory& owner,
                              const StateSeq& seq, const std::string& action) {
  auto sem = resolve_action_semantics(problem, owner, action);
  if (!sem) return ctrue();
  int i = static_cast<int>(seq.size()) - 1;
  std::vector<ConstraintPtr> firing;
  for (const auto& [prec, eff] : sem->laws)
    if (holds_or_false(seq, i, *prec)) firing.push_back(eff);
  return conj(std::move(firing));
}

ConstraintPtr joint_effects(const Problem& problem, const StateSeq& seq,
                            const std::vector<ActionInstance>& actions) {
  std::vector<ConstraintPtr> parts;
  for (const auto& a : actions) {
    const AgentTheory* t = problem.theory(a.agent);
    assert(t && "unknown agent in action set");
    parts.push_back(desired_effects(problem, *t, seq, a.action));
  }
  return conj(std::move(parts));
}

std::optional<State> apply_transition(const Problem& problem, const StateSeq& seq,
                                      const std::vector<ActionInstance>& actions) {
  assert(!seq.empty());
  if (actions.empty()) return seq.back();
  ConstraintPtr joint = joint_effects(problem, seq, actions);
  auto sigma = solve_next(problem.table, seq, *joint);
  if (!sigma) return std::nullopt;
  return inertial_complete(*sigma, seq);
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::Length: return "length";
    case Violation::Kind::UnknownAgent: return "unknown-agent";
    case Violation::Kind::UnknownAction: return "unknown-action";
    case Violation::Kind::NotExecutable: return "not-executable";
    case Violation::Kind::EffectMismatch: return "effect-mismatch";
    case Violation::Kind::InertiaViolation: return "inertia-violation";
    case Violation::Kind::DomainViolation: return "domain-violation";
    case Violation::Kind::InitialViolation: return "initial-violation";
    case Violation::Kind::GlobalViolation: return "global-violation";
    case Violation::Kind::EvalError: return "eval-error";
  }
  return "?";
}

std::string CheckReport::to_string(const Problem& problem) const {
  (void)problem;
  std::ostringstream os;
  for (const auto& v : violations)
    os << "step " << v.step << ": " << baac::to_string(v.kind) << ": " << v.detail
       << "\n";
  for (const auto& [agent, ok] : agent_success)
    os << "agent " << agent << ": " << (ok ? "success" : "failure") << "\n";
  return os.str();
}

CheckReport check_trajectory(const Problem& problem, const Trajectory& traj, int N) {
  CheckReport report;
  auto violate = [&](Violation::Kind k, int step, std::string detail) {
    report.violations.push_back({k, step, std::move(detail)});
  };

  if (static_cast<int>(traj.states.size()) != N + 1 ||
      static_cast<int>(traj.steps.size()) != N) {
    violate(Violation::Kind::Length, 0,
            "expected " + std::to_string(N + 1) + " states and " + std::to_string(N) +
                " action sets, found " + std::to_string(traj.states.size()) + "/" +
                std::to_string(traj.steps.size()));
    return report;
  }
  for (int i = 0; i <= N; ++i) {
    if (static_cast<int>(traj.states[i].size()) != problem.table.size()) {
      violate(Violation::Kind::Length, i, "state width mismatch");
      return report;
    }
    for (int f = 0; f < problem.table.size(); ++f) {
      if (!problem.table.info(f).contains(traj.states[i][f]))
        violate(Violation::Kind::DomainViolation, i,
                problem.table.info(f).name + "=" + std::to_string(traj.states[i][f]));
    }
  }

  StateSeq prefix{traj.states[0]};
  for (const auto& t : problem.theories) {
    for (const auto& init : t.inits) {
      bool err = false;
      if (!holds_or_false(prefix, 0, *init, &err))
        violate(err ? Violation::Kind::EvalError : Violation::Kind::InitialViolation, 0,
                "agent " + t.name + ": initially " + baac::to_string(*init));
    }
  }

  for (int i = 1; i <= N; ++i) {
    const auto& actions = traj.steps[i - 1];
    bool semantics_known = true;
    for (const auto& a : actions) {
      const AgentTheory* t = problem.theory(a.agent);
      if (!t) {
        violate(Violation::Kind::UnknownAgent, i, a.agent);
        semantics_known = false;
        continue;
      }
      auto sem = resolve_action_semantics(problem, *t, a.action);
      if (!sem) {
        violate(Violation::Kind::UnknownAction, i, a.agent + ":" + a.action);
        semantics_known = false;
        continue;
      }
      if (!executable_in(problem, *t, prefix, a.action))
        violate(Violation::Kind::NotExecutable, i, a.agent + ":" + a.action);
    }
    StateSeq extended = prefix;
    extended.push_back(traj.states[i]);
    if (semantics_known) {
      ConstraintPtr joint = joint_effects(problem, prefix, actions);
      bool err = false;
      if (!holds_or_false(extended, i, *joint, &err)) {
        violate(err ? Violation::Kind::EvalError : Violation::Kind::EffectMismatch, i,
                baac::to_string(*joint));
      }
      std::vector<int> touched = timeless_fluents(*joint);
      for (int f = 0; f < problem.table.size(); ++f) {
        if (std::binary_search(touched.begin(), touched.end(), f)) continue;
        if (traj.states[i][f] != traj.states[i - 1][f])
          violate(Violation::Kind::InertiaViolation, i,
                  problem.table.info(f).name + " changed " +
                      std::to_string(traj.states[i - 1][f]) + " -> " +
                      std::to_string(traj.states[i][f]) + " without a firing law");
      }
    }
    prefix = std::move(extended);
  }

  // Global constraints filter whole trajectories.
  for (const auto& t : problem.theories) {
    for (const auto& g : t.globals) {
      if (g.always) {
        for (int i = 0; i <= N; ++i) {
          bool err = false;
          if (!holds_or_false(prefix, i, *g.cond, &err))
            violate(err ? Violation::Kind::EvalError : Violation::Kind::GlobalViolation,
                    i, "agent " + t.name + ": always " + baac::to_string(*g.cond));
        }
      } else if (g.at_time <= N) {
        bool err = false;
        if (!holds_or_false(prefix, g.at_time, *g.cond, &err))
          violate(err ? Violation::Kind::EvalError : Violation::Kind::GlobalViolation,
                  g.at_time,
                  "agent " + t.name + ": " + baac::to_string(*g.cond) + " holds_at " +
                      std::to_string(g.at_time));
      }
    }
  }

  for (const auto& t : problem.theories) {
    bool ok = true;
    for (const auto& goal : t.goals)
      if (!holds_or_false(prefix, N, *goal)) ok = false;
    report.agent_success[t.name] = ok;
  }
  return report;
}

namespace {

struct OracleSearch {
  const Problem& problem;
  const AgentTheory& owner;
  int N;
  long nodes_left;
  bool too_large = false;
  std::vector<Trajectory> found;
  std::vector<const GlobalAxiom*> globals;

  bool state_ok(const StateSeq& seq, int index) {
    for (const GlobalAxiom* g : globals) {
      if (g->always) {
        if (!holds_or_false(seq, index, *g->cond)) return false;
      } else if (g->at_time == index) {
        if (!holds_or_false(seq, index, *g->cond)) return false;
      }
    }
    return true;
  }

  void rec(StateSeq& seq, std::vector<std::vector<ActionInstance>>& steps) {
    if (--nodes_left <= 0) {
      too_large = true;
      return;
    }
    int i = static_cast<int>(seq.size()) - 1;
    if (i == N) {
      for (const auto& goal : owner.goals)
        if (!holds_or_false(seq, N, *goal)) return;
      found.push_back({seq, steps});
      return;
    }
    // X = empty set
    {
      seq.push_back(seq.back());
      steps.emplace_back();
      if (state_ok(seq, i + 1)) rec(seq, steps);
      steps.pop_back();
      seq.pop_back();
    }
    for (const auto& decl : owner.actions) {
      if (too_large) return;
      if (!executable_in(problem, owner, seq, decl.name)) continue;
      ConstraintPtr eff = desired_effects(problem, owner, seq, decl.name);
      auto sigmas = solve_next_all(problem.table, seq, *eff, 100000, &nodes_left,
                                   &too_large);
      for (const auto& sigma : sigmas) {
        if (too_large) return;
        seq.push_back(inertial_complete(sigma, seq));
        steps.push_back({{owner.name, decl.name}});
        if (state_ok(seq, i + 1)) rec(seq, steps);
        steps.pop_back();
        seq.pop_back();
      }
    }
  }
};

}  // namespace

OracleResult brute_force_plans(const Problem& problem, const AgentTheory& owner,
                               const State& init, int N, long node_cap) {
  OracleResult result;
  // Pre-check the enumeration size: (|actions|+1)^N choice sequences.
  double est = 1;
  for (int i = 0; i < N; ++i) {
    est *= static_cast<double>(owner.actions.size() + 1);
    if (est > 1e6) {
      result.too_large = true;
      return result;
    }
  }
  OracleSearch search{problem, owner, N, node_cap};
  for (const auto& g : owner.globals) search.globals.push_back(&g);

  StateSeq seq{init};
  for (const auto& i : owner.inits)
    if (!holds_or_false(seq, 0, *i)) return result;
  if (!search.state_ok(seq, 0)) return result;

  std::vector<std::vector<ActionInstance>> steps;
  search.rec(seq, steps);
  result.too_large = result.too_large || search.too_large;
  result.plans = std::move(search.found);
  return result;
}

}  // namespace baac
