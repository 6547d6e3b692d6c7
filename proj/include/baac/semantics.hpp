#ifndef BAAC_SEMANTICS_HPP
#define BAAC_SEMANTICS_HPP

#include <map>
#include <optional>
#include <string>

#include "baac/solve.hpp"
#include "baac/state.hpp"

namespace baac {

// Executability alternatives plus dynamic laws of one action, after name
// resolution. Synthetic serve actions (named "serve@<requester>@r<k>")
// are reconstructed from the requester's request axiom and the owner's
// help axioms; nop has no laws.
struct ActionSemantics {
  std::vector<ConstraintPtr> exec_alternatives;             // disjunctive
  std::vector<std::pair<ConstraintPtr, ConstraintPtr>> laws;  // (prec, eff)
};

inline const char* kNopName = "nop";

std::string serve_action_name(const std::string& requester, int axiom_index);
bool parse_serve_action_name(const std::string& name, std::string* requester,
                             int* axiom_index);

// Returns nullopt for names that are neither declared by `owner`, nop,
// nor a reconstructible serve action.
std::optional<ActionSemantics> resolve_action_semantics(const Problem& problem,
                                                        const AgentTheory& owner,
                                                        const std::string& action);

bool executable_in(const Problem& problem, const AgentTheory& owner,
                   const StateSeq& seq, const std::string& action);

// DEff: conjunction of the effects of every law whose precondition holds
// at the last index of the sequence. Empty conjunction is `true`.
ConstraintPtr desired_effects(const Problem& problem, const AgentTheory& owner,
                              const StateSeq& seq, const std::string& action);

// Joint desired effects of an action set.
ConstraintPtr joint_effects(const Problem& problem, const StateSeq& seq,
                            const std::vector<ActionInstance>& actions);

// One valid state transition: solves the joint effects and completes by
// inertia. nullopt when the effects admit no solution. The empty set
// yields the last state unchanged.
std::optional<State> apply_transition(const Problem& problem, const StateSeq& seq,
                                      const std::vector<ActionInstance>& actions);

struct Violation {
  enum class Kind {
    Length,
    UnknownAgent,
    UnknownAction,
    NotExecutable,
    EffectMismatch,
    InertiaViolation,
    DomainViolation,
    InitialViolation,
    GlobalViolation,
    EvalError,
  };
  Kind kind;
  int step;  // index of the reached state (0 for initial problems)
  std::string detail;
};

struct CheckReport {
  std::vector<Violation> violations;
  std::map<std::string, bool> agent_success;  // goal verdict at time N

  bool valid() const { return violations.empty(); }
  std::string to_string(const Problem& problem) const;
};

CheckReport check_trajectory(const Problem& problem, const Trajectory& traj, int N);

// Test oracle: exhaustive enumeration of the valid successful trajectories
// of a single agent acting alone, at most one action per step. Every
// solution of each step's effects is expanded.
struct OracleResult {
  std::vector<Trajectory> plans;
  bool too_large = false;
};

OracleResult brute_force_plans(const Problem& problem, const AgentTheory& owner,
                               const State& init, int N,
                               long node_cap = 1000000);

std::string to_string(Violation::Kind k);

}  // namespace baac

#endif
