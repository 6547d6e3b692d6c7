#ifndef BAAC_SOLVE_HPP
#define BAAC_SOLVE_HPP

#include <optional>

#include "baac/eval.hpp"
#include "baac/state.hpp"

namespace baac {

// Searches for a partial next state sigma over the timeless fluents of c
// such that <v_0..v_i, sigma> satisfies c at index i+1. Depth-first in
// fluent-table order, values ascending, with unit propagation on basic
// primitive conjuncts; the first solution found is the lexicographically
// smallest. Returns nullopt when unsatisfiable.
std::optional<PartialState> solve_next(const FluentTable& table, const StateSeq& seq,
                                       const Constraint& c);

// All solutions in lexicographic order, up to max_count. node_budget, when
// given, is decremented per search node; exhaustion stops the search early
// (reported via *budget_hit).
std::vector<PartialState> solve_next_all(const FluentTable& table, const StateSeq& seq,
                                         const Constraint& c, size_t max_count,
                                         long* node_budget = nullptr,
                                         bool* budget_hit = nullptr);

// ine: completes sigma by copying every unassigned fluent from the last
// state of the sequence.
State inertial_complete(const PartialState& sigma, const StateSeq& seq);

// f = <value> with the fluent id already resolved; used to pin inertial
// fluents when global constraints join a transition solve.
ConstraintPtr pin_constraint(const FluentTable& table, int fluent_id, Value v);

}  // namespace baac

#endif
