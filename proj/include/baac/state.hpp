#ifndef BAAC_STATE_HPP
#define BAAC_STATE_HPP

#include <string>
#include <vector>

#include "baac/ast.hpp"
#include "baac/problem.hpp"

namespace baac {

// Total valuation, indexed by fluent table id.
using State = std::vector<Value>;

// <v_0, ..., v_i>
using StateSeq = std::vector<State>;

// Assignments over a subset of fluents, sorted by id.
struct PartialState {
  std::vector<std::pair<int, Value>> assignments;

  bool has(int id) const;
  Value get(int id) const;
};

struct ActionInstance {
  std::string agent;
  std::string action;

  bool operator==(const ActionInstance&) const = default;
  bool operator<(const ActionInstance& o) const {
    return agent != o.agent ? agent < o.agent : action < o.action;
  }
};

// <v_0, X_1, v_1, ..., X_N, v_N>
struct Trajectory {
  StateSeq states;
  std::vector<std::vector<ActionInstance>> steps;  // steps[i] = X_{i+1}
};

std::string state_to_string(const FluentTable& table, const State& s);

}  // namespace baac

#endif
