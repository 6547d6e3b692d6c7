#ifndef BAAC_ENGINE_HPP
#define BAAC_ENGINE_HPP

#include "baac/agent.hpp"
#include "baac/trace.hpp"

namespace baac {

struct RunResult {
  // 0 = every non-failed agent reached its goals, 1 = some did not,
  // 2 = configuration error, inconsistent initial state, or an
  // unsatisfiable global constraint
  int exit_code = 0;
  std::string error;
  std::string trace;
  Trajectory trajectory;
  std::map<std::string, bool> goal_verdicts;
  std::map<std::string, std::string> final_status;  // active | failed
  CheckReport safety;  // full replay through the trajectory checker
};

// Executes the N-step concurrent simulation: proposals, conflict
// resolution, commits, outcome broadcasts and the request/offer exchange,
// all over the in-process tuple space. Deterministic mode runs every
// phase on one schedule; otherwise agents plan on their own threads with
// a barrier per phase. Both produce byte-identical traces.
RunResult run(const Problem& problem, const RunConfig& cfg);

// Loads the theories named by the settings (paths relative to base_dir)
// and validates the problem.
Problem load_problem(const RunConfig& cfg, const std::string& base_dir,
                     Diagnostics& diags);

}  // namespace baac

#endif
