#ifndef BAAC_TRACE_HPP
#define BAAC_TRACE_HPP

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "baac/config.hpp"
#include "baac/state.hpp"

namespace baac {

// Line-oriented, tab-separated event log. Events carry a (step, phase,
// key) sort key so that concurrent schedules flush to the identical byte
// stream as the single-threaded one.
class TraceLog {
 public:
  void add(int step, int phase, const std::string& key, std::vector<std::string> fields);
  std::string render() const;  // sorted, one event per line

 private:
  struct Entry {
    int step;
    int phase;
    std::string key;
    long seq;
    std::vector<std::string> fields;
  };
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
  std::map<std::tuple<int, int, std::string>, long> counters_;
};

// Step phases, in flush order.
enum TracePhase {
  kPhaseHeader = 0,
  kPhasePropose = 1,
  kPhaseSupervise = 2,
  kPhaseExchange = 3,
  kPhaseUpdate = 4,
  kPhaseVerdict = 5,
};

std::string format_state(const Problem& problem, const State& s);
std::string format_diff(const Problem& problem, const State& before, const State& after);

// ---------------------------------------------------------------------------
// Trajectory fixtures: `STEP i | ACTIONS agent:action,... | STATE f=v,...`
// with full name-sorted states, `-` for the empty action set.

std::string trajectory_to_fixture(const Problem& problem, const Trajectory& traj);
Trajectory fixture_to_trajectory(const Problem& problem, const std::string& text);

// Rebuilds the trajectory recorded in a trace (INIT plus the STATE-DIFF
// stream; ENABLE events give the action sets).
Trajectory trajectory_from_trace(const Problem& problem, const std::string& trace_text);

// The state sequence alone (INIT + STATE-DIFF), usable without theories.
std::vector<std::map<std::string, Value>> states_from_trace(const std::string& trace_text);

}  // namespace baac

#endif
