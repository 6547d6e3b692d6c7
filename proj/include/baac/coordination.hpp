#ifndef BAAC_COORDINATION_HPP
#define BAAC_COORDINATION_HPP

#include <random>

#include "baac/supervisor.hpp"

namespace baac {

// One agent+action in a conflict, with its on_conflict options.
struct NegotiationParticipant {
  const CandidateAction* action = nullptr;
  std::vector<ConflictOption> options;
};

struct NegotiationTurnRecord {
  std::string agent;
  std::string action;
  int option_index = -1;  // -1: exhausted drop
  enum class Result { Applied, Skipped, Deferred, Exhausted } result;
};

struct NegotiationFate {
  std::string agent;
  std::string action;
  enum class Kind { Forego, Retry, Exhausted, Arbitrated } kind;
  int retry_delay = 0;
};

struct NegotiationOutcome {
  std::vector<const CandidateAction*> survivors;
  std::vector<NegotiationFate> fates;  // dropped participants only
  std::vector<NegotiationTurnRecord> turns;
  int option_turns = 0;  // turns that consumed an on_conflict option
};

// Agent-driven round-robin: participants take turns in (agent, action)
// order; each tries its next unexplored option whose condition holds.
// forego and retry_after drop the action; arbitrate defers it to the
// supervisor strategy. After every full round the surviving set is
// checked for a solution. Participants with no options left are dropped
// with a plain failure. If the rotation empties while the survivors are
// still inconsistent, the supervisor strategy arbitrates the remainder.
NegotiationOutcome negotiate_round_robin(const StateSeq& seq,
                                         std::vector<NegotiationParticipant> participants,
                                         const SatFn& sat, Strategy fallback_strategy,
                                         std::mt19937_64& rng);

}  // namespace baac

#endif
