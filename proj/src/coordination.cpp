#include "baac/coordination.hpp"

#include <algorithm>
#include <set>

namespace baac {

NegotiationOutcome negotiate_round_robin(const StateSeq& seq,
                                         std::vector<NegotiationParticipant> participants,
                                         const SatFn& sat, Strategy fallback_strategy,
                                         std::mt19937_64& rng) {
  NegotiationOutcome out;
  std::sort(participants.begin(), participants.end(),
            [](const NegotiationParticipant& a, const NegotiationParticipant& b) {
              return std::tie(a.action->agent, a.action->action) <
                     std::tie(b.action->agent, b.action->action);
            });

  int i = static_cast<int>(seq.size()) - 1;
  struct Slot {
    const NegotiationParticipant* p;
    size_t cursor = 0;
    bool deferred = false;
    bool dropped = false;
  };
  std::vector<Slot> slots;
  for (const auto& p : participants) slots.push_back({&p});

  auto survivors_now = [&]() {
    std::vector<const CandidateAction*> s;
    for (const Slot& slot : slots)
      if (!slot.dropped) s.push_back(slot.p->action);
    return s;
  };
  auto in_rotation = [&]() {
    for (const Slot& s : slots)
      if (!s.dropped && !s.deferred) return true;
    return false;
  };

  bool consistent = sat(survivors_now()).has_value();
  while (!consistent && in_rotation()) {
    for (Slot& slot : slots) {
      if (slot.dropped || slot.deferred) continue;
      const auto& opts = slot.p->options;
      if (slot.cursor >= opts.size()) {
        // no applicable option left: the action is inhibited and fails
        slot.dropped = true;
        out.turns.push_back({slot.p->action->agent, slot.p->action->action, -1,
                             NegotiationTurnRecord::Result::Exhausted});
        out.fates.push_back({slot.p->action->agent, slot.p->action->action,
                             NegotiationFate::Kind::Exhausted, 0});
        continue;
      }
      const ConflictOption& opt = opts[slot.cursor];
      int idx = static_cast<int>(slot.cursor);
      ++slot.cursor;
      ++out.option_turns;
      if (opt.kind == ConflictOption::Kind::Arbitrate) {
        slot.deferred = true;
        out.turns.push_back({slot.p->action->agent, slot.p->action->action, idx,
                             NegotiationTurnRecord::Result::Deferred});
        continue;
      }
      ConstraintPtr cond = opt.provided ? opt.provided : ctrue();
      if (!holds_or_false(seq, i, *cond)) {
        out.turns.push_back({slot.p->action->agent, slot.p->action->action, idx,
                             NegotiationTurnRecord::Result::Skipped});
        continue;
      }
      slot.dropped = true;
      out.turns.push_back({slot.p->action->agent, slot.p->action->action, idx,
                           NegotiationTurnRecord::Result::Applied});
      if (opt.kind == ConflictOption::Kind::Forego) {
        out.fates.push_back({slot.p->action->agent, slot.p->action->action,
                             NegotiationFate::Kind::Forego, 0});
      } else {
        out.fates.push_back({slot.p->action->agent, slot.p->action->action,
                             NegotiationFate::Kind::Retry, opt.delay});
      }
    }
    consistent = sat(survivors_now()).has_value();
  }

  std::vector<const CandidateAction*> left = survivors_now();
  if (!consistent && !left.empty()) {
    // deferred (and option-less) actions fall back to the supervisor strategy
    std::vector<const CandidateAction*> kept =
        arbitrate(left, fallback_strategy, sat, rng);
    std::set<const CandidateAction*> keep(kept.begin(), kept.end());
    for (Slot& slot : slots) {
      if (slot.dropped) continue;
      if (!keep.count(slot.p->action)) {
        slot.dropped = true;
        out.fates.push_back({slot.p->action->agent, slot.p->action->action,
                             NegotiationFate::Kind::Arbitrated, 0});
      }
    }
  }
  out.survivors = survivors_now();
  return out;
}

}  // namespace baac
