#ifndef BAAC_RENDER_HPP
#define BAAC_RENDER_HPP

#include "baac/config.hpp"
#include "baac/state.hpp"

namespace baac {

// Per-step ASCII frames of a grid domain: '*' border, '|' net column,
// O/Y for white/black entities, Q/X when they hold the ball, 'o' for the
// ball on the ground. Rows run top-down from y = height to y = 1.
struct RenderResult {
  std::vector<std::string> frames;  // one multi-line frame per state
  std::string warning;              // set when hints are missing
};

RenderResult render_grid(const Problem& problem, const StateSeq& states,
                         const RenderHints& hints);

// Renders straight from a trace file's INIT + STATE-DIFF stream.
RenderResult render_trace(const Problem& problem, const std::string& trace_text,
                          const RenderHints& hints);

}  // namespace baac

#endif
