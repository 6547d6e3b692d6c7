#include "baac/render.hpp"

#include <sstream>

#include "baac/trace.hpp"

namespace baac {

namespace {

struct EntityIds {
  int x = -1, y = -1, hasball = -1;
};

EntityIds entity_ids(const Problem& problem, const std::string& stem) {
  EntityIds ids;
  ids.x = problem.table.index_of("x_" + stem);
  ids.y = problem.table.index_of("y_" + stem);
  ids.hasball = problem.table.index_of("hasball_" + stem);
  return ids;
}

}  // namespace

RenderResult render_grid(const Problem& problem, const StateSeq& states,
                         const RenderHints& hints) {
  RenderResult out;
  if (!hints.enabled) {
    out.warning = "rendering skipped: no grid render hints in the settings";
    return out;
  }
  EntityIds ball = entity_ids(problem, hints.ball);
  if (ball.x < 0 || ball.y < 0) {
    out.warning = "rendering skipped: ball fluents x_" + hints.ball + "/y_" +
                  hints.ball + " not declared";
    return out;
  }
  int width = static_cast<int>(problem.table.info(ball.x).domain.back());
  int height = static_cast<int>(problem.table.info(ball.y).domain.back());

  struct Entity {
    EntityIds ids;
    char glyph, holder_glyph;
  };
  std::vector<Entity> entities;
  for (const auto& stem : hints.white) {
    EntityIds ids = entity_ids(problem, stem);
    if (ids.x < 0 || ids.y < 0) {
      out.warning = "rendering skipped: entity '" + stem + "' lacks x/y fluents";
      return out;
    }
    entities.push_back({ids, 'O', 'Q'});
  }
  for (const auto& stem : hints.black) {
    EntityIds ids = entity_ids(problem, stem);
    if (ids.x < 0 || ids.y < 0) {
      out.warning = "rendering skipped: entity '" + stem + "' lacks x/y fluents";
      return out;
    }
    entities.push_back({ids, 'Y', 'X'});
  }

  for (size_t t = 0; t < states.size(); ++t) {
    const State& s = states[t];
    std::vector<std::string> grid(height + 2, std::string(width + 2, ' '));
    for (int c = 0; c < width + 2; ++c) {
      grid[0][c] = '*';
      grid[height + 1][c] = '*';
    }
    for (int r = 0; r < height + 2; ++r) {
      grid[r][0] = '*';
      grid[r][width + 1] = '*';
    }
    if (hints.net >= 1 && hints.net <= width)
      for (int r = 0; r < height + 2; ++r) grid[r][hints.net] = '|';

    auto plot = [&](int x, int y, char g) {
      if (x < 1 || x > width || y < 1 || y > height) return;
      grid[height + 1 - y][x] = g;
    };
    // the loose ball first so players draw over it
    bool carried = false;
    for (const Entity& e : entities)
      if (e.ids.hasball >= 0 && s[e.ids.hasball] > 0) carried = true;
    if (!carried) plot(static_cast<int>(s[ball.x]), static_cast<int>(s[ball.y]), 'o');
    for (const Entity& e : entities) {
      bool holds_ball = e.ids.hasball >= 0 && s[e.ids.hasball] > 0;
      plot(static_cast<int>(s[e.ids.x]), static_cast<int>(s[e.ids.y]),
           holds_ball ? e.holder_glyph : e.glyph);
    }

    std::ostringstream frame;
    frame << "Time " << t << ":\n";
    for (const auto& row : grid) frame << row << "\n";
    out.frames.push_back(frame.str());
  }
  return out;
}

RenderResult render_trace(const Problem& problem, const std::string& trace_text,
                          const RenderHints& hints) {
  Trajectory traj = trajectory_from_trace(problem, trace_text);
  return render_grid(problem, traj.states, hints);
}

}  // namespace baac
