#ifndef BAAC_CONFIG_HPP
#define BAAC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace baac {

enum class Strategy { Random, MaxSubset };
enum class ConflictMode { Supervisor, Negotiate };

// Hints for the grid renderer. Entities are fluent-name stems: an entity
// `p` is drawn from fluents x_<p> / y_<p>, ball possession from
// hasball_<p>.
struct RenderHints {
  bool enabled = false;
  std::string ball;  // e.g. "ball"
  std::vector<std::string> white;
  std::vector<std::string> black;
  int net = 0;
};

struct RunConfig {
  int horizon = 0;
  std::vector<std::string> theory_files;
  Strategy strategy = Strategy::MaxSubset;
  ConflictMode mode = ConflictMode::Supervisor;
  std::uint64_t seed = 0;
  bool deterministic = true;
  int max_replans_per_step = 3;
  int max_actions_per_step = 1;
  long node_budget = 200000;
  std::string trace_path;
  RenderHints render;
};

std::string to_string(Strategy s);
std::string to_string(ConflictMode m);

}  // namespace baac

#endif
