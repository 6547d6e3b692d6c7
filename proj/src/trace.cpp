#include "baac/trace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace baac {

void TraceLog::add(int step, int phase, const std::string& key,
                   std::vector<std::string> fields) {
  std::lock_guard<std::mutex> lock(mu_);
  long seq = counters_[{step, phase, key}]++;
  entries_.push_back({step, phase, key, seq, std::move(fields)});
}

std::string TraceLog::render() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<const Entry*> sorted;
  sorted.reserve(entries_.size());
  for (const auto& e : entries_) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry* a, const Entry* b) {
    return std::tie(a->step, a->phase, a->key, a->seq) <
           std::tie(b->step, b->phase, b->key, b->seq);
  });
  std::ostringstream os;
  for (const Entry* e : sorted) {
    for (size_t i = 0; i < e->fields.size(); ++i) {
      if (i) os << '\t';
      os << e->fields[i];
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::pair<std::string, int>> sorted_fluents(const Problem& problem) {
  std::vector<std::pair<std::string, int>> names;
  for (int i = 0; i < problem.table.size(); ++i)
    names.emplace_back(problem.table.info(i).name, i);
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_state(const Problem& problem, const State& s) {
  std::ostringstream os;
  bool first = true;
  for (auto& [name, id] : sorted_fluents(problem)) {
    if (!first) os << ",";
    first = false;
    os << name << "=" << s[id];
  }
  return os.str();
}

std::string format_diff(const Problem& problem, const State& before, const State& after) {
  std::ostringstream os;
  bool first = true;
  for (auto& [name, id] : sorted_fluents(problem)) {
    if (before[id] == after[id]) continue;
    if (!first) os << ",";
    first = false;
    os << name << "=" << after[id];
  }
  std::string out = os.str();
  return out.empty() ? "-" : out;
}

std::string trajectory_to_fixture(const Problem& problem, const Trajectory& traj) {
  std::ostringstream os;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    os << "STEP " << i << " | ACTIONS ";
    if (i == 0 || traj.steps[i - 1].empty()) {
      os << "-";
    } else {
      std::vector<ActionInstance> acts = traj.steps[i - 1];
      std::sort(acts.begin(), acts.end());
      for (size_t k = 0; k < acts.size(); ++k) {
        if (k) os << ",";
        os << acts[k].agent << ":" << acts[k].action;
      }
    }
    os << " | STATE " << format_state(problem, traj.states[i]) << "\n";
  }
  return os.str();
}

namespace {

State parse_state_fields(const Problem& problem, const std::string& text, int lineno) {
  State s(problem.table.size(), 0);
  std::vector<bool> seen(problem.table.size(), false);
  for (const std::string& kv : split(text, ',')) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": bad state field '" + kv + "'");
    std::string name = trim(kv.substr(0, eq));
    int id = problem.table.index_of(name);
    if (id < 0)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": unknown fluent '" + name + "'");
    s[id] = std::stoll(kv.substr(eq + 1));
    seen[id] = true;
  }
  for (int i = 0; i < problem.table.size(); ++i)
    if (!seen[i])
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": missing fluent '" + problem.table.info(i).name + "'");
  return s;
}

std::vector<ActionInstance> parse_action_fields(const std::string& text, int lineno) {
  std::vector<ActionInstance> out;
  std::string t = trim(text);
  if (t == "-" || t.empty()) return out;
  for (const std::string& item : split(t, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": bad action '" + item + "'");
    out.push_back({trim(item.substr(0, colon)), trim(item.substr(colon + 1))});
  }
  return out;
}

}  // namespace

Trajectory fixture_to_trajectory(const Problem& problem, const std::string& text) {
  Trajectory traj;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int expected_step = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '%') continue;
    std::vector<std::string> parts = split(line, '|');
    if (parts.size() != 3)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": expected 'STEP i | ACTIONS ... | STATE ...'");
    std::string step_part = trim(parts[0]);
    if (step_part.rfind("STEP ", 0) != 0)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": missing STEP");
    int step = std::stoi(step_part.substr(5));
    if (step != expected_step)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": expected STEP " + std::to_string(expected_step));
    ++expected_step;
    std::string actions_part = trim(parts[1]);
    if (actions_part.rfind("ACTIONS", 0) != 0)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": missing ACTIONS");
    std::string state_part = trim(parts[2]);
    if (state_part.rfind("STATE", 0) != 0)
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": missing STATE");
    std::vector<ActionInstance> actions =
        parse_action_fields(trim(actions_part.substr(7)), lineno);
    if (step == 0 && !actions.empty())
      throw std::runtime_error("fixture line " + std::to_string(lineno) +
                               ": STEP 0 carries no actions");
    if (step > 0) traj.steps.push_back(std::move(actions));
    traj.states.push_back(parse_state_fields(problem, trim(state_part.substr(6)), lineno));
  }
  if (traj.states.empty()) throw std::runtime_error("empty fixture");
  return traj;
}

std::vector<std::map<std::string, Value>> states_from_trace(const std::string& trace_text) {
  std::vector<std::map<std::string, Value>> states;
  std::istringstream in(trace_text);
  std::string line;
  std::map<std::string, Value> current;
  bool have_init = false;
  auto apply_fields = [&](const std::string& text) {
    if (trim(text) == "-") return;
    for (const std::string& kv : split(text, ',')) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("bad trace state field: " + kv);
      current[trim(kv.substr(0, eq))] = std::stoll(kv.substr(eq + 1));
    }
  };
  while (std::getline(in, line)) {
    std::vector<std::string> cols = split(line, '\t');
    if (cols.empty()) continue;
    if (cols[0] == "INIT" && cols.size() >= 2) {
      apply_fields(cols[1]);
      states.push_back(current);
      have_init = true;
    } else if (cols[0] == "STATE-DIFF" && cols.size() >= 2) {
      if (!have_init) throw std::runtime_error("trace has STATE-DIFF before INIT");
      apply_fields(cols[1]);
      states.push_back(current);
    }
  }
  return states;
}

Trajectory trajectory_from_trace(const Problem& problem, const std::string& trace_text) {
  Trajectory traj;
  std::istringstream in(trace_text);
  std::string line;
  State current(problem.table.size(), 0);
  bool have_init = false;
  std::vector<ActionInstance> pending_actions;
  auto apply_fields = [&](const std::string& text) {
    if (trim(text) == "-") return;
    for (const std::string& kv : split(text, ',')) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("bad trace state field: " + kv);
      int id = problem.table.index_of(trim(kv.substr(0, eq)));
      if (id < 0) throw std::runtime_error("unknown fluent in trace: " + kv);
      current[id] = std::stoll(kv.substr(eq + 1));
    }
  };
  while (std::getline(in, line)) {
    std::vector<std::string> cols = split(line, '\t');
    if (cols.empty()) continue;
    if (cols[0] == "INIT" && cols.size() >= 2) {
      apply_fields(cols[1]);
      traj.states.push_back(current);
      have_init = true;
    } else if (cols[0] == "ENABLE" && cols.size() >= 3) {
      pending_actions.push_back({cols[1], cols[2]});
    } else if (cols[0] == "STATE-DIFF" && cols.size() >= 2) {
      if (!have_init) throw std::runtime_error("trace has STATE-DIFF before INIT");
      apply_fields(cols[1]);
      traj.states.push_back(current);
      std::sort(pending_actions.begin(), pending_actions.end());
      traj.steps.push_back(std::move(pending_actions));
      pending_actions.clear();
    }
  }
  return traj;
}

}  // namespace baac
