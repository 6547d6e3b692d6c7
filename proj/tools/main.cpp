// baac: run, check and render multi-agent action theories.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "baac/engine.hpp"
#include "baac/parse.hpp"
#include "baac/render.hpp"
#include "baac/trace.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitGoalFailure = 1;
constexpr int kExitConfigError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct LoadedProblem {
  baac::RunConfig cfg;
  baac::Problem problem;
};

LoadedProblem load(const std::string& settings_path) {
  baac::RunConfig cfg = baac::parse_settings(slurp(settings_path));
  std::string base = std::filesystem::path(settings_path).parent_path().string();
  baac::Diagnostics diags;
  baac::Problem problem = baac::load_problem(cfg, base, diags);
  for (const auto& d : diags.items) {
    std::cerr << (d.severity == baac::Diagnostic::Severity::Error ? "error: "
                                                                  : "warning: ")
              << d.message << "\n";
  }
  if (!diags.ok()) throw std::runtime_error("problem validation failed");
  return {std::move(cfg), std::move(problem)};
}

int cmd_run(const std::string& settings_path, const std::string& trace_out,
            const std::string& fixture_out, std::optional<std::uint64_t> seed,
            std::optional<std::string> strategy, std::optional<std::string> mode,
            std::optional<bool> deterministic) {
  LoadedProblem l = load(settings_path);
  if (seed) l.cfg.seed = *seed;
  if (strategy) {
    if (*strategy == "random") l.cfg.strategy = baac::Strategy::Random;
    else if (*strategy == "max_subset") l.cfg.strategy = baac::Strategy::MaxSubset;
    else throw std::runtime_error("unknown strategy '" + *strategy + "'");
  }
  if (mode) {
    if (*mode == "supervisor") l.cfg.mode = baac::ConflictMode::Supervisor;
    else if (*mode == "negotiate") l.cfg.mode = baac::ConflictMode::Negotiate;
    else throw std::runtime_error("unknown mode '" + *mode + "'");
  }
  if (deterministic) l.cfg.deterministic = *deterministic;
  if (!trace_out.empty()) l.cfg.trace_path = trace_out;

  baac::RunResult r = baac::run(l.problem, l.cfg);
  if (!r.error.empty()) std::cerr << "error: " << r.error << "\n";

  if (!l.cfg.trace_path.empty()) {
    std::ofstream out(l.cfg.trace_path);
    if (!out.good()) {
      std::cerr << "error: cannot write trace to '" << l.cfg.trace_path << "'\n";
      return kExitConfigError;
    }
    out << r.trace;
  } else {
    std::cout << r.trace;
  }
  if (!fixture_out.empty() && r.exit_code != kExitConfigError) {
    std::ofstream out(fixture_out);
    if (!out.good()) {
      std::cerr << "error: cannot write fixture to '" << fixture_out << "'\n";
      return kExitConfigError;
    }
    out << baac::trajectory_to_fixture(l.problem, r.trajectory);
  }
  for (const auto& [agent, ok] : r.goal_verdicts)
    std::cerr << "goal " << agent << ": " << (ok ? "success" : "failure") << "\n";
  return r.exit_code;
}

int cmd_check(const std::string& settings_path, const std::string& fixture_path) {
  LoadedProblem l = load(settings_path);
  baac::Trajectory traj =
      baac::fixture_to_trajectory(l.problem, slurp(fixture_path));
  int n = static_cast<int>(traj.steps.size());
  baac::CheckReport report = baac::check_trajectory(l.problem, traj, n);
  if (report.valid()) {
    std::cout << "valid\n";
  } else {
    std::cout << report.to_string(l.problem);
  }
  for (const auto& [agent, ok] : report.agent_success)
    std::cout << "goal " << agent << ": " << (ok ? "success" : "failure") << "\n";
  return report.valid() ? kExitSuccess : kExitGoalFailure;
}

int cmd_render(const std::string& settings_path, const std::string& trace_path) {
  LoadedProblem l = load(settings_path);
  baac::RenderResult r =
      baac::render_trace(l.problem, slurp(trace_path), l.cfg.render);
  if (!r.warning.empty()) {
    std::cerr << "warning: " << r.warning << "\n";
    return kExitSuccess;
  }
  for (const auto& frame : r.frames) std::cout << frame << "\n";
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-agent action theory runner"};
  app.require_subcommand(1);

  std::string settings, trace_out, fixture_out, fixture_in, trace_in;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy, mode;
  std::optional<bool> deterministic;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a simulation");
  run_cmd->add_option("settings", settings, "settings file")->required();
  run_cmd->add_option("--trace-out", trace_out, "write the trace here (default: stdout)");
  run_cmd->add_option("--fixture-out", fixture_out, "also write the trajectory fixture");
  run_cmd->add_option("--seed", seed, "override the rng seed");
  run_cmd->add_option("--strategy", strategy, "random | max_subset");
  run_cmd->add_option("--mode", mode, "supervisor | negotiate");
  run_cmd->add_option("--deterministic", deterministic, "single-schedule execution");

  CLI::App* check_cmd = app.add_subcommand("check", "validate a trajectory fixture");
  check_cmd->add_option("settings", settings, "settings file")->required();
  check_cmd->add_option("fixture", fixture_in, "fixture file")->required();

  CLI::App* render_cmd = app.add_subcommand("render", "draw grid frames from a trace");
  render_cmd->add_option("settings", settings, "settings file")->required();
  render_cmd->add_option("trace", trace_in, "trace file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(settings, trace_out, fixture_out, seed, strategy, mode,
                     deterministic);
    if (check_cmd->parsed()) return cmd_check(settings, fixture_in);
    if (render_cmd->parsed()) return cmd_render(settings, trace_in);
  } catch (const baac::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
