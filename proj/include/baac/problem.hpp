#ifndef BAAC_PROBLEM_HPP
#define BAAC_PROBLEM_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "baac/ast.hpp"

namespace baac {

struct FluentInfo {
  std::string name;
  std::vector<Value> domain;  // sorted, distinct

  Value min() const { return domain.front(); }
  bool contains(Value v) const;
};

class FluentTable {
 public:
  int add(const std::string& name, std::vector<Value> domain);
  int index_of(const std::string& name) const;  // -1 if absent
  const FluentInfo& info(int id) const { return fluents_[id]; }
  int size() const { return static_cast<int>(fluents_.size()); }

 private:
  std::vector<FluentInfo> fluents_;
  std::unordered_map<std::string, int> index_;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  bool ok() const;
  void error(std::string msg);
  void warning(std::string msg);
  std::string summary() const;
};

// The merged multi-agent planning problem: theories plus the shared
// fluent table. Fluent references in every theory are resolved in place
// to table indices.
struct Problem {
  std::vector<AgentTheory> theories;
  FluentTable table;

  static Problem build(std::vector<AgentTheory> theories, Diagnostics& diags);

  const AgentTheory* theory(std::string_view agent) const;
  std::vector<int> agent_fluents(const AgentTheory& t) const;  // table ids
};

// Cross-theory validation: domain mismatches, syntactically contradictory
// initial literals, requests targeting agents that are not part of the
// problem.
Diagnostics validate_problem(const std::vector<AgentTheory>& theories);

// Collects the timeless fluent ids occurring in the constraint
// (descending into rei).
void timeless_fluents(const Constraint& c, std::vector<int>& out);
std::vector<int> timeless_fluents(const Constraint& c);

// Maximum lookback depth |t| over all annotations in the constraint.
int lookback_depth(const Constraint& c);

}  // namespace baac

#endif
