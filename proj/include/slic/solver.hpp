#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slic/ast.hpp"

namespace slic {

// A constraint over a few integer-valued variables. `pred` reads only the
// entries of `vars` and is evaluated once all of them are assigned.
struct Constraint {
  std::vector<int> vars;
  std::function<bool(const std::vector<int>&)> pred;
  std::string rule;
  SourceLoc loc;
  std::string message;
};

struct SolverProblem {
  // domain[v] lists allowed values; cost[v][value] the price of choosing it.
  std::vector<std::vector<int>> domain;
  std::vector<std::vector<double>> cost;
  std::vector<Constraint> constraints;
};

struct SolverResult {
  bool found = false;
  std::vector<int> values;
  double cost = 0.0;
  std::uint64_t nodes = 0;
};

// Minimum-cost assignment. Variables are branched in index order, values by
// increasing cost then increasing value, so ties resolve deterministically.
[[nodiscard]] SolverResult solve(const SolverProblem& p);

// Indices of a small subset of constraints that is still unsatisfiable
// (deletion filter; best effort with a bounded number of re-solves).
[[nodiscard]] std::vector<int> conflict_set(const SolverProblem& p, int max_solves = 400);

// Exhaustive enumeration for cross-checking; throws if the space exceeds cap.
[[nodiscard]] SolverResult solve_exhaustive(const SolverProblem& p, std::uint64_t cap = 1u << 22);

}  // namespace slic
