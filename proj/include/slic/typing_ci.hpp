#pragma once

#include <array>
#include <string>

#include "slic/analysis.hpp"
#include "slic/ast.hpp"
#include "slic/typing.hpp"

namespace slic {

// x2 ⫫ x3 | x1 over the parameters (never-assigned Γ entries). The
// deterministic triple is informational: it records where a solver placed
// assigned variables and is ignored as input.
struct CIPartition {
  NameSet x1, x2, x3;
  std::array<NameSet, 3> deterministic;
};

struct CIQueryResult {
  bool derivable = false;
  Gamma witness;
  std::string failing_rule;
  std::vector<Violation> violations;
};

// Cost of l1, l2, l3 (indexed by CILevel): l3 ≺ l1 ≺ l2.
inline constexpr std::array<double, 3> kCICost{1.0, 2.0, 0.0};

[[nodiscard]] TypingReport check_ci(const Gamma& gamma, const StmtP& s);

// Placeholders range over all three CI levels.
[[nodiscard]] TypingReport infer_ci(const Gamma& partial, const StmtP& s);
[[nodiscard]] LevelSystem ci_system(const Gamma& partial, const StmtP& s);

// Names of Γ entries that the body never assigns.
[[nodiscard]] NameSet parameters(const Program& p);
// Γ with concrete base levels, running inference when placeholders remain.
[[nodiscard]] Gamma base_levels(const Program& p);

[[nodiscard]] CIQueryResult ci_query(const Program& p, const CIPartition& part);
[[nodiscard]] CIPartition markov_blanket(const Program& p, const std::string& z);

}  // namespace slic
