#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slic/analysis.hpp"
#include "slic/ast.hpp"
#include "slic/solver.hpp"

namespace slic {

enum class Lattice { Base, CI };

[[nodiscard]] bool lat_leq(Lattice lat, int a, int b);
[[nodiscard]] bool lat_lt(Lattice lat, int a, int b);
[[nodiscard]] std::optional<int> lat_lub(Lattice lat, int a, int b);
[[nodiscard]] int lat_bottom(Lattice lat);
[[nodiscard]] Slot lat_slot(Lattice lat, int level);
[[nodiscard]] std::string lat_name(Lattice lat, int level);

struct Violation {
  std::string rule;
  SourceLoc loc;
  std::string message;
};

struct TypingReport {
  bool ok = false;
  Gamma resolved;
  std::vector<Violation> violations;
  double cost = 0.0;
};

// Level of every Γ entry in `names` joined in the lattice; nullopt when the
// join does not exist. Γ slots must be concrete.
[[nodiscard]] std::optional<int> join_levels(const Gamma& gamma, const NameSet& names, Lattice lat);

// Read level of a leaf (used by the shreddable condition) and the level it
// is shredded at.
[[nodiscard]] std::optional<int> leaf_read_level(const Gamma& gamma, const Leaf& leaf, Lattice lat);
[[nodiscard]] std::optional<int> leaf_shred_level(const Gamma& gamma, const Leaf& leaf, Lattice lat);

// Constraint system of Γ ⊢ S : level (or Γ ⊢2 S : level) over the level of
// every Γ entry, indexed by Γ position. Base-type and binder errors are
// returned separately since no level choice can fix them.
struct LevelSystem {
  SolverProblem problem;
  std::vector<Violation> static_violations;
};

using DomainPolicy = std::function<std::vector<int>(const GammaEntry&)>;

[[nodiscard]] LevelSystem build_level_system(const Gamma& gamma, const StmtP& s, Lattice lat, int stmt_level,
                                             const DomainPolicy& domain, const std::array<double, 3>& cost);

// Solve a level system and report: resolved Γ on success, or the violations
// of a small conflicting subset on failure.
[[nodiscard]] TypingReport solve_levels(const Gamma& gamma, const LevelSystem& sys, Lattice lat);

// Evaluate every constraint against the concrete levels of Γ.
[[nodiscard]] TypingReport check_levels(const Gamma& gamma, const LevelSystem& sys);

// Base types only (levels ignored). Throws SlicError with the offending rule.
[[nodiscard]] BaseType type_of(const Gamma& gamma, const ExprP& e);
[[nodiscard]] std::vector<Violation> check_types(const Gamma& gamma, const StmtP& s);

// ---------------------------------------------------------------- ⊢

struct InferOptions {
  // Cost of data, model, genquant (indexed by Level).
  std::array<double, 3> cost{0.0, 2.0, 1.0};
};

[[nodiscard]] std::pair<BaseType, Level> check_expr(const Gamma& gamma, const ExprP& e);
// Throws SlicError when e cannot be typed at `level`.
[[nodiscard]] BaseType check_expr_at(const Gamma& gamma, const ExprP& e, Level level);
[[nodiscard]] TypingReport check_stmt(const Gamma& gamma, const StmtP& s, Level level);
[[nodiscard]] bool shreddable(const Gamma& gamma, const StmtP& s1, const StmtP& s2);
[[nodiscard]] bool generative(const Gamma& gamma, const StmtP& s1, const StmtP& s2);
[[nodiscard]] TypingReport infer_levels(const Program& p, const InferOptions& opts = {});

// Default placeholder domains: parameters (never assigned) are model or
// genquant, assigned variables range over all three levels.
[[nodiscard]] DomainPolicy base_domains(const StmtP& s);

}  // namespace slic
