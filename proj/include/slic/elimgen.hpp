#pragma once

#include <string>
#include <vector>

#include "slic/analysis.hpp"
#include "slic/ast.hpp"

namespace slic {

struct ElimPlan {
  std::vector<std::string> order;
};

// elim/gen as statements, φ as an expression; other nodes are rejected.
[[nodiscard]] StmtP desugar(const StmtP& elim_or_gen);
[[nodiscard]] ExprP desugar(const ExprP& phi_expr);
// Rewrites every derived form in s into the core language.
[[nodiscard]] StmtP desugar_all(const StmtP& s);

// st(S): factor, sample, elim and gen replaced by skip.
[[nodiscard]] StmtP store_of(const StmtP& s);

// Discrete (bounded int) model-level parameters in declaration order.
[[nodiscard]] std::vector<std::string> discrete_parameters(const Program& p);

// Γ →z Γ_M over a concrete base Γ. Genquant entries are dropped, z is l2,
// data and continuous parameters are l1, everything else is a placeholder.
[[nodiscard]] Gamma gamma_to_z(const Gamma& base, const StmtP& body, const std::string& z);

// l1 discrete model parameters of the resolved Γ_M, sorted by name.
[[nodiscard]] std::vector<Binder> neighbours(const Gamma& base, const Gamma& ci, const std::string& z);

// Smallest unused name f1, f2, … against Γ.
[[nodiscard]] std::string fresh_factor_name(const Gamma& gamma);

// One application of the elimination rule; the result is re-inferred.
[[nodiscard]] Program eliminate(const Program& p, const std::string& z);
// Empty order means every discrete model parameter in declaration order.
[[nodiscard]] Program transform_all(const Program& p, const ElimPlan& plan = {});

}  // namespace slic
