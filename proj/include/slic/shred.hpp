#pragma once

#include <array>

#include "slic/ast.hpp"
#include "slic/typing.hpp"

namespace slic {

// Three single-level slices keyed by level code of the active lattice
// (data, model, genquant or l1, l2, l3).
struct Shredded {
  std::array<StmtP, 3> slices;

  [[nodiscard]] const StmtP& operator[](int level) const { return slices[static_cast<std::size_t>(level)]; }
  // Right-nested sequence of the three slices with skips dropped.
  [[nodiscard]] StmtP composed() const;
};

// Lattice of a concrete Γ: CI when any slot carries a CI level.
[[nodiscard]] Lattice lattice_of(const Gamma& gamma);

// Γ must be concrete. Throws SlicError on statements whose level has no join.
[[nodiscard]] Shredded shred(const Gamma& gamma, const StmtP& s);

[[nodiscard]] bool is_single_level(const Gamma& gamma, int level, const StmtP& s);

}  // namespace slic
