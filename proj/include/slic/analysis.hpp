#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "slic/ast.hpp"

namespace slic {

using NameSet = std::set<std::string>;

[[nodiscard]] NameSet free_vars(const StmtP& s);
[[nodiscard]] NameSet free_vars(const ExprP& e);

// W(S), R(S), W~(S) as syntactic sets; loop, comprehension and derived-form
// binders are removed.
[[nodiscard]] NameSet writes(const StmtP& s);
[[nodiscard]] NameSet reads(const StmtP& s);
[[nodiscard]] NameSet reads(const ExprP& e);
[[nodiscard]] NameSet samples(const StmtP& s);

struct AnalysisSets {
  NameSet W, R, Wtilde;
  // Keyed by level code (Level or CILevel cast to int).
  std::map<int, NameSet> R_at, W_at, Wtilde_at;
};

// Requires every free variable bound in gamma with a concrete slot.
[[nodiscard]] AnalysisSets analysis_sets(const Gamma& gamma, const StmtP& s);

// An atomic density or store effect of a statement, with the global variables
// it depends on. Reads of binders and of variables assigned locally inside
// target/derived-form bodies are resolved to the globals they came from.
struct Leaf {
  enum class Kind { Assign, Sample, Factor, Elim, Gen };
  Kind kind = Kind::Assign;
  std::string var;        // assigned, sampled or generated variable
  NameSet index_deps;     // L-value indices
  NameSet value_deps;     // rhs, distribution arguments, factor argument, body
  NameSet ctx_deps;       // enclosing if guards and loop bounds
  const Stmt* stmt = nullptr;

  [[nodiscard]] NameSet reads() const;
  [[nodiscard]] NameSet all_deps() const;  // reads() plus var for samples/gens
};

struct LeafGraph {
  std::vector<Leaf> leaves;
  // (i, j): leaf i is sequenced before leaf j by some Seq node.
  std::vector<std::pair<int, int>> seq_pairs;
  // Dependency sets of guards and loop bounds that must type at a common level.
  std::vector<std::pair<NameSet, const Stmt*>> guards;
};

// Throws SlicError on unbound variables.
[[nodiscard]] LeafGraph extract_leaves(const Gamma& gamma, const StmtP& s);

// Global variables an expression depends on, with binder env empty.
[[nodiscard]] NameSet expr_deps(const Gamma& gamma, const ExprP& e);

// Dependencies of a body evaluated for its density with locals scoped inside.
[[nodiscard]] NameSet body_deps(const Gamma& gamma, const StmtP& body,
                                const std::vector<std::string>& binders);

}  // namespace slic
