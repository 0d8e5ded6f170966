#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slic/ast.hpp"

namespace slic {

struct Value {
  enum class Kind { Real, Int, Array };
  Kind kind = Kind::Int;
  double real = 0.0;
  std::int64_t ival = 0;
  std::vector<Value> elems;

  static Value of_real(double v);
  static Value of_int(std::int64_t v);
  static Value of_array(std::vector<Value> elems);

  [[nodiscard]] bool is_real() const { return kind == Kind::Real; }
  [[nodiscard]] bool is_int() const { return kind == Kind::Int; }
  [[nodiscard]] bool is_array() const { return kind == Kind::Array; }
  // Numeric view of a scalar; throws EvalError on arrays.
  [[nodiscard]] double num() const;
  [[nodiscard]] std::string str() const;
};

bool operator==(const Value& a, const Value& b);

using State = std::map<std::string, Value>;

class EvalError : public SlicError {
 public:
  using SlicError::SlicError;
};

struct EvalCounters {
  std::uint64_t pdf_evals = 0;
  std::uint64_t factor_evals = 0;
};

struct EvalResult {
  State state;
  double weight = 1.0;
};

[[nodiscard]] Value eval_expr(const State& s, const ExprP& e, EvalCounters* counters = nullptr);
[[nodiscard]] EvalResult eval_stmt(const State& s, const StmtP& st, EvalCounters* counters = nullptr);

// Runs the body on sigma ∪ x. Keys present in both take the value from x.
[[nodiscard]] EvalResult run_density(const Program& p, const State& sigma, const State& x);
[[nodiscard]] double density(const Program& p, const State& sigma, const State& x);
[[nodiscard]] std::pair<double, EvalCounters> density_counted(const Program& p, const State& store);

// Density of a named distribution at value v. Invalid parameters throw
// EvalError; values outside the support give 0.
[[nodiscard]] double pdf(const std::string& dist, const Value& v, const std::vector<Value>& args);
[[nodiscard]] bool is_distribution(const std::string& name);

// s ⊨ Γ restricted to the names present in s. Ints conform to real slots.
[[nodiscard]] bool conforms(const Value& v, const BaseType& t);
[[nodiscard]] bool conforms(const State& s, const Gamma& gamma);

// Values equal up to relative tolerance on reals.
[[nodiscard]] bool approx_equal(const Value& a, const Value& b, double rel_tol);
[[nodiscard]] double rel_err(double a, double b);

}  // namespace slic
