#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slic/ast.hpp"
#include "slic/interp.hpp"
#include "slic/typing_ci.hpp"

namespace slic {

// Observed data plus representative values for continuous parameters.
struct Fixture {
  State data;
  State example;
};

[[nodiscard]] Value value_from_json(const std::string& json_text);
[[nodiscard]] State state_from_json(const std::string& json_text);
[[nodiscard]] std::string state_to_json(const State& s, int indent = 2);
[[nodiscard]] State load_state(const std::string& path);
// {"data": {...}, "example": {...}}; a missing file yields an empty fixture.
[[nodiscard]] Fixture load_fixture(const std::string& path);

// Zero of a type: 0.0, the int 1, or arrays of those with the declared size.
[[nodiscard]] Value default_value(const BaseType& t);

// Fixture data plus continuous parameters drawn around their example values:
// uniform(0.02, 0.98) when the example lies in (0, 1), example + N(0, 1) otherwise.
[[nodiscard]] State draw_context(const Program& p, const Fixture& fx, std::mt19937_64& rng);

// A random store conforming to Γ: bounded ints uniform on their support,
// reals uniform on (0.05, 0.95), fixture data where present.
[[nodiscard]] State random_store(const Gamma& gamma, const Fixture& fx, std::mt19937_64& rng);

struct Axis {
  std::string name;
  int K = 0;
};

struct JointTable {
  std::vector<Axis> axes;
  std::vector<double> entries;  // row-major, first axis slowest
  State context;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
  [[nodiscard]] std::vector<int> assignment(std::size_t flat) const;  // values in 1..K
  [[nodiscard]] int axis_index(const std::string& name) const;        // -1 when absent
  [[nodiscard]] double total() const;
  // Sums out every axis not listed, keeping the listed order.
  [[nodiscard]] JointTable marginal(const std::vector<std::string>& keep) const;
};

// Parameters not fixed by the context, in Γ order. Throws unless each is a
// bounded int.
[[nodiscard]] std::vector<Axis> enumerable_axes(const Program& p, const State& context);

[[nodiscard]] JointTable enumerate_joint(const Program& p, const State& context, std::uint64_t cap = 1u << 20);

struct PreservationReport {
  double max_rel_err = 0.0;
  std::uint64_t num_points = 0;
  bool pass = false;
  double tolerance = 0.0;
  State worst_point;

  [[nodiscard]] std::string to_json() const;
  [[nodiscard]] std::string to_text() const;
};

// Compares the joint tables of p1 and p2 over `trials` context draws. Axes
// present in only one table are summed out first.
[[nodiscard]] PreservationReport check_preservation(const Program& p1, const Program& p2, const Fixture& fx,
                                                    int trials, double tol, std::uint64_t seed);

struct CITableReport {
  bool holds = true;
  bool vacuous = false;  // table sums to zero
  double max_abs_err = 0.0;
};

[[nodiscard]] CITableReport check_ci_table_report(const JointTable& t, const CIPartition& part, double tol);
[[nodiscard]] bool check_ci_table(const JointTable& t, const CIPartition& part, double tol);

// Counters of one density evaluation at context ∪ {every axis = 1}.
[[nodiscard]] EvalCounters measure_cost(const Program& p, const State& context);

}  // namespace slic
