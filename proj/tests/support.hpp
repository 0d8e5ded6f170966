// Shared fixtures for the test binaries: corpus access, generated HMMs and
// random well-formed statements.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "slic/ast.hpp"
#include "slic/interp.hpp"
#include "slic/oracle.hpp"
#include "slic/parser.hpp"

namespace slic::support {

inline std::string corpus_path(const std::string& file) { return std::string(SLIC_CORPUS_DIR) + "/" + file; }
inline std::string golden_path(const std::string& file) { return std::string(SLIC_GOLDEN_DIR) + "/" + file; }

inline Program load(const std::string& name) { return parse_file(corpus_path(name + ".slic")); }
inline Fixture fixture(const std::string& name) { return load_fixture(corpus_path(name + ".json")); }

// Well-typed corpus programs.
inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{
      "predictive",     "prog_a",   "cross",  "cross_discrete", "chain_discrete", "hmm_d",   "hmm_e",
      "hmm_f",    "hmm_g",    "sprinkler", "sprinkler_discrete", "kmeans", "outliers", "causal"};
  return names;
}

// Programs whose parameters outside the fixture data are all bounded ints.
inline const std::vector<std::string>& discrete_corpus_names() {
  static const std::vector<std::string> names{"prog_a", "cross_discrete", "chain_discrete", "hmm_d",
                                              "sprinkler_discrete"};
  return names;
}

// First-order HMM over n binary hidden states with fixed tables. With
// `naive`, every state is summed out by one nest of elim blocks.
inline std::string hmm_source(int n, bool naive) {
  std::string s = "data real[2] theta = [0.3, 0.75];\ndata real[2] phi_ = [-1.0, 2.0];\n";
  auto z = [](int i) { return "z" + std::to_string(i); };
  auto y = [](int i) { return "y" + std::to_string(i); };
  std::string body;
  for (int i = 1; i <= n; ++i) {
    std::string prev = i == 1 ? "theta[1]" : "theta[" + z(i - 1) + "]";
    if (naive) {
      body += z(i) + " ~ bernoulli(" + prev + ");\n";
      body += y(i) + " ~ normal(phi_[" + z(i) + "], 1);\n";
      s += "data real " + y(i) + ";\n";
    } else {
      s += "int<2> " + z(i) + " ~ bernoulli(" + prev + ");\n";
      s += "data real " + y(i) + " ~ normal(phi_[" + z(i) + "], 1);\n";
    }
  }
  if (!naive) return s;
  std::string open, close;
  for (int i = n; i >= 1; --i) {
    open += "elim(int<2> " + z(i) + ") {\n";
    close += "}\n";
  }
  return s + open + body + close;
}

inline State hmm_data(int n) {
  State s;
  for (int i = 1; i <= n; ++i) s["y" + std::to_string(i)] = Value::of_real(0.7 * ((i * 5) % 3) - 0.4);
  return s;
}

// Random statements over a fixed environment; used by structural and
// round-trip properties.
class RandomAst {
 public:
  explicit RandomAst(std::uint64_t seed) : rng_(seed) {}

  static Gamma gamma() {
    Gamma g;
    g.add("a", BaseType::real(), Slot::of(Level::Data));
    g.add("b", BaseType::real(), Slot::placeholder());
    g.add("n", BaseType::integer(3), Slot::of(Level::Model));
    g.add("v", BaseType::array(BaseType::real(), 3), Slot::placeholder());
    g.add("q", BaseType::real(), Slot::of(Level::Genquant));
    return g;
  }

  ExprP expr(int depth, const std::vector<std::string>& binders) {
    int pick = pick_in(0, depth <= 0 ? 3 : 8);
    switch (pick) {
      case 0: return real_c(static_cast<double>(pick_in(0, 40)) / 8.0);
      case 1: return int_c(pick_in(1, 3));
      case 2:
      case 3: return scalar_var(binders);
      case 4: return call(ops_[pick_in(0, 2)], {expr(depth - 1, binders), expr(depth - 1, binders)});
      case 5: return index(var("v"), int_c(pick_in(1, 3)));
      case 6: return call("exp", {expr(depth - 1, binders)});
      case 7: {
        std::string i = fresh_binder(binders);
        auto inner = binders;
        inner.push_back(i);
        return call("sum", {comp(expr(depth - 1, inner), i, int_c(1), int_c(pick_in(1, 3)))});
      }
      default: return target(stmt(depth - 1, binders, true));
    }
  }

  StmtP stmt(int depth, const std::vector<std::string>& binders, bool in_target = false) {
    int pick = pick_in(0, depth <= 0 ? 3 : 7);
    switch (pick) {
      case 0: return assign(scalar_target(), expr(depth - 1, binders));
      case 1: return sample(scalar_target(), "normal", {expr(depth - 1, binders), real_c(1.0)});
      case 2: return factor(call("exp", {expr(depth - 1, binders)}));
      case 3:
        return in_target ? skip()
                         : assign(LValue{"v", {int_c(pick_in(1, 3))}, {}}, expr(depth - 1, binders));
      case 4: return seq(stmt(depth - 1, binders, in_target), stmt(depth - 1, binders, in_target));
      case 5:
        return if_else(expr(depth - 1, binders), stmt(depth - 1, binders, in_target),
                       stmt(depth - 1, binders, in_target));
      default: {
        std::string i = fresh_binder(binders);
        auto inner = binders;
        inner.push_back(i);
        return for_loop(i, int_c(1), int_c(pick_in(1, 3)), stmt(depth - 1, inner, in_target));
      }
    }
  }

 private:
  int pick_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ExprP scalar_var(const std::vector<std::string>& binders) {
    static const std::vector<std::string> globals{"a", "b", "n", "q"};
    if (!binders.empty() && pick_in(0, 2) == 0) return var(binders[static_cast<std::size_t>(pick_in(0, static_cast<int>(binders.size()) - 1))]);
    return var(globals[static_cast<std::size_t>(pick_in(0, 3))]);
  }

  std::string scalar_target() { return pick_in(0, 1) ? "b" : "q"; }

  std::string fresh_binder(const std::vector<std::string>& binders) {
    return "i" + std::to_string(binders.size() + 1);
  }

  std::mt19937_64 rng_;
  const std::vector<std::string> ops_{"+", "-", "*"};
};

}  // namespace slic::support
