#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "slic/interp.hpp"
#include "slic/oracle.hpp"
#include "slic/parser.hpp"
#include "support.hpp"

namespace {

using namespace slic;

double normal_pdf(double x, double mu, double sigma) {
  const double pi = std::acos(-1.0);
  double u = (x - mu) / sigma;
  return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * pi));
}

double bern_pmf(int z, double p) { return z == 2 ? p : z == 1 ? 1.0 - p : 0.0; }

State scalars(std::initializer_list<std::pair<const char*, double>> kv) {
  State s;
  for (const auto& [k, v] : kv) s[k] = Value::of_real(v);
  return s;
}

TEST(EvalExpr, TargetMatchesClosedForm) {
  ExprP e = target(seq({sample("x", "normal", {int_c(0), int_c(1)}),
                        assign("y", call("*", {int_c(2), var("x")})),
                        sample("z", "normal", {var("y"), int_c(1)})}));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.5);
  for (int i = 0; i < 100; ++i) {
    double x = n(rng), z = n(rng);
    State s = scalars({{"x", x}, {"y", 0.0}, {"z", z}});
    double got = eval_expr(s, e).num();
    EXPECT_NEAR(got / (normal_pdf(x, 0, 1) * normal_pdf(z, 2 * x, 1)), 1.0, 1e-12);
  }
}

TEST(EvalExpr, ComprehensionUnrolls) {
  Value v = eval_expr({}, comp(call("*", {var("i"), var("i")}), "i", int_c(1), int_c(3)));
  EXPECT_EQ(v, Value::of_array({Value::of_int(1), Value::of_int(4), Value::of_int(9)}));
}

TEST(EvalExpr, TargetOfSkipIsOne) { EXPECT_EQ(eval_expr({}, target(skip())).num(), 1.0); }

TEST(EvalExpr, Errors) {
  EXPECT_THROW((void)eval_expr({}, var("nope")), EvalError);
  State s;
  s["v"] = Value::of_array({Value::of_real(1.0)});
  EXPECT_THROW((void)eval_expr(s, index(var("v"), int_c(2))), EvalError);
  EXPECT_THROW((void)eval_expr({}, call("exp", {int_c(1), int_c(2)})), EvalError);
}

TEST(EvalStmt, SkipKeepsStateWithUnitWeight) {
  State s = scalars({{"a", 1.5}});
  EvalResult r = eval_stmt(s, skip());
  EXPECT_EQ(r.state, s);
  EXPECT_EQ(r.weight, 1.0);
}

TEST(EvalStmt, StandardNormalAtZero) {
  EvalResult r = eval_stmt(scalars({{"x", 0.0}}), sample("x", "normal", {int_c(0), int_c(1)}));
  EXPECT_NEAR(r.weight, 1.0 / std::sqrt(2.0 * std::acos(-1.0)), 1e-15);
  EXPECT_NEAR(r.weight, 0.3989422804, 1e-10);
}

TEST(EvalStmt, BernoulliSupportConvention) {
  for (int z : {1, 2}) {
    State s{{"z", Value::of_int(z)}};
    EXPECT_DOUBLE_EQ(eval_stmt(s, sample("z", "bern", {real_c(0.3)})).weight, bern_pmf(z, 0.3));
    EXPECT_DOUBLE_EQ(eval_stmt(s, sample("z", "bernoulli", {real_c(0.3)})).weight, bern_pmf(z, 0.3));
  }
  State out{{"z", Value::of_int(0)}};
  EXPECT_EQ(eval_stmt(out, sample("z", "bern", {real_c(0.3)})).weight, 0.0);
}

TEST(EvalStmt, SampleDoesNotBind) {
  State s = scalars({{"x", 0.25}});
  EXPECT_EQ(eval_stmt(s, sample("x", "normal", {int_c(0), int_c(1)})).state, s);
}

TEST(EvalStmt, NestedArrayUpdate) {
  State s;
  s["m"] = Value::of_array({Value::of_array({Value::of_real(0), Value::of_real(0)}),
                            Value::of_array({Value::of_real(0), Value::of_real(0)})});
  EvalResult r = eval_stmt(s, assign(LValue{"m", {int_c(2), int_c(1)}, {}}, real_c(5.0)));
  EXPECT_EQ(r.state.at("m").elems[1].elems[0].num(), 5.0);
  EXPECT_EQ(r.state.at("m").elems[0].elems[0].num(), 0.0);
}

TEST(Pdf, CategoricalNormalisesWeights) {
  std::vector<Value> w{Value::of_array({Value::of_real(1.0), Value::of_real(3.0)})};
  EXPECT_DOUBLE_EQ(pdf("categorical", Value::of_int(2), w), 0.75);
  EXPECT_EQ(pdf("categorical", Value::of_int(3), w), 0.0);
}

TEST(Pdf, BetaClosedForm) {
  // beta(2, 3) has density 12 x (1 - x)^2.
  EXPECT_NEAR(pdf("beta", Value::of_real(0.4), {Value::of_real(2), Value::of_real(3)}), 12 * 0.4 * 0.36, 1e-12);
}

TEST(Density, ProgramAFactorises) {
  Program p = support::load("prog_a");
  const double theta0 = 0.5;
  auto foo = [](double a, int z) { return (a + z) / 4.0; };
  for (int z1 : {1, 2})
    for (int z2 : {1, 2})
      for (int y1 : {1, 2})
        for (int y2 : {1, 2}) {
          State x{{"theta0", Value::of_real(theta0)}, {"z1", Value::of_int(z1)}, {"z2", Value::of_int(z2)},
                  {"y1", Value::of_int(y1)},         {"y2", Value::of_int(y2)}};
          State sigma{{"theta1", Value::of_real(0)}, {"phi1", Value::of_real(0)}, {"phi2", Value::of_real(0)}};
          double expect = bern_pmf(z1, theta0) * bern_pmf(y1, foo(1, z1)) * bern_pmf(z2, foo(theta0, z1)) *
                          bern_pmf(y2, foo(1, z2));
          EXPECT_NEAR(density(p, sigma, x), expect, 1e-15);
        }
}

TEST(Density, EmptyBodyIsOne) {
  Program p = parse_or_throw("real a; skip;");
  EXPECT_EQ(density(p, {}, {{"a", Value::of_real(3.0)}}), 1.0);
}

TEST(Density, SequentialCompositionLaw) {
  for (const char* name : {"hmm_g", "causal", "kmeans"}) {
    Program p = support::load(name);
    Fixture fx = support::fixture(name);
    auto parts = flatten(p.body);
    StmtP s1 = parts.front();
    StmtP s2 = seq(std::vector<StmtP>(parts.begin() + 1, parts.end()));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      State s = random_store(p.gamma, fx, rng);
      EvalResult whole = eval_stmt(s, p.body);
      EvalResult first = eval_stmt(s, s1);
      EvalResult second = eval_stmt(first.state, s2);
      EXPECT_LE(rel_err(whole.weight, first.weight * second.weight), 1e-12) << name;
      EXPECT_EQ(whole.state, second.state) << name;
    }
  }
}

TEST(Counters, SingleSample) {
  Program p = parse_or_throw("real x ~ normal(0, 1);");
  auto [w, c] = density_counted(p, {{"x", Value::of_real(0.0)}});
  EXPECT_GT(w, 0.0);
  EXPECT_EQ(c.pdf_evals, 1u);
  EXPECT_EQ(c.factor_evals, 0u);
}

TEST(Counters, NaiveMarginalisationCount) {
  Fixture fx = support::fixture("hmm_e");
  State store = fx.data;
  auto [we, ce] = density_counted(support::load("hmm_e"), store);
  // 2^3 inner bodies with 6 density terms each.
  EXPECT_EQ(ce.pdf_evals, 48u);
  auto [wf, cf] = density_counted(support::load("hmm_f"), store);
  EXPECT_LT(cf.pdf_evals, ce.pdf_evals);
  EXPECT_LE(rel_err(we, wf), 1e-12);
}

TEST(Properties, DeterministicAndConforming) {
  for (const auto& name : support::corpus_names()) {
    Program p = support::load(name);
    Fixture fx = support::fixture(name);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
      State s = random_store(p.gamma, fx, rng);
      EvalResult a = eval_stmt(s, p.body);
      EvalResult b = eval_stmt(s, p.body);
      EXPECT_EQ(a.state, b.state) << name;
      EXPECT_EQ(std::memcmp(&a.weight, &b.weight, sizeof(double)), 0) << name;
      EXPECT_GE(a.weight, 0.0) << name;
      EXPECT_TRUE(conforms(a.state, p.gamma)) << name;
    }
  }
}

}  // namespace
