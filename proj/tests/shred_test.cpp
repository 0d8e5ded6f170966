#include <gtest/gtest.h>

#include "slic/elimgen.hpp"
#include "slic/oracle.hpp"
#include "slic/parser.hpp"
#include "slic/shred.hpp"
#include "slic/typing_ci.hpp"
#include "support.hpp"

namespace {

using namespace slic;

StmtP body_of(const std::string& text) { return parse_or_throw(text).body; }

TEST(Shred, SkipGivesThreeSkips) {
  Shredded s = shred(Gamma{}, skip());
  for (int l = 0; l < 3; ++l) EXPECT_TRUE(equal(s[l], skip()));
}

TEST(Shred, ExtendedHmmStandardSlices) {
  Program p = support::load("hmm_g");
  Shredded s = shred(base_levels(p), p.body);
  EXPECT_TRUE(equal(s[0], skip()));
  EXPECT_TRUE(equal(s[1], body_of(R"(
      phi_ ~ beta(1, 1); theta ~ beta(1, 1); theta0 = theta[1];
      z1 ~ bernoulli(theta0); theta1 = theta[z1];
      z2 ~ bernoulli(theta1); theta2 = theta[z2];
      z3 ~ bernoulli(theta2);
      phi1 = phi_[z1]; phi2 = phi_[z2]; phi3 = phi_[z3];
      y1 ~ normal(phi1, 1); y2 ~ normal(phi2, 1); y3 ~ normal(phi3, 1);)")))
      << pretty(s[1]);
  EXPECT_TRUE(equal(s[2], body_of("theta3 = theta[z3]; genz ~ bernoulli(theta3);"))) << pretty(s[2]);
}

TEST(Shred, ExtendedHmmCiSlices) {
  Program p = support::load("hmm_g");
  Gamma base = base_levels(p);
  StmtP sm = shred(base, p.body)[1];
  TypingReport r = infer_ci(gamma_to_z(base, p.body, "z1"), sm);
  ASSERT_TRUE(r.ok);
  Shredded s = shred(r.resolved, sm);
  EXPECT_TRUE(equal(s[0], body_of("phi_ ~ beta(1, 1); theta ~ beta(1, 1); theta0 = theta[1];"))) << pretty(s[0]);
  EXPECT_TRUE(equal(s[1], body_of(R"(
      z1 ~ bernoulli(theta0); theta1 = theta[z1]; z2 ~ bernoulli(theta1);
      phi1 = phi_[z1]; y1 ~ normal(phi1, 1);)")))
      << pretty(s[1]);
  EXPECT_TRUE(equal(s[2], body_of(R"(
      theta2 = theta[z2]; z3 ~ bernoulli(theta2);
      phi2 = phi_[z2]; phi3 = phi_[z3];
      y2 ~ normal(phi2, 1); y3 ~ normal(phi3, 1);)")))
      << pretty(s[2]);
}

TEST(Shred, DataGuardSplitsAcrossSlices) {
  Program p = parse_or_throw("data real a; data real b; model real m; if (a > 0) { b = a; m ~ normal(b, 1); }");
  Shredded s = shred(p.gamma, p.body);
  EXPECT_TRUE(equal(s[0], body_of("if (a > 0) { b = a; }")));
  EXPECT_TRUE(equal(s[1], body_of("if (a > 0) { m ~ normal(b, 1); }")));
  EXPECT_TRUE(equal(s[2], skip()));
}

TEST(Shred, ModelGuardMergesLowerSlices) {
  Program p = parse_or_throw(
      "data real a; model real m; model real c; genquant real g;"
      "if (m > 0) { c = m; g ~ normal(c, 1); a ~ normal(m, 1); }");
  Shredded s = shred(p.gamma, p.body);
  EXPECT_TRUE(equal(s[0], skip()));
  EXPECT_TRUE(equal(s[1], body_of("if (m > 0) { c = m; a ~ normal(m, 1); }"))) << pretty(s[1]);
  EXPECT_TRUE(equal(s[2], body_of("if (m > 0) { g ~ normal(c, 1); }"))) << pretty(s[2]);
}

TEST(SingleLevel, Examples) {
  for (int l = 0; l < 3; ++l) EXPECT_TRUE(is_single_level(Gamma{}, l, skip()));
  Gamma g;
  g.add("x", BaseType::real(), Slot::of(Level::Data));
  g.add("y", BaseType::real(), Slot::of(Level::Model));
  StmtP s = seq(assign("x", int_c(1)), sample("y", "normal", {var("x"), int_c(1)}));
  EXPECT_FALSE(is_single_level(g, 0, s));
  EXPECT_FALSE(is_single_level(g, 1, s));
  EXPECT_TRUE(is_single_level(g, 1, sample("y", "normal", {var("x"), int_c(1)})));
  // A density over data only is not single-level at model.
  EXPECT_FALSE(is_single_level(g, 1, sample("x", "normal", {int_c(0), int_c(1)})));
}

TEST(ShredProperty, PreservesStateAndWeight) {
  for (const auto& name : support::corpus_names()) {
    Program p = support::load(name);
    Fixture fx = support::fixture(name);
    Gamma g = base_levels(p);
    Shredded s = shred(g, p.body);
    for (int l = 0; l < 3; ++l) EXPECT_TRUE(is_single_level(g, l, s[l])) << name << " slice " << l;
    std::mt19937_64 rng(29);
    for (int i = 0; i < 50; ++i) {
      State st = random_store(p.gamma, fx, rng);
      EvalResult a = eval_stmt(st, p.body);
      EvalResult b = eval_stmt(st, s.composed());
      EXPECT_LE(rel_err(a.weight, b.weight), 1e-12) << name;
      EXPECT_EQ(a.state, b.state) << name;
    }
  }
}

// Weight of a CI slice must not move when variables outside its cone change.
TEST(ShredProperty, CiSlicesDependOnlyOnTheirCone) {
  for (const char* name : {"hmm_d", "hmm_g", "prog_a", "sprinkler", "kmeans", "outliers", "causal"}) {
    Program p = support::load(name);
    Fixture fx = support::fixture(name);
    Gamma base = base_levels(p);
    StmtP sm = shred(base, p.body)[1];
    for (const auto& z : discrete_parameters(p)) {
      TypingReport r = infer_ci(gamma_to_z(base, p.body, z), sm);
      ASSERT_TRUE(r.ok) << name << " " << z;
      Shredded s = shred(r.resolved, sm);
      std::mt19937_64 rng(31);
      for (int i = 0; i < 20; ++i) {
        State st = random_store(base, fx, rng);
        State other = random_store(base, fx, rng);
        for (int l = 0; l < 3; ++l) {
          // Slice l1 sees only l1; l2 sees l1 and l2; l3 sees l1 and l3.
          State mixed = st;
          for (const auto& e : r.resolved.entries()) {
            int lev = e.slot.level;
            bool visible = lev == 0 || lev == l;
            if (!visible) mixed[e.name] = other.at(e.name);
          }
          double w1 = eval_stmt(st, s[l]).weight;
          double w2 = eval_stmt(mixed, s[l]).weight;
          EXPECT_LE(rel_err(w1, w2), 1e-12) << name << " " << z << " slice " << l;
        }
      }
    }
  }
}

}  // namespace
