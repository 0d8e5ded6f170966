#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "slic/elimgen.hpp"
#include "slic/parser.hpp"
#include "slic/stan.hpp"
#include "support.hpp"

namespace {

using namespace slic;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Stan, PredictiveGolden) {
  std::string got = emit_stan(support::load("predictive"));
  EXPECT_EQ(normalize_whitespace(got), normalize_whitespace(read_file(support::golden_path("predictive.stan"))));
}

TEST(Stan, EmptyProgramHasAllBlocks) {
  std::string got = normalize_whitespace(emit_stan(parse_or_throw("skip;")));
  for (const char* block : {"data{}", "parameters{}", "model{}", "generated quantities{}"})
    EXPECT_NE(got.find(block), std::string::npos) << block << " in " << got;
}

TEST(Stan, TypeSpelling) {
  Program p = parse_or_throw("data int<3> k; data real[2][4] m; data int n;");
  EXPECT_EQ(stan_type(p.gamma.at("k").type), "int<lower=1,upper=3>");
  EXPECT_EQ(stan_type(p.gamma.at("m").type), "array[2, 4] real");
  EXPECT_EQ(stan_type(p.gamma.at("n").type), "int");
}

TEST(Stan, GeneratedQuantitiesRecoverStatesInReverse) {
  std::string got = emit_stan(parse_file(support::golden_path("hmm_g3.slic")));
  auto gq = got.find("generated quantities");
  ASSERT_NE(gq, std::string::npos);
  auto p3 = got.find("z3 = categorical_rng", gq);
  auto p2 = got.find("z2 = categorical_rng", gq);
  auto p1 = got.find("z1 = categorical_rng", gq);
  ASSERT_NE(p3, std::string::npos);
  EXPECT_LT(p3, p2);
  EXPECT_LT(p2, p1);
  EXPECT_NE(got.find("target += log(f3);"), std::string::npos);
}

TEST(Stan, DiscreteParametersNeverInParametersBlock) {
  for (const char* name : {"hmm_g", "sprinkler", "kmeans", "outliers", "causal"}) {
    std::string got = emit_stan(transform_all(support::load(name)));
    auto a = got.find("parameters {"), b = got.find("}", a);
    ASSERT_NE(a, std::string::npos) << name;
    EXPECT_EQ(got.substr(a, b - a).find("int"), std::string::npos) << name;
  }
}

TEST(Stan, Deterministic) {
  Program t = transform_all(support::load("sprinkler"));
  std::string a = emit_stan(t);
  EXPECT_EQ(a, emit_stan(parse_or_throw(pretty(t))));
}

TEST(Stan, RefusesResidualDiscreteParameter) {
  EXPECT_THROW((void)emit_stan(support::load("hmm_d")), SlicError);
}

}  // namespace
