#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace causalid;

namespace {

ExactDistribution xor_table() {
  ExactDistribution d({"X", "Y"}, {{0, 1}, {0, 1}});
  d[0] = Rational(9, 20);
  d[1] = Rational(1, 20);
  d[2] = Rational(1, 20);
  d[3] = Rational(9, 20);
  return d;
}

}  // namespace

TEST(Evaluate, MarginalAndConditional) {
  auto d = xor_table();
  EXPECT_EQ(evaluate(parse_expr("P(Y)"), d, {{"Y", 1}}), Rational(1, 2));
  EXPECT_EQ(evaluate(parse_expr("P(Y|X)"), d, {{"X", 1}, {"Y", 1}}), Rational(9, 10));
}

TEST(Evaluate, AdjustmentOverIndependentVariable) {
  // Z independent of (X, Y): the adjustment formula collapses to P(y|x)
  std::mt19937_64 rng(3);
  auto xy = random_positive_table(binary_domains({"X", "Y"}), {"X", "Y"}, rng);
  Distribution<double> d({"X", "Y", "Z"}, {{0, 1}, {0, 1}, {0, 1}});
  for (std::size_t c = 0; c < d.size(); ++c) {
    auto idx = d.indices(c);
    d[c] = xy[xy.cell({idx[0], idx[1]})] * (idx[2] ? 0.3 : 0.7);
  }
  auto adj = parse_expr("sum_{Z} (P(Y|X,Z)*P(Z))");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      EXPECT_NEAR(evaluate(adj, d, {{"X", x}, {"Y", y}}),
                  evaluate(parse_expr("P(Y|X)"), d, {{"X", x}, {"Y", y}}), 1e-12);
}

TEST(Evaluate, Errors) {
  ExactDistribution d({"X", "Y"}, {{0, 1}, {0, 1}});
  d[0] = Rational(1, 2);
  d[1] = Rational(1, 2);
  EXPECT_THROW(evaluate(parse_expr("P(Y|X)"), d, {{"X", 1}, {"Y", 1}}), EvaluationError);
  EXPECT_THROW(evaluate(parse_expr("P(Y|X)"), d, {{"Y", 1}}), MissingBinding);
  EXPECT_THROW(evaluate(parse_expr("P(Q)"), d, {{"Q", 1}}), UnknownVariable);
  EXPECT_THROW(evaluate(parse_expr("P(Y|do(X))"), d, {{"X", 1}, {"Y", 1}}), EvaluationError);
}

TEST(Equivalent, Basics) {
  auto spec = binary_domains({"X", "Y", "Z"});
  auto e = parse_expr("sum_{Z} (P(Y|X,Z)*P(Z))");
  EXPECT_TRUE(equivalent(e, e, spec));
  // different syntax, same functional
  EXPECT_TRUE(equivalent(parse_expr("P(Y|X)"), parse_expr("P(X,Y)/P(X)"), spec));
  EXPECT_FALSE(equivalent(parse_expr("P(Y|X)"), parse_expr("P(X,Y)"), spec));
  EXPECT_THROW(equivalent(parse_expr("P(Y|X)"), parse_expr("P(Y)"), spec),
               IncompatibleFreeVariables);
}

TEST(Equivalent, AdjustmentFormulasDifferOnFreeTables) {
  auto spec = binary_domains({"X", "Y", "M"});
  auto backdoor = parse_expr("P(Y|X)");
  auto frontdoor = parse_expr("sum_{M,X'} (P(M|X)*P(X')*P(Y|M,X'))");
  EXPECT_FALSE(equivalent(backdoor, frontdoor, spec));
}

TEST(Equivalent, CanonicalizePreservesValues) {
  std::mt19937_64 rng(5);
  auto spec = binary_domains({"W", "X", "Y", "Z"});
  auto d = random_positive_table(spec, {"W", "X", "Y", "Z"}, rng);
  for (const char* s : {"sum_{W} (P(Z|W)*P(W))*P(Y|X)", "(P(Y|X,Z)*P(Z))/P(Z)",
                        "sum_{W} (sum_{Z} (P(Y|W,X,Z)*P(Z|W))*P(W))"}) {
    auto e = parse_expr(s);
    auto c = canonicalize(e);
    for_each_binding({"X", "Y", "Z"}, {{0, 1}, {0, 1}, {0, 1}}, [&](const Binding& b) {
      EXPECT_NEAR(evaluate(e, d, b), evaluate(c, d, b), 1e-12) << s;
    });
  }
}
