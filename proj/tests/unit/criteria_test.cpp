#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;

TEST(Backdoor, Examples) {
  EXPECT_TRUE(is_backdoor_set(backdoor_left(), {"X"}, {"Y"}, {"Z"}));
  EXPECT_TRUE(is_backdoor_set(backdoor_right(), {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(is_backdoor_set(bow(), {"X"}, {"Y"}, {}));
  EXPECT_TRUE(is_backdoor_set(chain(), {"X"}, {"Y"}, {}));
  // descendants of X are never admissible
  auto med = Admg::build({"X", "M", "Y"}, {{"X", "M"}, {"M", "Y"}}, {});
  EXPECT_FALSE(is_backdoor_set(med, {"X"}, {"Y"}, {"M"}));
  EXPECT_THROW(is_backdoor_set(chain(), {"X"}, {"Y"}, {"X"}), OverlappingSets);
}

TEST(Frontdoor, Examples) {
  EXPECT_TRUE(is_frontdoor_set(frontdoor(), {"X"}, {"Y"}, {"M"}));
  EXPECT_FALSE(is_frontdoor_set(chain(), {"X"}, {"Y"}, {}));
  auto confounded = Admg::build({"X", "M", "Y"}, {{"X", "M"}, {"M", "Y"}}, {{"M", "Y"}});
  EXPECT_FALSE(is_frontdoor_set(confounded, {"X"}, {"Y"}, {"M"}));
  EXPECT_THROW(is_frontdoor_set(backdoor_left(), {"X", "Z"}, {"Y"}, {}), UnsupportedSetSize);
}

TEST(CommonCriterion, BackdoorPair) {
  auto w = find_common_criterion({backdoor_left(), backdoor_right()}, effect(), Criterion::Backdoor);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->set, (NodeSet{"Z"}));
  EXPECT_EQ(w->estimand, canonicalize(parse_expr("sum_{Z} (P(Y|X,Z)*P(Z))")));
}

TEST(CommonCriterion, EmptySetAndNone) {
  auto w = find_common_criterion({chain()}, effect(), Criterion::Backdoor);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->set.empty());
  EXPECT_EQ(to_string(w->estimand), "P(Y|X)");
  EXPECT_FALSE(find_common_criterion({bow()}, effect(), Criterion::Backdoor));
}

TEST(CommonCriterion, SmallestSetFirst) {
  // {V} alone blocks both backdoor paths in the left graph
  auto w = find_common_criterion({backdoor_left()}, effect(), Criterion::Backdoor);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->set, (NodeSet{"V"}));
}

TEST(CommonCriterion, FrontdoorFormula) {
  auto w = find_common_criterion({frontdoor()}, effect(), Criterion::Frontdoor);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->set, (NodeSet{"M"}));
  EXPECT_EQ(worst_error(frontdoor(), w->estimand, effect(), 3), 0);
  EXPECT_THROW(find_common_criterion({frontdoor()}, Query{{"Y"}, {"X", "M"}, {}, {}},
                                     Criterion::Frontdoor),
               UnsupportedSetSize);
}

TEST(CommonCriterion, ConditioningSetIsKept) {
  Query q{{"Y"}, {"X"}, {"U"}, {}};
  auto w = find_common_criterion({backdoor_left()}, q, Criterion::Backdoor);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->set.count("U"));
  EXPECT_EQ(worst_error(backdoor_left(), w->estimand, q, 3), 0);
}

TEST(CommonCriterion, DerivationReplaysAsProof) {
  for (auto crit : {Criterion::Backdoor, Criterion::Frontdoor}) {
    const Admg g = crit == Criterion::Backdoor ? backdoor_left() : frontdoor();
    auto w = find_common_criterion({g}, effect(), crit);
    ASSERT_TRUE(w);
    auto proof = emit_proof(effect(), criterion_plan(g, effect(), *w), g.sorted_nodes());
    EXPECT_TRUE(check_proof(proof, {g}).ok);
    EXPECT_TRUE(canonically_equal(proof.final_expr(), w->estimand));
  }
}

TEST(CriteriaProperty, WitnessesCarryToSubgraphsAndValidate) {
  std::mt19937_64 rng(51);
  int found = 0;
  for (int t = 0; t < 80; ++t) {
    auto g = random_admg(3 + t % 3, 0.3, rng);
    auto q = random_effect_query(g, rng);
    auto w = find_common_criterion({g}, q, Criterion::Backdoor);
    if (!w) continue;
    ++found;
    auto h = random_subgraph(g, 0.5, rng);
    EXPECT_TRUE(is_backdoor_set(h, q.x, q.y, w->set));
    ASSERT_EQ(worst_error(g, w->estimand, q, 2, t), 0);
  }
  EXPECT_GT(found, 20);
}
