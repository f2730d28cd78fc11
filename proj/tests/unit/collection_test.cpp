#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;

namespace {

Admg empty_pair() { return Admg::build({"X", "Y"}, {}, {}); }

}  // namespace

TEST(Maximal, Examples) {
  auto a = maximal_elements(make_collection({chain(), empty_pair()}));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.graphs[0], chain());
  EXPECT_EQ(maximal_elements(make_collection({chain(), reversed()})).size(), 2u);
  EXPECT_EQ(maximal_elements(make_collection({bow()})).size(), 1u);
  auto dup = maximal_elements(make_collection({chain(), chain(), empty_pair()}));
  ASSERT_EQ(dup.size(), 1u);
  EXPECT_EQ(dup.names[0], "G1");
}

TEST(Collection, Validation) {
  EXPECT_THROW(make_collection({}), InvalidCollection);
  EXPECT_THROW(make_collection({chain(), frontdoor()}), InvalidCollection);
}

TEST(Analyze, CommonBackdoorPair) {
  auto rep = analyze(make_collection({backdoor_left(), backdoor_right()}), effect(), all_notions());
  auto expected = canonicalize(parse_expr("sum_{Z} (P(Y|X,Z)*P(Z))"));
  ASSERT_EQ(rep.results.size(), 4u);
  EXPECT_EQ(rep.find(Notion::ICB)->verdict, Verdict::Yes);
  EXPECT_EQ(rep.find(Notion::ICB)->criterion->set, (NodeSet{"Z"}));
  EXPECT_EQ(*rep.find(Notion::ICB)->estimand, expected);
  EXPECT_EQ(rep.find(Notion::ICF)->verdict, Verdict::No);
  EXPECT_EQ(rep.find(Notion::ICD)->verdict, Verdict::Yes);
  EXPECT_EQ(rep.find(Notion::IG)->verdict, Verdict::Yes);
  EXPECT_EQ(*rep.find(Notion::IG)->estimand, expected);
  EXPECT_TRUE(hierarchy_violations(rep).empty());
}

TEST(Analyze, OppositeEdges) {
  auto c = make_collection({chain(), reversed()});
  auto rep = analyze(c, effect(), all_notions());
  EXPECT_EQ(rep.find(Notion::ICD)->verdict, Verdict::Inconclusive);
  const auto* ig = rep.find(Notion::IG);
  EXPECT_EQ(ig->verdict, Verdict::Inconclusive);
  ASSERT_EQ(ig->per_graph.size(), 2u);
  EXPECT_EQ(to_string(*ig->per_graph[0].second), "P(Y|X)");
  EXPECT_EQ(to_string(*ig->per_graph[1].second), "P(Y)");

  AnalysisOptions opt;
  opt.counterexample_search = true;
  auto refuted = check_notion(c, effect(), Notion::IG, opt);
  EXPECT_EQ(refuted.verdict, Verdict::No);
  ASSERT_TRUE(refuted.counterexample);
  EXPECT_TRUE(verify_counterexample(c, effect(), *refuted.counterexample));
  EXPECT_GE(refuted.counterexample->gap(), Rational(1, 10));

  auto full = analyze(c, effect(), all_notions(), opt);
  EXPECT_EQ(full.find(Notion::IG)->verdict, Verdict::No);
  EXPECT_EQ(full.find(Notion::ICD)->verdict, Verdict::No);
  EXPECT_TRUE(hierarchy_violations(full).empty());
}

TEST(Analyze, KnownIndependentDistribution) {
  // When X and Y are known to be independent, P(Y) is valid in models of
  // both orientations that produce that distribution.
  auto doc = parse_document(R"(
scm F {
  var X domain {0,1}
  var Y domain {0,1}
  exo UX domain {0,1} prob {1/3,2/3}
  exo UY domain {0,1} prob {3/4,1/4}
  fn X(; UX) { (0) -> 0; (1) -> 1 }
  fn Y(X; UY) { (0,0) -> 0; (0,1) -> 1; (1,0) -> 0; (1,1) -> 1 }
}
scm B {
  var X domain {0,1}
  var Y domain {0,1}
  exo UX domain {0,1} prob {1/3,2/3}
  exo UY domain {0,1} prob {3/4,1/4}
  fn Y(; UY) { (0) -> 0; (1) -> 1 }
  fn X(Y; UX) { (0,0) -> 0; (0,1) -> 1; (1,0) -> 0; (1,1) -> 1 }
}
)");
  const auto& f = doc.scm("F");
  const auto& b = doc.scm("B");
  EXPECT_EQ(induced_graph(f), chain());
  EXPECT_EQ(induced_graph(b), reversed());
  EXPECT_EQ(distribution(f).marginal({"X", "Y"}), distribution(b).marginal({"X", "Y"}));
  Query q{{"Y"}, {"X"}, {}, {{"Y", 1}}};
  for (const auto* m : {&f, &b}) EXPECT_EQ(validate_estimand(*m, parse_expr("P(Y)"), q).max_error, 0);
}

TEST(Analyze, SingletonGraph) {
  auto rep = analyze(make_collection({chain()}), effect(), {Notion::IG, Notion::ICD});
  ASSERT_EQ(rep.results.size(), 2u);
  EXPECT_EQ(rep.results[0].notion, Notion::ICD);
  EXPECT_EQ(rep.find(Notion::ICD)->verdict, Verdict::Yes);
  EXPECT_EQ(to_string(*rep.find(Notion::ICD)->estimand), "P(Y|X)");
  EXPECT_EQ(rep.find(Notion::IG)->verdict, Verdict::Yes);
  EXPECT_EQ(to_string(*rep.find(Notion::IG)->estimand), "P(Y|X)");
}

TEST(Analyze, NonIdentifiableMember) {
  auto rep = analyze(make_collection({bow()}), effect(), {Notion::IG, Notion::ICD});
  EXPECT_EQ(rep.find(Notion::ICD)->verdict, Verdict::No);
  const auto* ig = rep.find(Notion::IG);
  EXPECT_EQ(ig->verdict, Verdict::No);
  ASSERT_TRUE(ig->non_id);
  EXPECT_EQ(ig->non_id->first, "G1");
}

TEST(Analyze, FrontdoorNeedsSingletons) {
  auto rep = analyze(make_collection({backdoor_left()}), Query{{"Y"}, {"X", "Z"}, {}, {}},
                     {Notion::ICF});
  EXPECT_EQ(rep.find(Notion::ICF)->verdict, Verdict::Inconclusive);
}

TEST(Counterexample, Cases) {
  auto spec = binary_domains({"X", "Y"});
  EXPECT_FALSE(find_ig_counterexample(make_collection({chain()}), effect(), spec));
  auto bow_cx = find_ig_counterexample(make_collection({bow()}), effect(), spec);
  ASSERT_TRUE(bow_cx);
  EXPECT_TRUE(verify_counterexample(make_collection({bow()}), effect(), *bow_cx));
  EXPECT_THROW(find_ig_counterexample(make_collection({bow()}), effect(), spec, {0, 0, {1, 10}}),
               InvalidBudget);
}

TEST(Counterexample, TamperedPairIsRejected) {
  auto c = make_collection({chain(), reversed()});
  auto cx = find_ig_counterexample(c, effect(), binary_domains({"X", "Y"}));
  ASSERT_TRUE(cx);
  auto bad = *cx;
  bad.m2 = bad.m1;
  EXPECT_FALSE(verify_counterexample(c, effect(), bad));
  bad = *cx;
  bad.value2 = bad.value1;
  EXPECT_FALSE(verify_counterexample(c, effect(), bad));
}

TEST(Hierarchy, ViolationsAreDetected) {
  HierarchyReport rep;
  rep.pruned_from = rep.pruned_to = 1;
  NotionResult icb, ig;
  icb.notion = Notion::ICB;
  icb.verdict = Verdict::Yes;
  ig.notion = Notion::IG;
  ig.verdict = Verdict::No;
  rep.results = {icb, ig};
  EXPECT_FALSE(hierarchy_violations(rep).empty());
}

TEST(CollectionProperty, PruningKeepsCriterionVerdicts) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 30; ++t) {
    auto c = random_collection(1 + t % 4, 4, 0.3, rng);
    auto q = random_effect_query(c.graphs.front(), rng);
    if (q.x.size() != 1) continue;
    AnalysisOptions off;
    off.prune = false;
    for (auto n : {Notion::ICB, Notion::ICF}) {
      auto a = check_notion(c, q, n);
      auto b = check_notion(c, q, n, off);
      EXPECT_EQ(a.verdict, b.verdict);
    }
    EXPECT_LE(maximal_elements(c).size(), c.size());
  }
}
