#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;

TEST(CComponents, Examples) {
  EXPECT_EQ(c_components(chain(), NodeSet{"X", "Y"}), (std::vector<NodeSet>{{"X"}, {"Y"}}));
  auto line = Admg::build({"X", "Y", "Z"}, {}, {{"X", "Y"}, {"Y", "Z"}});
  EXPECT_EQ(c_components(line, NodeSet{"X", "Y", "Z"}), (std::vector<NodeSet>{{"X", "Y", "Z"}}));
  auto pair = Admg::build({"X", "Y", "Z"}, {}, {{"X", "Y"}});
  EXPECT_EQ(c_components(pair, NodeSet{"X", "Y", "Z"}), (std::vector<NodeSet>{{"X", "Y"}, {"Z"}}));
  EXPECT_THROW(c_components(pair, NodeSet{"Q"}), UnknownVariable);
}

TEST(Identify, Examples) {
  EXPECT_EQ(to_string(*identify(chain(), effect()).estimand), "P(Y|X)");
  EXPECT_EQ(to_string(*identify(reversed(), effect()).estimand), "P(Y)");
  auto bow_result = identify(bow(), effect());
  ASSERT_FALSE(bow_result.identified());
  EXPECT_EQ(bow_result.witness->f, (NodeSet{"X", "Y"}));
  EXPECT_EQ(bow_result.witness->f_prime, (NodeSet{"Y"}));
}

TEST(Identify, ClassicGraphsValidateExactly) {
  for (const auto& g : {frontdoor(), napkin(), backdoor_left(), backdoor_right()}) {
    auto r = identify(g, effect());
    ASSERT_TRUE(r.identified());
    EXPECT_EQ(worst_error(g, *r.estimand, effect(), 3), 0) << to_string(*r.estimand);
  }
}

TEST(Identify, ConditionalQuery) {
  Query q{{"Y"}, {"X"}, {"Z"}, {}};
  auto r = identify(backdoor_left(), q);
  ASSERT_TRUE(r.identified());
  EXPECT_EQ(worst_error(backdoor_left(), *r.estimand, q, 3), 0);
}

TEST(Identify, RejectsBadQueries) {
  EXPECT_THROW(identify(chain(), Query{{"Y"}, {"Y"}, {}, {}}), OverlappingSets);
  EXPECT_THROW(identify(chain(), Query{{"Y"}, {"Q"}, {}, {}}), UnknownVariable);
}

TEST(IdentifyProperty, SoundOnRandomGraphs) {
  std::mt19937_64 rng(41);
  int identified = 0;
  for (int t = 0; t < 60; ++t) {
    auto g = random_admg(2 + t % 4, 0.3, rng);
    auto q = random_effect_query(g, rng);
    auto r = identify(g, q);
    if (!r.identified()) continue;
    ++identified;
    ASSERT_EQ(worst_error(g, *r.estimand, q, 2, t), 0) << to_string(*r.estimand);
  }
  EXPECT_GT(identified, 10);
}

TEST(IdentifyProperty, EstimandsCarryToSubgraphs) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 30; ++t) {
    auto g = random_admg(3 + t % 2, 0.4, rng);
    auto q = random_effect_query(g, rng);
    auto r = identify(g, q);
    if (!r.identified()) continue;
    auto h = random_subgraph(g, 0.5, rng);
    ASSERT_EQ(worst_error(h, *r.estimand, q, 2, t), 0);
  }
}

TEST(IdentifyProperty, FailuresHaveObservationalTwins) {
  // whenever identification fails on a small graph, two models of that graph
  // agree on P(V) but not on the query
  std::mt19937_64 rng(43);
  int failures = 0;
  for (int t = 0; t < 80; ++t) {
    auto g = random_admg(2 + t % 3, 0.5, rng);
    auto q = random_effect_query(g, rng);
    if (identify(g, q).identified()) continue;
    ++failures;
    auto c = make_collection({g});
    auto cx = find_ig_counterexample(c, q, binary_domains(g.sorted_nodes()), {64, 7, 0});
    ASSERT_TRUE(cx) << to_string(q) << "\n" << to_text("g", g);
    EXPECT_TRUE(verify_counterexample(c, q, *cx));
  }
  EXPECT_GT(failures, 10);
}

TEST(IdentifyProperty, AgreesWithProofSearch) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 25; ++t) {
    auto g = random_admg(3, 0.4, rng);
    auto q = random_effect_query(g, rng);
    auto found = search_common_proof({g}, q, {4, 200'000});
    if (!found.proof) continue;
    auto r = identify(g, q);
    ASSERT_TRUE(r.identified());
    EquivalenceOptions opt;
    opt.trials = 5;
    EXPECT_TRUE(equivalent_for_query(canonicalize(found.proof->final_expr()), *r.estimand, g, q,
                                     binary_domains(g.sorted_nodes()), opt));
  }
}
