#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace causalid;
using namespace fixtures;

namespace {

Span error_span(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return {};
}

}  // namespace

TEST(Document, BackdoorPairFile) {
  auto doc = parse_document(data_file("common_backdoor.cg"));
  ASSERT_EQ(doc.graphs.size(), 2u);
  EXPECT_EQ(doc.graph("left").size(), 5u);
  EXPECT_EQ(doc.graph("left"), backdoor_left());
  EXPECT_EQ(doc.graph("right"), backdoor_right());
  const auto& c = doc.collection("C");
  EXPECT_EQ(c.names, (std::vector<std::string>{"left", "right"}));
  EXPECT_EQ(doc.query("q"), effect());
  EXPECT_THROW(doc.graph("missing"), Error);
}

TEST(Document, XorFile) {
  auto doc = parse_document(data_file("xor_pair.cg"));
  EXPECT_EQ(doc.scms.size(), 2u);
  EXPECT_EQ(induced_graph(doc.scm("M1")), chain());
  EXPECT_EQ(induced_graph(doc.scm("M2")), reversed());
  const auto& q = doc.query("q11");
  EXPECT_EQ(q.values.at("Y"), 1);
  EXPECT_EQ(q.values.at("X"), 1);
}

TEST(Document, NodesAndComments) {
  auto doc = parse_document("# header\ngraph g {\n  node A\n  node B  # lone\n  A <-> B\n}\n");
  const auto& g = doc.graph("g");
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.directed_edges().empty());
  EXPECT_EQ(g.bidirected_edges().size(), 1u);
}

TEST(Document, ErrorSpans) {
  auto s = error_span("graph g {\n  A -> B\n  B -> C\n  C -> A\n}\n");
  EXPECT_EQ(s.line, 4u);
  EXPECT_EQ(s.column, 3u);
  s = error_span("graph g {\n  A -> A\n}\n");
  EXPECT_EQ(s.line, 2u);
  s = error_span("graph g {\n  A -> B\n  A -> B\n}\n");
  EXPECT_EQ(s.line, 3u);
  s = error_span("graph g { A -> B }\ncollection C { g, h }\n");
  EXPECT_EQ(s.line, 2u);
  EXPECT_EQ(s.column, 19u);
  s = error_span("graph g { A -> B }\ngraph h { A -> C }\ncollection C { g, h }\n");
  EXPECT_EQ(s.line, 3u);
  s = error_span("graph g {\n  A => B\n}\n");
  EXPECT_EQ(s.line, 2u);
}

TEST(Document, ScmErrors) {
  const std::string head = "scm M {\n  var X domain {0,1}\n  exo U domain {0,1} prob {1/2,1/2}\n";
  EXPECT_NO_THROW(parse_document(head + "  fn X(; U) { (0) -> 0; (1) -> 1 }\n}\n"));
  // missing row
  EXPECT_EQ(error_span(head + "  fn X(; U) { (0) -> 0 }\n}\n").line, 4u);
  // duplicate row
  EXPECT_EQ(error_span(head + "  fn X(; U) { (0) -> 0; (0) -> 1; (1) -> 1 }\n}\n").line, 4u);
  // output outside the domain
  EXPECT_EQ(error_span(head + "  fn X(; U) { (0) -> 0; (1) -> 2 }\n}\n").line, 4u);
  // probabilities do not sum to one
  EXPECT_THROW(parse_document("scm M {\n  exo U domain {0,1} prob {1/2,1/3}\n}\n"), Error);
}

TEST(Document, Queries) {
  auto q = parse_query("P(Y=1, W | do(X=0, V), Z)");
  EXPECT_EQ(q.y, (NodeSet{"W", "Y"}));
  EXPECT_EQ(q.x, (NodeSet{"V", "X"}));
  EXPECT_EQ(q.z, (NodeSet{"Z"}));
  EXPECT_EQ(q.values.at("Y"), 1);
  EXPECT_EQ(q.values.at("X"), 0);
  EXPECT_EQ(parse_query("P(Y)"), (Query{{"Y"}, {}, {}, {}}));
  EXPECT_THROW(parse_query("P(Y | do(X)"), ParseError);
  EXPECT_THROW(parse_query("Q(Y)"), ParseError);
}

TEST(Document, PrintersRoundTrip) {
  for (const auto& g : {chain(), bow(), frontdoor(), napkin(), backdoor_left()}) {
    auto doc = parse_document(to_text("g", g));
    EXPECT_EQ(doc.graph("g"), g);
  }
  auto c = make_collection({backdoor_left(), backdoor_right()});
  std::string text = to_text("G1", c.graphs[0]) + to_text("G2", c.graphs[1]) + to_text(c) +
                     to_text("q", effect());
  auto doc = parse_document(text);
  EXPECT_EQ(doc.collection("C").graphs, c.graphs);
  EXPECT_EQ(doc.query("q"), effect());
}
