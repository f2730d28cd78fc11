#pragma once

// Text documents holding graphs, collections, queries and SCMs.
//
//   # comment
//   graph g { node A; X -> Y; X <-> Y }
//   collection C { g, h }
//   query q : P(Y | do(X), Z)
//   scm M { var X domain {0,1}  exo U domain {0,1} prob {1/2,1/2}  fn X(; U) { (0) -> 0; (1) -> 1 } }
//
// Errors carry the 1-based line and column of the offending token.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "causalid/collection.hpp"
#include "causalid/error.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"
#include "causalid/rational.hpp"
#include "causalid/scm.hpp"

namespace causalid {

struct Span {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct GraphItem {
  std::string name;
  Admg graph;
  Span span;
};

struct CollectionItem {
  GraphCollection collection;
  Span span;
};

struct QueryItem {
  std::string name;
  Query query;
  Span span;
};

struct ScmItem {
  DiscreteScm scm;
  Span span;
};

struct SourceDocument {
  std::vector<GraphItem> graphs;
  std::vector<CollectionItem> collections;
  std::vector<QueryItem> queries;
  std::vector<ScmItem> scms;

  const Admg& graph(const std::string& name) const {
    for (const auto& g : graphs)
      if (g.name == name) return g.graph;
    throw Error("no graph named '" + name + "'");
  }
  const GraphCollection& collection(const std::string& name) const {
    for (const auto& c : collections)
      if (c.collection.name == name) return c.collection;
    throw Error("no collection named '" + name + "'");
  }
  const Query& query(const std::string& name) const {
    for (const auto& q : queries)
      if (q.name == name) return q.query;
    throw Error("no query named '" + name + "'");
  }
  const DiscreteScm& scm(const std::string& name) const {
    for (const auto& m : scms)
      if (m.scm.name == name) return m.scm;
    throw Error("no scm named '" + name + "'");
  }
};

namespace detail {

enum class Tok { Ident, Int, Sym, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Int: return "number " + t.text;
    case Tok::Sym: return "'" + t.text + "'";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
  }
  return t.text;
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    Span here{line, col};
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == '\n') {
      out.push_back({Tok::Newline, "\n", here});
      advance(1);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), here});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Int, std::string(text.substr(i, j - i)), here});
      advance(j - i);
    } else if (text.substr(i, 3) == "<->") {
      out.push_back({Tok::Sym, "<->", here});
      advance(3);
    } else if (text.substr(i, 2) == "->") {
      out.push_back({Tok::Sym, "->", here});
      advance(2);
    } else if (std::string_view("{}(),;:|=/").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), here});
      advance(1);
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
    }
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view text) : toks_(tokenize(text)) {}

  SourceDocument parse() {
    SourceDocument doc;
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (is_word("graph")) {
        parse_graph(doc);
      } else if (is_word("collection")) {
        parse_collection(doc);
      } else if (is_word("query")) {
        parse_query_item(doc);
      } else if (is_word("scm")) {
        parse_scm(doc);
      } else {
        fail("unexpected " + describe(t), {"graph", "collection", "query", "scm"});
      }
    }
    return doc;
  }

  Query parse_query_only() {
    skip_newlines();
    Query q = parse_query_expr();
    skip_newlines();
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()), {"end of input"});
    return q;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool is_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_word(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected = {}) const {
    throw ParseError(msg, peek().span.line, peek().span.column, std::move(expected));
  }
  [[noreturn]] static void fail_at(const Span& s, const std::string& msg) {
    throw ParseError(msg, s.line, s.column);
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }

  const Token& expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()), {std::string(s)});
    return next();
  }
  const Token& expect_word(std::string_view s) {
    if (!is_word(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()), {std::string(s)});
    return next();
  }
  const Token& expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected a name, found " + describe(peek()), {"identifier"});
    return next();
  }
  int expect_int() {
    if (peek().kind != Tok::Int) fail("expected an integer, found " + describe(peek()), {"integer"});
    const Token& t = next();
    try {
      return std::stoi(t.text);
    } catch (const std::out_of_range&) {
      fail_at(t.span, "integer out of range");
    }
  }

  void claim(std::set<std::string>& names, const Token& t, const char* kind) {
    if (!names.insert(t.text).second)
      fail_at(t.span, std::string("duplicate ") + kind + " name '" + t.text + "'");
  }

  // graph <name> { node A; A -> B; A <-> B }
  void parse_graph(SourceDocument& doc) {
    Span start = next().span;
    const Token& name = expect_ident();
    claim(graph_names_, name, "graph");
    skip_newlines();
    expect_sym("{");
    std::vector<std::string> nodes;
    std::set<std::string> seen;
    auto add_node = [&](const std::string& v) {
      if (seen.insert(v).second) nodes.push_back(v);
    };
    std::vector<std::pair<Edge, Span>> directed, bidirected;
    std::set<Edge> dseen, bseen;
    for (;;) {
      while (peek().kind == Tok::Newline || is_sym(";")) next();
      if (is_sym("}")) break;
      if (is_word("node") && peek(1).kind == Tok::Ident) {
        next();
        const Token& v = expect_ident();
        if (seen.count(v.text)) fail_at(v.span, "duplicate node '" + v.text + "'");
        add_node(v.text);
      } else {
        const Token& a = expect_ident();
        if (!is_sym("->") && !is_sym("<->")) fail("expected an edge, found " + describe(peek()), {"->", "<->"});
        const Token& arrow = next();
        const Token& b = expect_ident();
        if (a.text == b.text) fail_at(a.span, "self-loop on '" + a.text + "'");
        add_node(a.text);
        add_node(b.text);
        if (arrow.text == "->") {
          if (!dseen.insert({a.text, b.text}).second)
            fail_at(a.span, "duplicate edge " + a.text + " -> " + b.text);
          directed.push_back({{a.text, b.text}, a.span});
        } else {
          Edge key = a.text < b.text ? Edge{a.text, b.text} : Edge{b.text, a.text};
          if (!bseen.insert(key).second)
            fail_at(a.span, "duplicate edge " + a.text + " <-> " + b.text);
          bidirected.push_back({{a.text, b.text}, a.span});
        }
      }
      if (!is_sym("}") && !is_sym(";") && peek().kind != Tok::Newline)
        fail("expected ';', newline or '}', found " + describe(peek()), {";", "}", "newline"});
    }
    next();
    std::vector<Edge> d, bi;
    for (const auto& [e, _] : bidirected) bi.push_back(e);
    for (const auto& [e, s] : directed) {
      d.push_back(e);
      try {
        Admg::build(nodes, d, {});
      } catch (const CycleError& err) {
        fail_at(s, err.what());
      }
    }
    doc.graphs.push_back({name.text, Admg::build(nodes, d, bi), start});
  }

  // collection <name> { g1, g2 }
  void parse_collection(SourceDocument& doc) {
    Span start = next().span;
    const Token& name = expect_ident();
    claim(collection_names_, name, "collection");
    skip_newlines();
    expect_sym("{");
    GraphCollection c{name.text, {}, {}};
    skip_newlines();
    if (!is_sym("}")) {
      for (;;) {
        skip_newlines();
        const Token& g = expect_ident();
        auto it = std::find_if(doc.graphs.begin(), doc.graphs.end(),
                               [&](const GraphItem& gi) { return gi.name == g.text; });
        if (it == doc.graphs.end()) fail_at(g.span, "unknown graph '" + g.text + "'");
        if (!c.graphs.empty() && it->graph.sorted_nodes() != c.graphs.front().sorted_nodes())
          fail_at(g.span, "graph '" + g.text + "' has a different node set from '" +
                              c.names.front() + "'");
        c.names.push_back(g.text);
        c.graphs.push_back(it->graph);
        skip_newlines();
        if (is_sym("}")) break;
        if (!is_sym(",")) fail("expected ',' or '}', found " + describe(peek()), {",", "}"});
        next();
      }
    }
    if (c.graphs.empty()) fail("collection '" + name.text + "' is empty", {"identifier"});
    next();
    doc.collections.push_back({std::move(c), start});
  }

  // query <name> : P(...)
  void parse_query_item(SourceDocument& doc) {
    Span start = next().span;
    const Token& name = expect_ident();
    claim(query_names_, name, "query");
    expect_sym(":");
    doc.queries.push_back({name.text, parse_query_expr(), start});
  }

  void parse_var_list(NodeSet& into, Query& q, std::set<std::string>& used) {
    for (;;) {
      const Token& v = expect_ident();
      if (!used.insert(v.text).second) fail_at(v.span, "variable '" + v.text + "' appears twice");
      into.insert(v.text);
      if (is_sym("=")) {
        next();
        q.values[v.text] = expect_int();
      }
      if (!is_sym(",") || peek(1).kind != Tok::Ident || (peek(1).text == "do" && peek(2).text == "("))
        return;
      next();
    }
  }

  // P( Y1,Y2 | do(X1,X2), Z1 ), with optional =value pins
  Query parse_query_expr() {
    const Token& p = expect_ident();
    if (p.text != "P") fail_at(p.span, "expected 'P'");
    expect_sym("(");
    Query q;
    std::set<std::string> used;
    parse_var_list(q.y, q, used);
    if (is_sym("|")) {
      next();
      bool need_z = true;
      if (is_word("do") && peek(1).kind == Tok::Sym && peek(1).text == "(") {
        next();
        next();
        parse_var_list(q.x, q, used);
        expect_sym(")");
        need_z = false;
        if (is_sym(",")) {
          next();
          need_z = true;
        }
      }
      if (need_z) parse_var_list(q.z, q, used);
    }
    expect_sym(")");
    return q;
  }

  std::vector<int> parse_int_set() {
    expect_sym("{");
    std::vector<int> out;
    if (!is_sym("}")) {
      for (;;) {
        out.push_back(expect_int());
        if (is_sym("}")) break;
        expect_sym(",");
      }
    }
    next();
    return out;
  }

  std::vector<Rational> parse_rational_set() {
    expect_sym("{");
    std::vector<Rational> out;
    if (!is_sym("}")) {
      for (;;) {
        Span s = peek().span;
        int num = expect_int();
        int den = 1;
        if (is_sym("/")) {
          next();
          den = expect_int();
          if (den == 0) fail_at(s, "zero denominator");
        }
        Rational r(num, den);
        r.canonicalize();
        out.push_back(r);
        if (is_sym("}")) break;
        expect_sym(",");
      }
    }
    next();
    return out;
  }

  struct FnDraft {
    Token name;
    std::vector<std::pair<std::vector<int>, int>> rows;
    std::vector<Span> row_spans;
  };

  // scm <name> { var ... exo ... fn ... }
  void parse_scm(SourceDocument& doc) {
    Span start = next().span;
    const Token& name = expect_ident();
    claim(scm_names_, name, "scm");
    skip_newlines();
    expect_sym("{");
    DiscreteScm m;
    m.name = name.text;
    std::set<std::string> names;
    std::vector<FnDraft> fns;
    std::map<std::string, Span> spans;
    for (;;) {
      while (peek().kind == Tok::Newline || is_sym(";")) next();
      if (is_sym("}")) break;
      if (is_word("var")) {
        next();
        const Token& v = expect_ident();
        if (!names.insert(v.text).second) fail_at(v.span, "duplicate name '" + v.text + "'");
        expect_word("domain");
        Span ds = peek().span;
        EndoVar e;
        e.name = v.text;
        e.domain = parse_int_set();
        if (e.domain.empty()) fail_at(ds, "empty domain");
        spans[v.text] = v.span;
        m.endo.push_back(std::move(e));
      } else if (is_word("exo")) {
        next();
        const Token& u = expect_ident();
        if (!names.insert(u.text).second) fail_at(u.span, "duplicate name '" + u.text + "'");
        expect_word("domain");
        ExoVar x;
        x.name = u.text;
        x.domain = parse_int_set();
        expect_word("prob");
        Span ps = peek().span;
        x.prob = parse_rational_set();
        if (x.prob.size() != x.domain.size())
          fail_at(ps, "probability list of '" + u.text + "' does not match its domain");
        Rational total = 0;
        for (const auto& p : x.prob) total += p;
        if (total != 1) fail_at(ps, "probabilities of '" + u.text + "' sum to " + to_string(total));
        m.exo.push_back(std::move(x));
      } else if (is_word("fn")) {
        next();
        FnDraft f{expect_ident(), {}, {}};
        EndoVar* e = mutable_endo(m, f.name.text);
        if (!e) fail_at(f.name.span, "fn for undeclared variable '" + f.name.text + "'");
        if (spans.count("fn " + f.name.text))
          fail_at(f.name.span, "second fn for '" + f.name.text + "'");
        spans["fn " + f.name.text] = f.name.span;
        expect_sym("(");
        bool exos = false;
        while (!is_sym(")")) {
          if (is_sym(";")) {
            if (exos) fail("second ';' in input list", {")"});
            exos = true;
            next();
            continue;
          }
          const Token& in = expect_ident();
          (exos ? e->exos : e->parents).push_back(in.text);
          if (is_sym(",")) next();
        }
        next();
        skip_newlines();
        expect_sym("{");
        for (;;) {
          while (peek().kind == Tok::Newline || is_sym(";")) next();
          if (is_sym("}")) break;
          Span rs = peek().span;
          expect_sym("(");
          std::vector<int> tuple;
          while (!is_sym(")")) {
            tuple.push_back(expect_int());
            if (!is_sym(")")) expect_sym(",");
          }
          next();
          expect_sym("->");
          int value = expect_int();
          f.rows.emplace_back(std::move(tuple), value);
          f.row_spans.push_back(rs);
        }
        next();
        fns.push_back(std::move(f));
      } else {
        fail("unexpected " + describe(peek()), {"var", "exo", "fn", "}"});
      }
    }
    next();
    for (const auto& f : fns) fill_table(m, f);
    for (const auto& e : m.endo)
      if (!spans.count("fn " + e.name)) fail_at(spans[e.name], "no fn for '" + e.name + "'");
    try {
      m.validate();
    } catch (const Error& err) {
      fail_at(start, err.what());
    }
    doc.scms.push_back({std::move(m), start});
  }

  static EndoVar* mutable_endo(DiscreteScm& m, const std::string& n) {
    for (auto& v : m.endo)
      if (v.name == n) return &v;
    return nullptr;
  }

  static void fill_table(DiscreteScm& m, const FnDraft& f) {
    EndoVar& e = *mutable_endo(m, f.name.text);
    std::vector<const std::vector<int>*> doms;
    for (const auto& p : e.parents) {
      auto* v = m.find_endo(p);
      if (!v) fail_at(f.name.span, "input '" + p + "' of '" + e.name + "' is not a declared var");
      doms.push_back(&v->domain);
    }
    for (const auto& u : e.exos) {
      auto* x = m.find_exo(u);
      if (!x) fail_at(f.name.span, "input '" + u + "' of '" + e.name + "' is not a declared exo");
      doms.push_back(&x->domain);
    }
    std::vector<std::size_t> radix;
    for (auto* d : doms) radix.push_back(d->size());
    const std::size_t cells = detail::cells_of(radix);
    std::vector<std::optional<int>> table(cells);
    for (std::size_t r = 0; r < f.rows.size(); ++r) {
      const auto& [tuple, value] = f.rows[r];
      if (tuple.size() != doms.size())
        fail_at(f.row_spans[r], "row has " + std::to_string(tuple.size()) + " inputs, expected " +
                                    std::to_string(doms.size()));
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < tuple.size(); ++k) {
        auto it = std::find(doms[k]->begin(), doms[k]->end(), tuple[k]);
        if (it == doms[k]->end())
          fail_at(f.row_spans[r], "value " + std::to_string(tuple[k]) + " outside the domain of input " +
                                      std::to_string(k + 1));
        idx.push_back(static_cast<std::size_t>(it - doms[k]->begin()));
      }
      if (std::find(e.domain.begin(), e.domain.end(), value) == e.domain.end())
        fail_at(f.row_spans[r], "output " + std::to_string(value) + " outside the domain of '" +
                                    e.name + "'");
      auto cell = detail::encode(idx, radix);
      if (table[cell]) fail_at(f.row_spans[r], "row listed twice");
      table[cell] = value;
    }
    for (std::size_t cell = 0; cell < cells; ++cell)
      if (!table[cell]) {
        auto idx = detail::decode(cell, radix);
        std::string tuple;
        for (std::size_t k = 0; k < idx.size(); ++k)
          tuple += (k ? "," : "") + std::to_string((*doms[k])[idx[k]]);
        fail_at(f.name.span, "fn '" + e.name + "' has no row for (" + tuple + ")");
      }
    e.table.clear();
    for (const auto& v : table) e.table.push_back(*v);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> graph_names_, collection_names_, query_names_, scm_names_;
};

}  // namespace detail

inline SourceDocument parse_document(std::string_view text) {
  return detail::DocumentParser(text).parse();
}

/// A bare query such as "P(Y=1 | do(X=1))".
inline Query parse_query(std::string_view text) {
  return detail::DocumentParser(text).parse_query_only();
}

inline std::string to_text(const std::string& name, const Admg& g) {
  std::string out = "graph " + name + " {\n";
  for (const auto& v : g.nodes()) out += "  node " + v + "\n";
  for (const auto& [a, b] : g.directed_edges()) out += "  " + a + " -> " + b + "\n";
  for (const auto& [a, b] : g.bidirected_edges()) out += "  " + a + " <-> " + b + "\n";
  return out + "}\n";
}

inline std::string to_text(const GraphCollection& c) {
  std::string out = "collection " + c.name + " {";
  for (std::size_t i = 0; i < c.names.size(); ++i) out += (i ? ", " : " ") + c.names[i];
  return out + " }\n";
}

inline std::string to_text(const std::string& name, const Query& q) {
  return "query " + name + " : " + to_string(q) + "\n";
}

}  // namespace causalid
