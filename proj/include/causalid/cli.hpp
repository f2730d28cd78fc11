#pragma once

// Command-line front end.  run() returns the process exit status:
// 0 completed, 1 usage or input error, 2 internal invariant violation.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "causalid/collection.hpp"
#include "causalid/docalc.hpp"
#include "causalid/document.hpp"
#include "causalid/dsep.hpp"
#include "causalid/identify.hpp"
#include "causalid/scm.hpp"

namespace causalid {
namespace cli {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SourceDocument load(const std::string& path) {
  auto text = read_file(path);
  try {
    return parse_document(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column(), e.expected());
  }
}

/// A query given either by name or inline as "P(...)".
inline Query resolve_query(const SourceDocument& doc, const std::string& ref) {
  if (ref.rfind("P(", 0) == 0 || ref.rfind("P (", 0) == 0) return parse_query(ref);
  return doc.query(ref);
}

inline NodeSet split_names(const std::string& s) {
  NodeSet out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) out.insert(item);
  }
  return out;
}

inline json names_json(const NodeSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

inline json binding_json(const Binding& b) {
  json j = json::object();
  for (const auto& [k, v] : b) j[k] = v;
  return j;
}

inline std::string binding_text(const Binding& b) {
  std::string out;
  for (const auto& [k, v] : b) out += (out.empty() ? "" : ", ") + k + "=" + std::to_string(v);
  return out;
}

inline json witness_json(const NotionResult& r) {
  switch (r.notion) {
    case Notion::ICB:
    case Notion::ICF:
      if (!r.criterion) return nullptr;
      return json{{"criterion", criterion_name(r.criterion->criterion)},
                  {"set", names_json(r.criterion->set)},
                  {"estimand", to_string(r.criterion->estimand)}};
    case Notion::ICD:
      if (!r.proof) return nullptr;
      return json{{"proof", to_text(*r.proof)}, {"estimand", to_string(*r.estimand)}};
    case Notion::IG: {
      json per = json::object();
      for (const auto& [name, e] : r.per_graph) per[name] = e ? json(to_string(*e)) : json(nullptr);
      if (r.verdict == Verdict::Yes) return json{{"estimand", to_string(*r.estimand)}, {"per_graph", per}};
      if (r.non_id)
        return json{{"graph", r.non_id->first},
                    {"hedge", {{"f", names_json(r.non_id->second.f)},
                               {"f_prime", names_json(r.non_id->second.f_prime)}}}};
      if (r.counterexample) {
        const auto& cx = *r.counterexample;
        return json{{"graph1", cx.graph1},          {"graph2", cx.graph2},
                    {"binding", binding_json(cx.binding)},
                    {"value1", to_string(cx.value1)}, {"value2", to_string(cx.value2)},
                    {"m1", to_text(cx.m1)},          {"m2", to_text(cx.m2)}};
      }
      return json{{"per_graph", per}};
    }
  }
  return nullptr;
}

inline json report_json(const std::string& collection, const Query& q, const HierarchyReport& rep) {
  json results = json::array();
  for (const auto& r : rep.results)
    results.push_back({{"notion", notion_name(r.notion)},
                       {"verdict", verdict_name(r.verdict)},
                       {"witness", witness_json(r)},
                       {"reason", r.reason}});
  return json{{"collection", collection},
              {"query", to_string(q)},
              {"pruned_from", rep.pruned_from},
              {"pruned_to", rep.pruned_to},
              {"results", results},
              {"violations", hierarchy_violations(rep)}};
}

inline void indent(std::ostream& out, const std::string& text, const std::string& pad) {
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out << pad << line << "\n";
}

inline void report_text(std::ostream& out, const GraphCollection& c, const Query& q,
                        const HierarchyReport& rep) {
  out << "collection " << c.name << ": " << rep.pruned_from << " graphs, " << rep.pruned_to
      << " maximal\n";
  out << "query: " << to_string(q) << "\n";
  for (const auto& r : rep.results) {
    out << notion_name(r.notion) << ": " << verdict_name(r.verdict);
    if (r.criterion)
      out << "  " << criterion_name(r.criterion->criterion) << " set "
          << Admg::join(r.criterion->set);
    if (r.estimand) out << "  estimand " << to_string(*r.estimand);
    if (!r.reason.empty() && r.verdict != Verdict::Yes) out << "  (" << r.reason << ")";
    out << "\n";
    if (r.proof) indent(out, to_text(*r.proof), "  ");
    if (r.notion == Notion::IG && r.verdict != Verdict::Yes)
      for (const auto& [name, e] : r.per_graph)
        out << "  " << name << ": " << (e ? to_string(*e) : "not identifiable") << "\n";
    if (r.non_id)
      out << "  hedge in " << r.non_id->first << ": F=" << Admg::join(r.non_id->second.f)
          << " F'=" << Admg::join(r.non_id->second.f_prime) << "\n";
    if (r.counterexample) {
      const auto& cx = *r.counterexample;
      out << "  at " << binding_text(cx.binding) << ": " << to_string(cx.value1) << " (model of "
          << cx.graph1 << ") vs " << to_string(cx.value2) << " (model of " << cx.graph2 << ")\n";
      indent(out, to_text(cx.m1), "  ");
      indent(out, to_text(cx.m2), "  ");
    }
  }
  for (const auto& v : hierarchy_violations(rep)) out << "VIOLATION: " << v << "\n";
}

inline void table_text(std::ostream& out, const ExactDistribution& d) {
  for (const auto& v : d.variables()) out << v << " ";
  out << "P\n";
  for (std::size_t c = 0; c < d.size(); ++c) {
    for (int v : d.values(c)) out << v << " ";
    out << to_string(d[c]) << "\n";
  }
}

inline json table_json(const ExactDistribution& d) {
  json rows = json::array();
  for (std::size_t c = 0; c < d.size(); ++c) rows.push_back({{"values", d.values(c)}, {"p", to_string(d[c])}});
  return json{{"variables", d.variables()}, {"rows", rows}};
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identifiability of causal queries over collections of causal diagrams", "causalid"};
  app.require_subcommand(1);
  std::string file, format = "text";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "input document")->required();
    sub->add_option("--format", format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  std::string graph, x, y, z;
  auto* dsep = app.add_subcommand("dsep", "d-separation of two sets given a third");
  add_common(dsep);
  dsep->add_option("--graph", graph)->required();
  dsep->add_option("--x", x)->required();
  dsep->add_option("--y", y)->required();
  dsep->add_option("--z", z);

  std::string query;
  auto* ident = app.add_subcommand("identify", "single-graph identification");
  add_common(ident);
  ident->add_option("--graph", graph)->required();
  ident->add_option("--query", query)->required();

  std::string collection, notions = "icb,icf,icd,ig";
  int depth = SearchBudget{}.max_depth;
  std::size_t trials = EquivalenceOptions{}.trials, attempts = CounterexampleBudget{}.attempts;
  std::uint64_t seed = 0;
  bool cx_search = false, no_prune = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "hierarchy report for a collection");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--collection", collection)->required();
  analyze_cmd->add_option("--query", query)->required();
  analyze_cmd->add_option("--notions", notions, "comma-separated subset of icb,icf,icd,ig");
  analyze_cmd->add_option("--depth", depth, "proof search depth");
  analyze_cmd->add_option("--trials", trials, "random models per equivalence test");
  analyze_cmd->add_option("--seed", seed);
  analyze_cmd->add_option("--attempts", attempts, "counterexample search rounds");
  analyze_cmd->add_flag("--counterexample-search", cx_search);
  analyze_cmd->add_flag("--no-prune", no_prune, "skip maximal-element pruning");

  std::string scm;
  std::vector<std::string> interventions;
  auto* simulate = app.add_subcommand("simulate", "exact distribution of an SCM");
  add_common(simulate);
  simulate->add_option("--scm", scm)->required();
  simulate->add_option("--do", interventions, "VAR=value, repeatable");

  std::string estimand;
  auto* validate = app.add_subcommand("validate", "largest error of an estimand on an SCM");
  add_common(validate);
  validate->add_option("--scm", scm)->required();
  validate->add_option("--query", query)->required();
  validate->add_option("--estimand", estimand)->required();

  std::string proof_file;
  auto* check = app.add_subcommand("check-proof", "re-check a proof against graphs");
  add_common(check);
  check->add_option("--proof", proof_file)->required();
  auto* target = check->add_option_group("target");
  target->add_option("--graph", graph);
  target->add_option("--collection", collection);
  target->require_option(1);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  const bool structured = format == "structured";

  try {
    auto doc = load(file);
    if (*dsep) {
      const Admg& g = doc.graph(graph);
      bool sep = d_separated(g, split_names(x), split_names(y), split_names(z));
      if (structured)
        out << json{{"separated", sep}}.dump(2) << "\n";
      else
        out << (sep ? "separated" : "connected") << "\n";
      return 0;
    }
    if (*ident) {
      auto q = resolve_query(doc, query);
      auto r = identify(doc.graph(graph), q);
      if (structured) {
        json j{{"query", to_string(q)}, {"identified", r.identified()}};
        if (r.identified())
          j["estimand"] = to_string(*r.estimand);
        else
          j["hedge"] = {{"f", names_json(r.witness->f)}, {"f_prime", names_json(r.witness->f_prime)}};
        out << j.dump(2) << "\n";
      } else if (r.identified()) {
        out << "estimand: " << to_string(*r.estimand) << "\n";
      } else {
        out << "not identifiable: hedge F=" << Admg::join(r.witness->f)
            << " F'=" << Admg::join(r.witness->f_prime) << "\n";
      }
      return 0;
    }
    if (*analyze_cmd) {
      const auto& c = doc.collection(collection);
      auto q = resolve_query(doc, query);
      std::vector<Notion> which;
      for (const auto& n : split_names(notions)) {
        auto parsed = parse_notion(n);
        if (!parsed) throw Error("unknown notion '" + n + "'");
        which.push_back(*parsed);
      }
      AnalysisOptions opt;
      opt.budget.max_depth = depth;
      opt.equivalence.trials = trials;
      opt.equivalence.seed = seed;
      opt.prune = !no_prune;
      opt.counterexample_search = cx_search;
      opt.counterexample.attempts = attempts;
      opt.counterexample.seed = seed;
      auto rep = analyze(c, q, which, opt);
      if (structured)
        out << report_json(c.name, q, rep).dump(2) << "\n";
      else
        report_text(out, c, q, rep);
      return hierarchy_violations(rep).empty() ? 0 : 2;
    }
    if (*simulate) {
      const auto& m = doc.scm(scm);
      Intervention iv;
      for (const auto& item : interventions) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("--do expects VAR=value, got '" + item + "'");
        try {
          iv[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw Error("--do expects an integer value, got '" + item + "'");
        }
      }
      auto d = distribution(m, iv);
      if (structured) {
        out << json{{"scm", m.name}, {"do", binding_json(iv)}, {"table", table_json(d)}}.dump(2) << "\n";
      } else {
        out << "scm " << m.name;
        if (!iv.empty()) out << " do(" << binding_text(iv) << ")";
        out << "\n";
        table_text(out, d);
      }
      return 0;
    }
    if (*validate) {
      auto q = resolve_query(doc, query);
      auto e = parse_expr(estimand);
      auto rep = validate_estimand(doc.scm(scm), e, q);
      if (structured) {
        json skipped = json::array();
        for (const auto& b : rep.skipped) skipped.push_back(binding_json(b));
        out << json{{"max_error", to_string(rep.max_error)},
                    {"worst", binding_json(rep.worst)},
                    {"checked", rep.checked},
                    {"skipped", skipped}}
                   .dump(2)
            << "\n";
      } else {
        out << "max error: " << to_string(rep.max_error);
        if (rep.max_error != 0) out << " at " << binding_text(rep.worst);
        out << "\nchecked " << rep.checked << " bindings, skipped " << rep.skipped.size() << "\n";
      }
      return 0;
    }
    if (*check) {
      auto proof = parse_proof(read_file(proof_file));
      std::vector<Admg> graphs;
      std::vector<std::string> gnames;
      if (!graph.empty()) {
        graphs.push_back(doc.graph(graph));
        gnames.push_back(graph);
      } else {
        graphs = doc.collection(collection).graphs;
        gnames = doc.collection(collection).names;
      }
      auto rep = check_proof(proof, graphs);
      if (structured) {
        json j{{"ok", rep.ok}};
        if (!rep.ok) j.update({{"step", rep.step}, {"graph", gnames[rep.graph]}, {"condition", rep.condition}});
        out << j.dump(2) << "\n";
      } else if (rep.ok) {
        out << "proof ok\n";
      } else {
        out << "proof fails at step " << rep.step << " in graph " << gnames[rep.graph] << ": "
            << rep.condition << "\n";
      }
      return 0;
    }
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace cli
}  // namespace causalid
