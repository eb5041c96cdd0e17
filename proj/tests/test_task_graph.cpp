#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "habit/model.hpp"
#include "habit/prob.hpp"
#include "habit/task_graph.hpp"
#include "support/corpora.hpp"
#include "support/dot_parser.hpp"

using habit::extract_task_graph;
using habit::Model;
using habit::ModelParams;
using habit::TaskGraph;
using habit::to_dot;
using testsupport::DotGraph;
using testsupport::label_lines;
using testsupport::parse_dot;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Model exact_corpus_model() {
  Model model(ModelParams{kInf, {}, 0.0});
  for (const auto& seq : testsupport::stationary_stream()) model.ingest(seq);
  return model;
}

/// DOT identifier the emitter uses for a node (mirrors its naming scheme).
std::string id_of(const TaskGraph::Node& node) {
  if (node.token.empty()) return "root";
  return "r" + std::to_string(node.rank) + "_" + node.token;
}

std::string prob_label(double p) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", p);
  return buf;
}

/// Indices of the edges path `p` traverses, root to leaf, following only its
/// own edges. Fails the test if the walk is ever ambiguous or stuck.
std::vector<std::size_t> own_edge_chain(const TaskGraph& graph, std::size_t p) {
  std::vector<std::size_t> chain;
  std::size_t at = 0;
  for (std::size_t step = 0; step < graph.paths[p].tokens.size(); ++step) {
    std::vector<std::size_t> candidates;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const TaskGraph::Edge& edge = graph.edges[e];
      if (edge.from == at &&
          std::find(edge.owners.begin(), edge.owners.end(), p) != edge.owners.end())
        candidates.push_back(e);
    }
    REQUIRE(candidates.size() == 1);  // exactly one owned way forward
    chain.push_back(candidates[0]);
    at = graph.edges[candidates[0]].to;
  }
  return chain;
}

}  // namespace

TEST_SUITE_BEGIN("task_graph");

// ---------------------------------------------------------------------------
// structure
// ---------------------------------------------------------------------------

TEST_CASE("an empty model yields a root-only graph") {
  Model model;
  TaskGraph graph = extract_task_graph(model, {});
  CHECK(graph.nodes.size() == 1);
  CHECK(graph.nodes[0].token.empty());
  CHECK(graph.edges.empty());
  CHECK(graph.paths.empty());

  DotGraph parsed = parse_dot(to_dot(graph));
  CHECK(parsed.nodes.size() == 1);
  CHECK(parsed.nodes.at("root").at("label") == "start");
  CHECK(parsed.edges.empty());
}

TEST_CASE("an unknown prompt token also yields a root-only graph") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {"9z"});
  CHECK(graph.nodes.size() == 1);
  CHECK(graph.paths.empty());
}

TEST_CASE("two diverging paths share their common prefix edges") {
  Model model(ModelParams{kInf, {}, 0.0});
  for (int i = 0; i < 3; ++i) model.ingest({"a", "b", "c"});
  model.ingest({"a", "b", "d"});

  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  REQUIRE(graph.paths.size() == 2);
  CHECK(graph.paths[0].tokens == std::vector<std::string>{"a", "b", "c"});
  CHECK(graph.nodes.size() == 5);  // root, a, b, c, d
  REQUIRE(graph.edges.size() == 4);

  for (const TaskGraph::Edge& edge : graph.edges) {
    if (graph.nodes[edge.to].token == "c") CHECK(edge.owners == std::vector<std::size_t>{0});
    if (graph.nodes[edge.to].token == "d") CHECK(edge.owners == std::vector<std::size_t>{1});
    if (graph.nodes[edge.to].token == "b")
      CHECK(edge.owners == std::vector<std::size_t>{0, 1});  // shared prefix
  }
}

TEST_CASE("nodes merge by rank and token; edges keep their context identity") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  REQUIRE(graph.paths.size() == 8);
  CHECK(graph.nodes.size() == 15);  // root + 14 distinct (rank, token) pairs

  std::set<std::pair<std::uint32_t, std::string>> seen;
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    CHECK(seen.insert({graph.nodes[i].rank, graph.nodes[i].token}).second);
    CHECK(model.vocab().find(graph.nodes[i].token).has_value());
    if (i > 1) {
      auto a = std::make_pair(graph.nodes[i - 1].rank, graph.nodes[i - 1].token);
      auto b = std::make_pair(graph.nodes[i].rank, graph.nodes[i].token);
      CHECK(a < b);  // sorted after the root
    }
  }

  // "3b 4b" appears under the prefixes "1a 2a", "1a 2b", and "1b 2b": one
  // merged node, three parallel edges with distinct contexts.
  std::size_t to_4b = 0;
  for (std::size_t i = 1; i < graph.nodes.size(); ++i)
    if (graph.nodes[i].rank == 4 && graph.nodes[i].token == "4b") to_4b = i;
  REQUIRE(to_4b != 0);
  std::set<std::vector<std::string>> contexts_into_4b;
  for (const TaskGraph::Edge& edge : graph.edges)
    if (edge.to == to_4b && graph.nodes[edge.from].token == "3b")
      CHECK(contexts_into_4b.insert(edge.context).second);
  CHECK(contexts_into_4b.size() == 3);
  CHECK(contexts_into_4b.count({"1a", "2a", "3b"}) == 1);
  CHECK(contexts_into_4b.count({"1a", "2b", "3b"}) == 1);
  CHECK(contexts_into_4b.count({"1b", "2b", "3b"}) == 1);
}

TEST_CASE("every edge probability is one of its owners' step probabilities") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  for (const TaskGraph::Edge& edge : graph.edges) {
    REQUIRE_FALSE(edge.owners.empty());
    CHECK(std::is_sorted(edge.owners.begin(), edge.owners.end()));
    std::size_t step = graph.nodes[edge.to].rank - static_cast<std::uint32_t>(1);
    for (std::size_t owner : edge.owners) {
      REQUIRE(step < graph.paths[owner].step_probs.size());
      CHECK(edge.prob == graph.paths[owner].step_probs[step]);
    }
  }
}

TEST_CASE("root-to-leaf traversal along owned edges reproduces the predictions") {
  Model model = exact_corpus_model();
  for (const std::vector<std::string>& prompt :
       {std::vector<std::string>{}, std::vector<std::string>{"1a"},
        std::vector<std::string>{"1c", "2b"}}) {
    TaskGraph graph = extract_task_graph(model, prompt, 16, 0.0);
    auto predicted = model.predict(prompt, 16, 0.0);
    REQUIRE(graph.paths.size() == predicted.size());

    for (std::size_t p = 0; p < graph.paths.size(); ++p) {
      std::vector<std::size_t> chain = own_edge_chain(graph, p);
      std::vector<std::string> walked;
      double product = 1.0;
      for (std::size_t e : chain) {
        walked.push_back(graph.nodes[graph.edges[e].to].token);
        product *= graph.edges[e].prob;
      }
      CHECK(walked == predicted[p].tokens);
      CHECK(product == doctest::Approx(predicted[p].joint).epsilon(1e-9));
      // The walk ends at a node that records this path as terminal.
      const TaskGraph::Node& leaf = graph.nodes[graph.edges[chain.back()].to];
      CHECK(std::find(leaf.terminal_paths.begin(), leaf.terminal_paths.end(), p) !=
            leaf.terminal_paths.end());
    }
  }
}

// ---------------------------------------------------------------------------
// DOT rendering
// ---------------------------------------------------------------------------

TEST_CASE("the rendering parses and declares exactly the graph's nodes") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));

  CHECK(parsed.name == "task_model");
  CHECK(parsed.graph_attrs.at("rankdir") == "LR");
  CHECK(parsed.node_defaults.at("shape") == "box");
  REQUIRE(parsed.nodes.size() == graph.nodes.size());
  CHECK(parsed.nodes.count("root") == 1);
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {  // nodes[0] is labelled "start"
    const TaskGraph::Node& node = graph.nodes[i];
    REQUIRE(parsed.nodes.count(id_of(node)) == 1);
    CHECK(label_lines(parsed.nodes.at(id_of(node)).at("label"))[0] == node.token);
  }
}

TEST_CASE("leaf labels carry the joint evidence of each terminating path") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));

  for (const TaskGraph::Node& node : graph.nodes) {
    auto lines = label_lines(parsed.nodes.at(id_of(node)).at("label"));
    REQUIRE(lines.size() == 1 + node.terminal_paths.size());
    for (std::size_t i = 0; i < node.terminal_paths.size(); ++i) {
      char expected[32];
      std::snprintf(expected, sizeof expected, "(%d dB)",
                    habit::display_db(graph.paths[node.terminal_paths[i]].evidence));
      CHECK(lines[1 + i] == expected);
    }
  }
}

TEST_CASE("the top three paths are colored red, green, blue with rank markers") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));
  const char* colors[3] = {"red", "green", "blue"};

  for (std::size_t p = 0; p < 3; ++p) {
    std::vector<std::size_t> chain = own_edge_chain(graph, p);
    std::size_t found = 0;
    for (std::size_t e : chain) {
      const TaskGraph::Edge& edge = graph.edges[e];
      std::string expected_label = prob_label(edge.prob);
      if (edge.from == 0) expected_label = "(" + std::to_string(p + 1) + ") " + expected_label;
      for (const testsupport::DotEdge& de : parsed.edges) {
        if (de.from == id_of(graph.nodes[edge.from]) && de.to == id_of(graph.nodes[edge.to]) &&
            de.attrs.count("color") && de.attrs.at("color") == colors[p] &&
            de.attrs.at("label") == expected_label) {
          CHECK(de.attrs.at("fontcolor") == colors[p]);
          CHECK(de.attrs.at("penwidth") == "2");
          ++found;
        }
      }
    }
    CHECK(found == chain.size());  // the full chain is drawn in this path's color
  }

  // Rank markers appear exactly once each, only on root-origin edges.
  for (std::size_t p = 0; p < 3; ++p) {
    std::string marker = "(" + std::to_string(p + 1) + ") ";
    std::size_t occurrences = 0;
    for (const testsupport::DotEdge& de : parsed.edges)
      if (de.attrs.count("label") && de.attrs.at("label").rfind(marker, 0) == 0) {
        CHECK(de.from == "root");
        ++occurrences;
      }
    CHECK(occurrences == 1);
  }

  // No single DOT edge statement carries two colors: parallel copies instead.
  for (const testsupport::DotEdge& de : parsed.edges)
    if (de.attrs.count("color")) CHECK(de.attrs.count("fontcolor") == 1);
}

TEST_CASE("unhighlighted paths get plain parallel copies") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));

  std::size_t expected = 0;
  for (const TaskGraph::Edge& edge : graph.edges) {
    std::set<std::size_t> classes;
    bool plain = false;
    for (std::size_t owner : edge.owners) {
      if (owner < 3)
        classes.insert(owner);
      else
        plain = true;
    }
    expected += classes.size() + (plain ? 1 : 0);
  }
  CHECK(parsed.edges.size() == expected);
}

TEST_CASE("the number of highlighted paths is adjustable up to three") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);

  std::string none = to_dot(graph, 0);
  CHECK(none.find("color=") == std::string::npos);
  CHECK(parse_dot(none).edges.size() == graph.edges.size());

  std::string one = to_dot(graph, 1);
  CHECK(one.find("color=red") != std::string::npos);
  CHECK(one.find("color=green") == std::string::npos);

  CHECK(to_dot(graph, 7) == to_dot(graph, 3));  // clamped
  CHECK(to_dot(graph, 3) == to_dot(graph));
}

TEST_CASE("prompted graphs show the prompt at the root") {
  Model model = exact_corpus_model();
  TaskGraph graph = extract_task_graph(model, {"1c", "2b"}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));
  CHECK(label_lines(parsed.nodes.at("root").at("label"))[0] == "1c 2b");
  CHECK(graph.nodes[0].rank == 2);
}

TEST_CASE("token text survives DOT quoting and unquoting") {
  Model model(ModelParams{kInf, {}, 0.0});
  model.ingest({"he\"llo", "back\\slash", "tricky{;}"});
  TaskGraph graph = extract_task_graph(model, {}, 16, 0.0);
  DotGraph parsed = parse_dot(to_dot(graph));

  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    REQUIRE(parsed.nodes.count(id_of(graph.nodes[i])) == 1);
    auto lines = label_lines(parsed.nodes.at(id_of(graph.nodes[i])).at("label"));
    CHECK(lines[0] == graph.nodes[i].token);
  }
}

TEST_CASE("rendering is byte-deterministic") {
  Model model = exact_corpus_model();
  std::string a = to_dot(extract_task_graph(model, {}, 16, 0.0));
  std::string b = to_dot(extract_task_graph(model, {}, 16, 0.0));
  CHECK(a == b);
}

TEST_SUITE_END();
