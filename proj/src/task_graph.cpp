#include "habit/task_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

#include "habit/prob.hpp"

namespace habit {

TaskGraph extract_task_graph(const Model& model, const std::vector<std::string>& prompt,
                             std::size_t max_paths, double p_min) {
  TaskGraph graph;
  graph.prompt = prompt;
  graph.paths = model.predict(prompt, max_paths, p_min);

  std::uint32_t root_rank = static_cast<std::uint32_t>(prompt.size());
  graph.nodes.push_back({root_rank, "", {}});

  // Merge nodes by (rank, token); collect them sorted for stable indices.
  std::map<std::pair<std::uint32_t, std::string>, std::size_t> node_index;
  for (const PathPrediction& path : graph.paths)
    for (std::size_t i = 0; i < path.tokens.size(); ++i)
      node_index.emplace(
          std::make_pair(root_rank + static_cast<std::uint32_t>(i) + 1, path.tokens[i]), 0);
  for (auto& [key, index] : node_index) {
    index = graph.nodes.size();
    graph.nodes.push_back({key.first, key.second, {}});
  }

  // Edge identity is (from, to, conditioning context): a merged node fans out
  // through one edge per distinct context, each with its own probability.
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::string>>, std::size_t> edge_index;
  std::size_t order = model.params().order ? *model.params().order : ~std::size_t{0};
  for (std::size_t p = 0; p < graph.paths.size(); ++p) {
    const PathPrediction& path = graph.paths[p];
    std::vector<std::string> full(prompt);
    full.insert(full.end(), path.tokens.begin(), path.tokens.end());

    std::size_t from = 0;  // root
    for (std::size_t i = 0; i < path.tokens.size(); ++i) {
      std::size_t prefix_len = prompt.size() + i;
      std::size_t context_len = std::min(order, prefix_len);
      std::vector<std::string> context(full.begin() + (prefix_len - context_len),
                                       full.begin() + prefix_len);
      std::size_t to = node_index.at(
          {root_rank + static_cast<std::uint32_t>(i) + 1, path.tokens[i]});

      auto key = std::make_tuple(from, to, std::move(context));
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        it = edge_index.emplace(std::move(key), graph.edges.size()).first;
        graph.edges.push_back(
            {from, to, path.step_probs[i], std::get<2>(it->first), {}});
      }
      graph.edges[it->second].owners.push_back(p);
      from = to;
    }
    graph.nodes[from].terminal_paths.push_back(p);
  }

  // Emit edges in a stable order: by source node, target node, then context
  // (node indices already follow (rank, token) order).
  std::vector<TaskGraph::Edge> sorted;
  sorted.reserve(graph.edges.size());
  for (const auto& [key, index] : edge_index) sorted.push_back(std::move(graph.edges[index]));
  graph.edges = std::move(sorted);
  return graph;
}

namespace {

// Escapes token text for use inside a DOT double-quoted string. Kept separate
// from quoting so labels can mix escaped tokens with raw directives like \n.
std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string quote(std::string_view s) { return "\"" + escape(s) + "\""; }

std::string node_id(const TaskGraph::Node& node) {
  if (node.token.empty()) return "root";
  return "r" + std::to_string(node.rank) + "_" + node.token;
}

std::string fmt_prob(double p) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", p);
  return buf;
}

constexpr const char* kHighlightColors[3] = {"red", "green", "blue"};

}  // namespace

std::string to_dot(const TaskGraph& graph, std::size_t highlights) {
  std::string out = "digraph task_model {\n  rankdir=LR;\n  node [shape=box];\n";

  for (const TaskGraph::Node& node : graph.nodes) {
    std::string label = escape(node.token);
    if (node.token.empty()) {  // root: show the prompt, or a plain start marker
      for (const std::string& token : graph.prompt) {
        if (!label.empty()) label += ' ';
        label += escape(token);
      }
      if (label.empty()) label = "start";
    }
    for (std::size_t p : node.terminal_paths) {
      char buf[32];  // \n is a GraphViz line break, kept unescaped
      std::snprintf(buf, sizeof buf, "\\n(%d dB)", display_db(graph.paths[p].evidence));
      label += buf;
    }
    out += "  " + quote(node_id(node)) + " [label=\"" + label + "\"];\n";
  }

  std::size_t highlighted =
      std::min({graph.paths.size(), highlights, std::size_t{3}});
  for (const TaskGraph::Edge& edge : graph.edges) {
    // Partition the owning paths into highlight classes; one DOT edge per
    // class so parallel copies keep distinct colors.
    bool any_plain = false;
    for (std::size_t owner : edge.owners)
      if (owner >= highlighted) any_plain = true;

    const std::string from = quote(node_id(graph.nodes[edge.from]));
    const std::string to = quote(node_id(graph.nodes[edge.to]));
    for (std::size_t owner : edge.owners) {
      if (owner >= highlighted) continue;
      std::string label = fmt_prob(edge.prob);
      if (edge.from == 0)  // the path's first edge carries its rank marker
        label = "(" + std::to_string(owner + 1) + ") " + label;
      out += "  " + from + " -> " + to + " [label=" + quote(label) + ", color=" +
             kHighlightColors[owner] + ", fontcolor=" + kHighlightColors[owner] +
             ", penwidth=2];\n";
    }
    if (any_plain)
      out += "  " + from + " -> " + to + " [label=" + quote(fmt_prob(edge.prob)) + "];\n";
  }

  out += "}\n";
  return out;
}

}  // namespace habit
