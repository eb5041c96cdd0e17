#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "habit/model.hpp"

namespace habit {

/// Merged view of a set of predicted paths.
///
/// Nodes are merged by (rank, token): a token reached at the same depth by
/// several paths appears once. Merging can fuse distinct conditioning
/// contexts, so edges keep their identity as (from, to, context) — edges out
/// of a merged node are duplicated per distinct context, each labeled with
/// its own conditional probability. The first three paths (by rank) are the
/// highlighted ones.
struct TaskGraph {
  struct Node {
    std::uint32_t rank;  ///< absolute rank; prompt length for the root
    std::string token;   ///< empty for the root
    std::vector<std::size_t> terminal_paths;  ///< paths ending at this node
  };
  struct Edge {
    std::size_t from, to;               ///< node indices
    double prob;                        ///< conditional probability of the step
    std::vector<std::string> context;   ///< conditioning context (edge identity)
    std::vector<std::size_t> owners;    ///< paths traversing this edge, ascending
  };

  std::vector<std::string> prompt;
  std::vector<Node> nodes;  ///< nodes[0] is the root; the rest sorted by (rank, token)
  std::vector<Edge> edges;  ///< deterministically ordered
  std::vector<PathPrediction> paths;  ///< ranked predictions; index = path id
};

/// Predicts continuations of `prompt` and merges them into a TaskGraph.
/// An empty or unknown prompt result yields a root-only graph.
TaskGraph extract_task_graph(const Model& model, const std::vector<std::string>& prompt,
                             std::size_t max_paths = 16, double p_min = 0.001);

/// Renders the graph as a GraphViz digraph. Byte-deterministic for a given
/// graph: nodes ordered by (rank, token name), edges by (from, to, context).
/// Edge labels carry the conditional probability (2 decimals). The edges of
/// the `highlights` best paths (at most 3) are colored red/green/blue
/// respectively — an edge shared between highlight classes is emitted once
/// per class, so no single edge carries two colors — with a "(1)"/"(2)"/"(3)"
/// marker on each path's first edge; leaf nodes carry the path's joint
/// evidence as "(-N dB)".
std::string to_dot(const TaskGraph& graph, std::size_t highlights = 3);

}  // namespace habit
