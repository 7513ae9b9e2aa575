#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dothash/exact.hpp"

namespace dothash {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Node v's neighborhood is a SortedSet of
/// ElementId{neighbor index}.
class Graph {
 public:
  Graph() = default;
  /// Symmetrizes, drops self-loops and parallel edges.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  const SortedSet& neighbors(NodeId v) const { return adjacency_.at(v); }
  bool has_edge(NodeId u, NodeId v) const;
  /// Each undirected edge once, with u < v, in ascending order.
  std::vector<Edge> edges() const;

 private:
  std::vector<SortedSet> adjacency_;
  std::size_t edge_count_ = 0;
};

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> labels;  // labels[node index]
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;
};

/// Whitespace-separated "u v" lines; '#' starts a comment line. Labels are
/// mapped to dense indices in order of first appearance.
LoadedGraph load_edge_list(std::istream& in);
LoadedGraph load_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const Graph& graph);

Graph erdos_renyi(std::size_t nodes, double edge_prob, std::uint64_t seed);
/// Preferential attachment: starts from a clique on m + 1 nodes, each new
/// node links to m distinct existing nodes chosen proportionally to degree.
Graph barabasi_albert(std::size_t nodes, std::size_t m, std::uint64_t seed);

}  // namespace dothash
