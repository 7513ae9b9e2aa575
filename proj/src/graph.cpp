#include "dothash/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dothash/error.hpp"
#include "dothash/random.hpp"

namespace dothash {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  std::vector<std::vector<ElementId>> lists(node_count);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.u == e.v) continue;
    lists[e.u].emplace_back(e.v);
    lists[e.v].emplace_back(e.u);
  }
  Graph g;
  g.adjacency_.reserve(node_count);
  std::size_t degree_sum = 0;
  for (auto& list : lists) {
    g.adjacency_.push_back(SortedSet::from_unsorted(std::move(list)));
    degree_sum += g.adjacency_.back().size();
  }
  g.edge_count_ = degree_sum / 2;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), ElementId{v});
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (ElementId x : adjacency_[u]) {
      if (x.value > u) out.push_back({u, static_cast<NodeId>(x.value)});
    }
  }
  return out;
}

LoadedGraph load_edge_list(std::istream& in) {
  LoadedGraph result;
  std::unordered_map<std::string, NodeId> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(result.labels.size()));
    if (inserted) result.labels.push_back(label);
    return it->second;
  };

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(std::move(t));
    if (parts.empty() || parts[0].front() == '#') continue;
    if (parts.size() != 2) {
      throw DataError("edge list line " + std::to_string(line_no) + ": expected 2 tokens, got " +
                      std::to_string(parts.size()));
    }
    const NodeId u = intern(parts[0]);
    const NodeId v = intern(parts[1]);
    if (u == v) {
      ++result.self_loops;
      continue;
    }
    const std::uint64_t key =
        (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    if (!seen.insert(key).second) {
      ++result.duplicate_edges;
      continue;
    }
    edges.push_back({u, v});
  }
  if (edges.empty()) throw DataError("graph has no edges");
  result.graph = Graph::from_edges(result.labels.size(), edges);
  return result;
}

LoadedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph erdos_renyi(std::size_t nodes, double edge_prob, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < nodes; ++u) {
    for (NodeId v = u + 1; v < nodes; ++v) {
      if (rng.bernoulli(edge_prob)) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(nodes, edges);
}

Graph barabasi_albert(std::size_t nodes, std::size_t m, std::uint64_t seed) {
  if (m == 0 || nodes <= m) throw std::invalid_argument("barabasi_albert requires 0 < m < nodes");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Every edge endpoint, so a uniform pick is degree-proportional.
  std::vector<NodeId> endpoints;
  for (NodeId u = 0; u <= m; ++u) {
    for (NodeId v = u + 1; v <= m; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (auto v = static_cast<NodeId>(m + 1); v < nodes; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(nodes, edges);
}

}  // namespace dothash
