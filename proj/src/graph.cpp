#include "g2r/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace g2r {

Graph::Graph(int num_nodes, std::vector<std::pair<int, int>> edges,
             std::vector<int> node_labels)
    : num_nodes_(num_nodes), labels_(std::move(node_labels)) {
  if (num_nodes_ <= 0)
    throw std::invalid_argument("graph must have at least one node");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != num_nodes_)
    throw std::invalid_argument("label list length does not match node count");

  std::set<std::pair<int, int>> canonical;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= num_nodes_ || v < 0 || v >= num_nodes_)
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(u) + "," + std::to_string(v) +
                                  ")");
    if (u == v)
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    auto e = std::minmax(u, v);
    if (!canonical.insert({e.first, e.second}).second)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.first) +
                                  "," + std::to_string(e.second) + ")");
  }
  edges_.assign(canonical.begin(), canonical.end());

  adjacency_.assign(num_nodes_, {});
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

  if (bfs_reachable_count(num_nodes_, adjacency_, 0) != num_nodes_)
    throw std::invalid_argument("graph is not connected");
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes() == b.num_nodes() && a.edges() == b.edges() &&
         a.labels() == b.labels();
}

int bfs_reachable_count(int num_nodes,
                        const std::vector<std::vector<int>>& adjacency,
                        int start) {
  std::vector<char> seen(num_nodes, 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : adjacency[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        queue.push_back(u);
      }
    }
  }
  return count;
}

std::vector<int> inverse_permutation(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

Graph permute(const Graph& g, const std::vector<int>& perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permutation length does not match node count");
  std::vector<char> hit(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || hit[p])
      throw std::invalid_argument("not a permutation of node indices");
    hit[p] = 1;
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges().size());
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);

  std::vector<int> labels;
  if (g.labeled()) {
    labels.resize(n);
    for (int v = 0; v < n; ++v) labels[perm[v]] = g.label(v);
  }
  return Graph(n, std::move(edges), std::move(labels));
}

}  // namespace g2r
