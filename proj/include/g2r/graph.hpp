#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace g2r {

// Undirected connected graph with 0-based dense node indices and optional
// categorical node labels (interned ids against a dataset-level dictionary).
// Instances are immutable once constructed; the constructor rejects
// self-loops, duplicate edges, out-of-range endpoints and disconnected
// inputs, so downstream code never re-validates.
class Graph {
 public:
  Graph(int num_nodes, std::vector<std::pair<int, int>> edges,
        std::vector<int> node_labels = {});

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  // |V| + |E|.
  int cardinality() const { return num_nodes_ + num_edges(); }

  // Canonical edge list: u < v, sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool labeled() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }
  int label(int v) const { return labels_.empty() ? 0 : labels_[v]; }

  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool has_edge(int u, int v) const;

 private:
  int num_nodes_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> labels_;
  std::vector<std::vector<int>> adjacency_;
};

bool operator==(const Graph& a, const Graph& b);

// Number of nodes reachable from `start` by breadth-first traversal over an
// adjacency structure; the Graph constructor uses this for the
// connectivity check and tests use it to assert the invariant directly.
int bfs_reachable_count(int num_nodes,
                        const std::vector<std::vector<int>>& adjacency,
                        int start);

// Relabels nodes: node v of `g` becomes node perm[v]. Throws if `perm` is
// not a permutation of [0, num_nodes).
Graph permute(const Graph& g, const std::vector<int>& perm);

std::vector<int> inverse_permutation(const std::vector<int>& perm);

}  // namespace g2r
