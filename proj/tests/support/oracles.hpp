#pragma once

// Independent brute-force references used only by tests. Everything here
// favors obvious correctness over speed and must stay decoupled from the
// library's solvers.

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "g2r/ged.hpp"
#include "g2r/graph.hpp"

namespace g2r::testing {

// Maximum (node_count, common_edge_count) over all connected common
// subgraphs: node subsets of g1 with a label-preserving injective map into
// g2 whose shared edges connect the subset. Enumerates every node subset
// and every map; practical for |V| <= 7.
std::pair<int, int> brute_mcs(const Graph& g1, const Graph& g2);

// Exact GED by breadth-first search over canonicalized graph states,
// bounded to max(|V1|, |V2|) nodes. Practical for |V| <= 5.
int brute_ged_bfs(const Graph& g1, const Graph& g2);

// Unvalidated mutable graph for replaying edit paths (intermediate states
// may be disconnected).
struct LightGraph {
  std::vector<int> labels;               // one per live node id
  std::vector<char> alive;               // id -> liveness
  std::set<std::pair<int, int>> edges;   // canonical u < v, both alive

  static LightGraph from(const Graph& g);
  int live_count() const;
};

// Applies one unit-cost edit; throws on an inapplicable op (e.g. deleting
// a node that still has incident edges).
void apply_edit(LightGraph& g, const EditOp& op);

// Backtracking isomorphism test on the live parts.
bool isomorphic(const LightGraph& a, const LightGraph& b);

// O(n^2) references for the rank metrics.
std::optional<double> naive_spearman(const std::vector<double>& x,
                                     const std::vector<double>& y);
std::optional<double> naive_kendall(const std::vector<double>& x,
                                    const std::vector<double>& y);

}  // namespace g2r::testing
