#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "g2r/graph.hpp"

namespace g2r {

// Raised when an exact solve is asked for graphs beyond the configured node
// budget. Callers may retry with a larger budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an exact solve exceeds its wall-clock limit; the message
// carries the elapsed time.
struct SolveTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct McsOptions {
  int max_nodes = 16;        // budget on max(|V1|, |V2|)
  double timeout_sec = 60.0;  // 0 disables the deadline
};

// Maximum common connected subgraph: the largest connected graph that maps
// into both inputs label- and edge-preserving (images may carry extra
// edges). Among solutions with maximal node count the solver keeps one
// with the most common edges.
struct McsResult {
  int node_count = 0;
  int edge_count = 0;
  // Matched (node-in-g1, node-in-g2) pairs, injective in both coordinates.
  std::vector<std::pair<int, int>> mapping;
};

// Exact branch and bound over compatible vertex pairs with a label-class
// matching bound. Both graphs must be labeled or both unlabeled.
McsResult mcs_exact(const Graph& g1, const Graph& g2,
                    const McsOptions& opts = {});

}  // namespace g2r
