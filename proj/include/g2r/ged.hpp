#pragma once

#include <vector>

#include "g2r/graph.hpp"
#include "g2r/mcs.hpp"  // BudgetExceeded, SolveTimeout

namespace g2r {

struct GedOptions {
  int max_nodes = 10;        // budget on max(|V1|, |V2|)
  double timeout_sec = 60.0;  // 0 disables the deadline
};

// One unit-cost edit. Node ids refer to g1's numbering during replay;
// inserted nodes take fresh ids starting at g1.num_nodes() in insertion
// order. Edges incident to a node must be deleted before the node itself.
struct EditOp {
  enum Kind { kDeleteEdge, kDeleteNode, kRelabel, kInsertNode, kInsertEdge };
  Kind kind;
  int u = -1;
  int v = -1;     // second endpoint for edge ops
  int label = 0;  // new label for kRelabel / kInsertNode
};

struct GedResult {
  int cost = 0;
  // Ordered edit sequence transforming g1 into a graph isomorphic to g2;
  // its length equals cost (all operations are unit cost).
  std::vector<EditOp> edit_path;
};

// Exact graph edit distance under unit costs for node/edge insertion,
// deletion and label substitution. Best-first search over partial node
// assignments with an admissible label-count/edge-count lower bound.
GedResult ged_exact(const Graph& g1, const Graph& g2,
                    const GedOptions& opts = {});

}  // namespace g2r
