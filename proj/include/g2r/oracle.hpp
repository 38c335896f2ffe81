#pragma once

#include <utility>
#include <vector>

#include "g2r/ged.hpp"
#include "g2r/graph.hpp"
#include "g2r/graph_io.hpp"
#include "g2r/mcs.hpp"

namespace g2r {

// |V1| + |V2| - 2*mcs_nodes: the edit distance when edges incident to
// inserted/deleted nodes are free and label substitution is disabled.
// `mcs_nodes` must be the exact maximum-common-subgraph node count; a
// negative result signals an inconsistent input and throws.
int bunke_ged(const Graph& g1, const Graph& g2, int mcs_nodes);

// |E1| + |E2| - 2*mcs_edges, the edge-count analogue over the disjoint
// parts. Throws on a negative result.
int phi(const Graph& g1, const Graph& g2, int mcs_edges);

// Upper-bound check: ged <= bunke_ged + phi.
bool check_prop2_bound(int ged, int bunke, int phi_val);

struct OracleOptions {
  McsOptions mcs;
  GedOptions ged;
  int threads = 1;
};

struct PairLabelReport {
  std::vector<PairLabel> labels;
  int skipped = 0;           // pairs dropped for budget/timeout
  int bound_violations = 0;  // pairs where ged > bunke + phi (must be 0)
};

// Exact-labels the requested pairs. Work is split over `threads` workers;
// each pair is independent and results keep the input order.
PairLabelReport label_pairs(const Dataset& ds,
                            const std::vector<std::pair<int, int>>& pairs,
                            const OracleOptions& opts = {});

}  // namespace g2r
