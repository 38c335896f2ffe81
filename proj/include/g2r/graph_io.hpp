#pragma once

#include <optional>
#include <string>
#include <vector>

#include "g2r/graph.hpp"

namespace g2r {

// A dataset is a list of graphs indexed by position plus the label
// dictionary that interns string labels to dense ids. Unlabeled datasets
// have an empty dictionary.
struct Dataset {
  std::vector<Graph> graphs;
  std::vector<std::string> label_names;

  bool labeled() const { return !label_names.empty(); }
  int label_vocab() const {
    return labeled() ? static_cast<int>(label_names.size()) : 1;
  }
};

// Ground truth for one graph pair. The normalized targets are derived from
// the stored counts at load time, so the on-disk record stays integral.
struct PairLabel {
  int a = 0;
  int b = 0;
  int mcs_nodes = 0;
  int mcs_edges = 0;
  int ged = 0;
  double nmcs = 0.0;  // in [0, 1]
  double nged = 0.0;  // in (0, 1]
};

// Single-graph JSON object: {"nodes": <count> | ["labelA", ...],
// "edges": [[u,v], ...]}. A dataset file holds one such object per line.
Graph parse_graph_json(const std::string& text,
                       std::vector<std::string>* label_dict);
std::string graph_to_json(const Graph& g,
                          const std::vector<std::string>& label_names);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& ds, const std::string& path);

// Pair-label JSON lines: {"a":i,"b":j,"mcs_nodes":m,"mcs_edges":e,"ged":d}.
// Loading recomputes nmcs/nged from the dataset and validates the counts
// against the referenced graphs.
std::vector<PairLabel> load_pair_labels(const std::string& path,
                                        const Dataset& ds);
void save_pair_labels(const std::vector<PairLabel>& labels,
                      const std::string& path);

// Normalized targets shared by the oracle and the label loader.
double nmcs_target(const Graph& g1, const Graph& g2, int mcs_nodes);
double nged_target(const Graph& g1, const Graph& g2, int ged);

}  // namespace g2r
