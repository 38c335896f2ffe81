#pragma once

#include <string>
#include <vector>

#include "g2r/autodiff.hpp"
#include "g2r/graph.hpp"
#include "g2r/rng.hpp"
#include "g2r/tensor.hpp"

namespace g2r {

struct EncoderConfig {
  int k = 8;            // message-passing layers; one region scale per layer
  int d = 64;           // node embedding dim
  int D = 64;           // node region / relative position dim
  int out = 32;         // output region dim per scale
  int n_paths = 5;      // independent flow networks per node
  int path_len = 3;     // propagation steps per network
  int label_vocab = 1;  // node label dictionary size (1 when unlabeled)
  bool use_pe = true;     // add relative positions to node regions
  bool use_clamp = true;  // re-shift graph regions to the origin
  std::string backbone = "gin";

  void validate() const;
};

struct LinearParams {
  Tensor weight;  // [in, out]
  Tensor bias;    // [out]
};

// Two-layer perceptron: linear, relu, linear.
struct MlpParams {
  LinearParams l1, l2;
};

struct EncoderParams {
  LinearParams input;            // label one-hot -> d
  std::vector<MlpParams> layers;  // k node-update MLPs, d -> d -> d
  MlpParams region;               // node embedding -> node region, d -> D -> D
  MlpParams position;             // flow sequence -> position, n*j -> D -> D
  LinearParams projection;        // D -> out
};

// Per-graph random values seeding the flow networks, one column per
// network. Values within a column must be distinct or flow targets would
// be ambiguous.
struct SinkAssignment {
  Tensor values;  // [num_nodes, n_paths]

  SinkAssignment() = default;
  explicit SinkAssignment(Tensor v);
};

SinkAssignment sample_sink_assignment(int num_nodes, int n_paths,
                                      RngStream& rng);

// Assignment for every graph in a dataset, drawn from the named stream
// "assign/<index>" of the root seed so they are stable across runs.
std::vector<SinkAssignment> derive_assignments(
    const std::vector<Graph>& graphs, int n_paths, std::uint64_t root_seed);

// Runs each flow network independently for `path_len` steps: a node's value
// becomes the max over its neighbors' previous values (no self term), and a
// node without neighbors keeps its value. Row v of the result concatenates,
// network by network, the length-`path_len` sequence of v's landing points.
Tensor multi_sink_propagation(const Graph& g, const SinkAssignment& assign,
                              int path_len);

// Final multi-scale graph region.
struct GraphRegion {
  Tensor region;       // [k, out], strictly positive entries
  Tensor mean_region;  // [out], column mean of region
  int size = 0;        // |V| + |E| of the source graph
  int num_nodes = 0;
};

// On-tape mirrors for training.
struct LinearVars {
  Var weight, bias;
};
struct MlpVars {
  LinearVars l1, l2;
};
struct EncoderVars {
  LinearVars input;
  std::vector<MlpVars> layers;
  MlpVars region;
  MlpVars position;
  LinearVars projection;
};

struct RegionVars {
  Var region;       // [k, out]
  Var mean_region;  // [out]
  int size = 0;
  int num_nodes = 0;
};

EncoderVars lift(Tape& tape, const EncoderParams& params);

Var apply_linear(const LinearVars& p, Var x);
Var apply_mlp(const MlpVars& p, Var x);

// Multi-scale node embeddings: layer l output is
// MLP_l(x^{l-1} + sum of neighbor x^{l-1}) + x^{l-1}.
std::vector<Var> gin_forward(Tape& tape, const Graph& g, Var x0,
                             const std::vector<MlpVars>& layers);

// Whole encoding pipeline: node regions from the message-passing stack,
// relative positions from the flow sequences, sum pooling, re-shift to the
// origin, projection, softplus positivity.
RegionVars encode(Tape& tape, const Graph& g, const EncoderVars& params,
                  const EncoderConfig& cfg, const SinkAssignment& assign);

// Convenience wrapper running a throwaway tape.
GraphRegion encode(const Graph& g, const EncoderParams& params,
                   const EncoderConfig& cfg, const SinkAssignment& assign);

// Lifts a precomputed region onto a tape as constants.
RegionVars lift_region(Tape& tape, const GraphRegion& region);

}  // namespace g2r
