#pragma once

#include "g2r/autodiff.hpp"
#include "g2r/encoder.hpp"
#include "g2r/tensor.hpp"

namespace g2r {

// Which graph size enters the shape-score denominator.
enum class SizeMetric { kNodesPlusEdges, kNodes };

struct ModelConfig {
  EncoderConfig encoder;
  int score_hidden = 16;  // hidden width of the score MLPs
  bool shared_mlp = false;
  SizeMetric size_metric = SizeMetric::kNodesPlusEdges;

  void validate() const { encoder.validate(); }
};

struct ScoreParams {
  MlpParams mcs_mlp;  // k*out -> hidden -> 1; the shared MLP when shared_mlp
  MlpParams ged_mlp;  // unused when shared_mlp
  Tensor alpha1, beta1;  // scalar weights of the MCS shape/volume scores
  Tensor alpha2, beta2;  // scalar weights of the GED shape/volume scores
  Tensor gamma;          // scales the GED volume ratio
  Tensor lambda;         // scales the shared-MLP GED shape score
};

struct ScoreVars {
  MlpVars mcs_mlp, ged_mlp;
  Var alpha1, beta1, alpha2, beta2, gamma, lambda;
};

ScoreVars lift(Tape& tape, const ScoreParams& params);

// Geometric operators on region tensors (any scale layout).
Var inter(Var r1, Var r2);                 // dimension-wise min
Var volume(Var r);                         // product of a rank-1 region
Var difference(Var r1, Var r2);            // r1 + r2 - 2*inter = |r1 - r2|

// alpha1 * MLP(concat of per-scale intersections) / mean size
//   + beta1 * Vol(inter of mean regions) / mean volume.
Var score_mcs(const RegionVars& a, const RegionVars& b, const ScoreVars& p,
              const ModelConfig& cfg);

// alpha2 * MLP(concat of per-scale differences) / mean size
//   + beta2 * exp(-gamma * Vol(difference of mean regions) / mean volume).
Var score_ged(const RegionVars& a, const RegionVars& b, const ScoreVars& p,
              const ModelConfig& cfg);

// Plain-value wrappers over a throwaway tape.
double score_mcs(const GraphRegion& a, const GraphRegion& b,
                 const ScoreParams& p, const ModelConfig& cfg);
double score_ged(const GraphRegion& a, const GraphRegion& b,
                 const ScoreParams& p, const ModelConfig& cfg);

}  // namespace g2r
