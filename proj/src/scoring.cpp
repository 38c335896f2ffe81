#include "g2r/scoring.hpp"

#include <stdexcept>

namespace g2r {

namespace {

LinearVars lift_linear(Tape& tape, const LinearParams& p) {
  return LinearVars{tape.leaf(p.weight), tape.leaf(p.bias)};
}

double pair_size(const RegionVars& a, const RegionVars& b,
                 const ModelConfig& cfg) {
  if (cfg.size_metric == SizeMetric::kNodes)
    return (a.num_nodes + b.num_nodes) / 2.0;
  return (a.size + b.size) / 2.0;
}

void require_compatible(const RegionVars& a, const RegionVars& b,
                        const ModelConfig& cfg) {
  const Tensor& ra = a.region.tape->value(a.region);
  const Tensor& rb = b.region.tape->value(b.region);
  if (!ra.same_shape(rb) || ra.rows() != cfg.encoder.k ||
      ra.cols() != cfg.encoder.out)
    throw std::invalid_argument("regions disagree with the model config: " +
                                ra.shape_string() + " vs " +
                                rb.shape_string());
}

// MLP over the flattened [k, out] geometry, normalized by the mean size.
Var shape_score(Var geometry, const MlpVars& mlp, double mean_size,
                const ModelConfig& cfg) {
  Var flat =
      reshape(geometry, {1, cfg.encoder.k * cfg.encoder.out});
  Var raw = reshape(apply_mlp(mlp, flat), {1});
  return scale(raw, 1.0 / mean_size);
}

Var mean_volume(const RegionVars& a, const RegionVars& b) {
  return scale(add(volume(a.mean_region), volume(b.mean_region)), 0.5);
}

}  // namespace

ScoreVars lift(Tape& tape, const ScoreParams& params) {
  ScoreVars v;
  v.mcs_mlp = {lift_linear(tape, params.mcs_mlp.l1),
               lift_linear(tape, params.mcs_mlp.l2)};
  v.ged_mlp = {lift_linear(tape, params.ged_mlp.l1),
               lift_linear(tape, params.ged_mlp.l2)};
  v.alpha1 = tape.leaf(params.alpha1);
  v.beta1 = tape.leaf(params.beta1);
  v.alpha2 = tape.leaf(params.alpha2);
  v.beta2 = tape.leaf(params.beta2);
  v.gamma = tape.leaf(params.gamma);
  v.lambda = tape.leaf(params.lambda);
  return v;
}

Var inter(Var r1, Var r2) { return ewise_min(r1, r2); }

Var volume(Var r) { return prod_reduce(r); }

Var difference(Var r1, Var r2) {
  return sub(add(r1, r2), scale(inter(r1, r2), 2.0));
}

Var score_mcs(const RegionVars& a, const RegionVars& b, const ScoreVars& p,
              const ModelConfig& cfg) {
  require_compatible(a, b, cfg);
  Var shape = shape_score(inter(a.region, b.region), p.mcs_mlp,
                          pair_size(a, b, cfg), cfg);
  Var vol_ratio =
      div(volume(inter(a.mean_region, b.mean_region)), mean_volume(a, b));
  return add(mul(p.alpha1, shape), mul(p.beta1, vol_ratio));
}

Var score_ged(const RegionVars& a, const RegionVars& b, const ScoreVars& p,
              const ModelConfig& cfg) {
  require_compatible(a, b, cfg);
  const MlpVars& mlp = cfg.shared_mlp ? p.mcs_mlp : p.ged_mlp;
  Var shape = shape_score(difference(a.region, b.region), mlp,
                          pair_size(a, b, cfg), cfg);
  if (cfg.shared_mlp) shape = mul(p.lambda, shape);
  Var vol_ratio = mul(
      p.gamma,
      div(volume(difference(a.mean_region, b.mean_region)), mean_volume(a, b)));
  return add(mul(p.alpha2, shape), mul(p.beta2, exp_neg(vol_ratio)));
}

double score_mcs(const GraphRegion& a, const GraphRegion& b,
                 const ScoreParams& p, const ModelConfig& cfg) {
  Tape tape;
  Var s = score_mcs(lift_region(tape, a), lift_region(tape, b),
                    lift(tape, p), cfg);
  return tape.value(s).item();
}

double score_ged(const GraphRegion& a, const GraphRegion& b,
                 const ScoreParams& p, const ModelConfig& cfg) {
  Tape tape;
  Var s = score_ged(lift_region(tape, a), lift_region(tape, b),
                    lift(tape, p), cfg);
  return tape.value(s).item();
}

}  // namespace g2r
