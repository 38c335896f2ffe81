#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "g2r/rng.hpp"
#include "g2r/scoring.hpp"

namespace g2r {

enum class LossMode { kMcs, kGed, kDual, kDualUncertainty };

std::string loss_mode_name(LossMode mode);
LossMode loss_mode_from_name(const std::string& name);

// All learnable state: encoder weights, score heads, and the per-task
// log-variances of the uncertainty-weighted objective.
struct ModelParams {
  EncoderParams encoder;
  ScoreParams score;
  Tensor theta_mcs, theta_ged;  // scalars
};

struct ModelVars {
  EncoderVars encoder;
  ScoreVars score;
  Var theta_mcs, theta_ged;
};

// Weights ~ uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases 0, the
// score weights (alpha/beta/gamma/lambda) 1, thetas 0.
ModelParams init_model(const ModelConfig& cfg, RngStream& rng);

ModelVars lift(Tape& tape, const ModelParams& params);

// Named views over every parameter tensor, in one fixed order shared by
// var_entries so gradients line up positionally.
std::vector<std::pair<std::string, Tensor*>> param_entries(ModelParams& p);
std::vector<std::pair<std::string, const Tensor*>> param_entries(
    const ModelParams& p);
std::vector<Var> var_entries(const ModelVars& v);

// Parameter vector round-trips for finite-difference checks.
Tensor flatten_params(const ModelParams& p);
void unflatten_params(const Tensor& flat, ModelParams& p);

struct Checkpoint {
  ModelParams params;
  ModelConfig config;
  LossMode loss_mode = LossMode::kDual;
  std::uint64_t seed = 0;
  // Split geometry used in training, kept so evaluation can reproduce the
  // exact train/val/test partition.
  double train_fraction = 0.8;
  double val_fraction = 0.2;
};

// JSON checkpoint with named parameter arrays, the config block and a
// format-version field; doubles round-trip exactly.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace g2r
