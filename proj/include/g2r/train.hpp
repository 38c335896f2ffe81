#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "g2r/graph_io.hpp"
#include "g2r/model.hpp"

namespace g2r {

struct TrainConfig {
  double lr = 0.001;
  int batch_size = 128;
  int iters_per_epoch = 100;
  int warmup_epochs = 50;   // epochs before the first validation
  int validate_every = 20;  // epochs between validations
  int patience = 50;        // consecutive non-improving validations allowed
  int max_epochs = 1000;
  double max_wall_clock_sec = 0.0;  // 0 = unlimited
  LossMode loss_mode = LossMode::kDual;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;        // train : test = 4 : 1
  double val_fraction_of_train = 0.2;

  void validate() const;
};

Var dual_loss(Var l_mcs, Var l_ged);

// Sum over tasks of (exp(-theta) * loss + theta) / 2; gradients flow into
// the thetas.
Var uncertainty_loss(Var l_mcs, Var l_ged, Var theta_mcs, Var theta_ged);

struct AdamState {
  std::vector<Tensor> m, v;
  long long t = 0;
};

// Standard Adam step with bias correction; `state` is created lazily on
// the first call and must keep matching the parameter list.
void adam_step(const std::vector<Tensor*>& params,
               const std::vector<Tensor>& grads, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct SplitIndices {
  std::vector<int> train, val, test;
};

// Deterministic shuffle-split of [0, n) by the "split" stream of `seed`.
SplitIndices split_pairs(int n, double train_fraction,
                         double val_fraction_of_train, std::uint64_t seed);

struct PairPredictions {
  std::vector<double> mcs, ged;
};

// Scores labels[subset] with each distinct graph encoded once.
PairPredictions predict_pairs(const Dataset& ds,
                              const std::vector<SinkAssignment>& assigns,
                              const ModelParams& params, const ModelConfig& mc,
                              const std::vector<PairLabel>& labels,
                              const std::vector<int>& subset);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  bool validated = false;
  double val_loss = 0.0;
  double theta_mcs = 0.0;
  double theta_ged = 0.0;
};

struct TrainResult {
  ModelParams best;  // parameters at the best validation seen
  double best_val_loss = 0.0;
  std::vector<EpochRecord> history;
  SplitIndices split;
  bool early_stopped = false;
  bool hit_wall_clock = false;
};

// Minibatch Adam over uniformly resampled training pairs. Validates on
// schedule after the warm-up, early-stops after `patience` consecutive
// non-improving validations, and returns the best-validation parameters.
// Deterministic given (labels, configs, seed).
TrainResult train(const Dataset& ds, const std::vector<PairLabel>& labels,
                  const ModelConfig& mc, const TrainConfig& tc);

void save_history_csv(const std::vector<EpochRecord>& history,
                      const std::string& path);

// Flat "key = value" config file mirroring ModelConfig and TrainConfig
// fields; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(const std::map<std::string, std::string>& kv,
                  ModelConfig& mc, TrainConfig& tc);

}  // namespace g2r
