#include "g2r/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace g2r {

namespace {

using Clock = std::chrono::steady_clock;

double now_sec(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Encodes every distinct graph referenced by the batch once.
std::unordered_map<int, RegionVars> encode_batch(
    Tape& tape, const Dataset& ds, const std::vector<SinkAssignment>& assigns,
    const EncoderVars& enc, const ModelConfig& mc,
    const std::vector<const PairLabel*>& batch) {
  std::unordered_map<int, RegionVars> regions;
  for (const PairLabel* pl : batch) {
    for (int id : {pl->a, pl->b}) {
      if (!regions.count(id))
        regions.emplace(id, encode(tape, ds.graphs[id], enc, mc.encoder,
                                   assigns[id]));
    }
  }
  return regions;
}

}  // namespace

void TrainConfig::validate() const {
  if (lr <= 0 || batch_size < 1 || iters_per_epoch < 1 || warmup_epochs < 0 ||
      validate_every < 1 || patience < 1 || max_epochs < 1)
    throw std::invalid_argument("train config values must be positive");
  if (train_fraction <= 0 || train_fraction >= 1 ||
      val_fraction_of_train <= 0 || val_fraction_of_train >= 1)
    throw std::invalid_argument("split fractions must be in (0, 1)");
}

Var dual_loss(Var l_mcs, Var l_ged) { return add(l_mcs, l_ged); }

Var uncertainty_loss(Var l_mcs, Var l_ged, Var theta_mcs, Var theta_ged) {
  Var term_mcs = scale(add(mul(exp_neg(theta_mcs), l_mcs), theta_mcs), 0.5);
  Var term_ged = scale(add(mul(exp_neg(theta_ged), l_ged), theta_ged), 0.5);
  return add(term_mcs, term_ged);
}

void adam_step(const std::vector<Tensor*>& params,
               const std::vector<Tensor>& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
  if (params.size() != grads.size())
    throw std::invalid_argument("adam_step: parameter/gradient count mismatch");
  if (state.m.empty()) {
    for (Tensor* p : params) {
      state.m.push_back(Tensor::zeros(p->shape()));
      state.v.push_back(Tensor::zeros(p->shape()));
    }
  }
  if (state.m.size() != params.size())
    throw std::invalid_argument("adam_step: state does not match parameters");
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = grads[i];
    if (!p.same_shape(g))
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
      v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

SplitIndices split_pairs(int n, double train_fraction,
                         double val_fraction_of_train, std::uint64_t seed) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  RngStream rng = named_stream(seed, "split");
  for (int i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.uniform_int(0, i)]);

  const int n_train_total = static_cast<int>(n * train_fraction);
  const int n_val = static_cast<int>(n_train_total * val_fraction_of_train);
  SplitIndices split;
  split.train.assign(idx.begin(), idx.begin() + (n_train_total - n_val));
  split.val.assign(idx.begin() + (n_train_total - n_val),
                   idx.begin() + n_train_total);
  split.test.assign(idx.begin() + n_train_total, idx.end());
  return split;
}

PairPredictions predict_pairs(const Dataset& ds,
                              const std::vector<SinkAssignment>& assigns,
                              const ModelParams& params, const ModelConfig& mc,
                              const std::vector<PairLabel>& labels,
                              const std::vector<int>& subset) {
  std::unordered_map<int, GraphRegion> regions;
  for (int i : subset) {
    for (int id : {labels[i].a, labels[i].b}) {
      if (!regions.count(id))
        regions.emplace(id, encode(ds.graphs[id], params.encoder, mc.encoder,
                                   assigns[id]));
    }
  }
  PairPredictions preds;
  preds.mcs.reserve(subset.size());
  preds.ged.reserve(subset.size());
  for (int i : subset) {
    const GraphRegion& ra = regions.at(labels[i].a);
    const GraphRegion& rb = regions.at(labels[i].b);
    preds.mcs.push_back(score_mcs(ra, rb, params.score, mc));
    preds.ged.push_back(score_ged(ra, rb, params.score, mc));
  }
  return preds;
}

namespace {

double validation_loss(const Dataset& ds,
                       const std::vector<SinkAssignment>& assigns,
                       const ModelParams& params, const ModelConfig& mc,
                       const std::vector<PairLabel>& labels,
                       const std::vector<int>& val_idx, LossMode mode) {
  PairPredictions preds = predict_pairs(ds, assigns, params, mc, labels,
                                        val_idx);
  double mse_mcs = 0.0, mse_ged = 0.0;
  for (std::size_t i = 0; i < val_idx.size(); ++i) {
    const PairLabel& pl = labels[val_idx[i]];
    const double dm = preds.mcs[i] - pl.nmcs;
    const double dg = preds.ged[i] - pl.nged;
    mse_mcs += dm * dm;
    mse_ged += dg * dg;
  }
  mse_mcs /= static_cast<double>(val_idx.size());
  mse_ged /= static_cast<double>(val_idx.size());
  switch (mode) {
    case LossMode::kMcs: return mse_mcs;
    case LossMode::kGed: return mse_ged;
    default: return mse_mcs + mse_ged;  // theta-free composite
  }
}

}  // namespace

TrainResult train(const Dataset& ds, const std::vector<PairLabel>& labels,
                  const ModelConfig& mc, const TrainConfig& tc) {
  mc.validate();
  tc.validate();

  SplitIndices split = split_pairs(static_cast<int>(labels.size()),
                                   tc.train_fraction, tc.val_fraction_of_train,
                                   tc.seed);
  if (split.train.empty() || split.val.empty() || split.test.empty())
    throw std::invalid_argument("dataset too small to split: " +
                                std::to_string(labels.size()) + " pairs");

  std::vector<SinkAssignment> assigns =
      derive_assignments(ds.graphs, mc.encoder.n_paths, tc.seed);
  RngStream init_rng = named_stream(tc.seed, "init");
  ModelParams params = init_model(mc, init_rng);
  RngStream batch_rng = named_stream(tc.seed, "batch");

  AdamState adam;
  TrainResult result;
  result.split = split;
  result.best = params;
  result.best_val_loss = std::numeric_limits<double>::infinity();

  const bool need_mcs =
      tc.loss_mode != LossMode::kGed;  // mcs, dual, dual_uncertainty
  const bool need_ged = tc.loss_mode != LossMode::kMcs;

  auto start = Clock::now();
  int stale_validations = 0;

  for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
    double epoch_loss = 0.0;
    int iters_done = 0;
    for (int iter = 0; iter < tc.iters_per_epoch; ++iter) {
      std::vector<const PairLabel*> batch;
      batch.reserve(tc.batch_size);
      for (int b = 0; b < tc.batch_size; ++b) {
        const int pick = static_cast<int>(batch_rng.uniform_int(
            0, static_cast<std::int64_t>(split.train.size()) - 1));
        batch.push_back(&labels[split.train[pick]]);
      }

      double loss_value = 0.0;
      try {
        Tape tape;
        ModelVars mv = lift(tape, params);
        auto regions = encode_batch(tape, ds, assigns, mv.encoder, mc, batch);

        std::vector<Var> preds_mcs, preds_ged;
        std::vector<double> targets_mcs, targets_ged;
        for (const PairLabel* pl : batch) {
          const RegionVars& ra = regions.at(pl->a);
          const RegionVars& rb = regions.at(pl->b);
          if (need_mcs) {
            preds_mcs.push_back(score_mcs(ra, rb, mv.score, mc));
            targets_mcs.push_back(pl->nmcs);
          }
          if (need_ged) {
            preds_ged.push_back(score_ged(ra, rb, mv.score, mc));
            targets_ged.push_back(pl->nged);
          }
        }

        Var loss;
        switch (tc.loss_mode) {
          case LossMode::kMcs:
            loss = mse_loss(preds_mcs, targets_mcs);
            break;
          case LossMode::kGed:
            loss = mse_loss(preds_ged, targets_ged);
            break;
          case LossMode::kDual:
            loss = dual_loss(mse_loss(preds_mcs, targets_mcs),
                             mse_loss(preds_ged, targets_ged));
            break;
          case LossMode::kDualUncertainty:
            loss = uncertainty_loss(mse_loss(preds_mcs, targets_mcs),
                                    mse_loss(preds_ged, targets_ged),
                                    mv.theta_mcs, mv.theta_ged);
            break;
        }
        loss_value = tape.value(loss).item();
        if (!std::isfinite(loss_value))
          throw std::runtime_error("loss is not finite");
        tape.backward(loss);

        std::vector<Var> vars = var_entries(mv);
        std::vector<Tensor*> targets;
        for (auto& [name, tensor] : param_entries(params))
          targets.push_back(tensor);
        std::vector<Tensor> grads;
        grads.reserve(vars.size());
        for (Var v : vars) grads.push_back(tape.grad_or_zero(v));
        adam_step(targets, grads, adam, tc.lr);
      } catch (const std::exception& e) {
        throw std::runtime_error(
            "training aborted at epoch " + std::to_string(epoch) + " iter " +
            std::to_string(iter) + ": " + e.what());
      }
      epoch_loss += loss_value;

      if (tc.max_wall_clock_sec > 0 &&
          now_sec(start) > tc.max_wall_clock_sec) {
        result.hit_wall_clock = true;
        break;
      }
    }
    epoch_loss /= static_cast<double>(tc.iters_per_epoch);

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss;
    record.theta_mcs = params.theta_mcs.item();
    record.theta_ged = params.theta_ged.item();

    const bool due = epoch >= tc.warmup_epochs &&
                     (epoch - tc.warmup_epochs) % tc.validate_every == 0;
    if (due && !result.hit_wall_clock) {
      record.validated = true;
      record.val_loss = validation_loss(ds, assigns, params, mc, labels,
                                        split.val, tc.loss_mode);
      if (record.val_loss < result.best_val_loss) {
        result.best_val_loss = record.val_loss;
        result.best = params;
        stale_validations = 0;
      } else if (++stale_validations >= tc.patience) {
        result.early_stopped = true;
      }
    }
    result.history.push_back(record);

    if (result.early_stopped || result.hit_wall_clock) break;
    if (tc.max_wall_clock_sec > 0 && now_sec(start) > tc.max_wall_clock_sec) {
      result.hit_wall_clock = true;
      break;
    }
  }

  if (!std::isfinite(result.best_val_loss)) result.best = params;
  return result;
}

void save_history_csv(const std::vector<EpochRecord>& history,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "epoch,train_loss,val_loss,theta_mcs,theta_ged\n";
  out.precision(17);
  for (const EpochRecord& r : history) {
    out << r.epoch << "," << r.train_loss << ",";
    if (r.validated) out << r.val_loss;
    out << "," << r.theta_mcs << "," << r.theta_ged << "\n";
  }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": empty key or value");
    kv[key] = value;
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv,
                  ModelConfig& mc, TrainConfig& tc) {
  auto to_int = [](const std::string& v) { return std::stoi(v); };
  auto to_double = [](const std::string& v) { return std::stod(v); };
  auto to_bool = [](const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("expected true/false, got \"" + v + "\"");
  };
  for (const auto& [key, value] : kv) {
    try {
      if (key == "k") mc.encoder.k = to_int(value);
      else if (key == "d") mc.encoder.d = to_int(value);
      else if (key == "D") mc.encoder.D = to_int(value);
      else if (key == "out") mc.encoder.out = to_int(value);
      else if (key == "n_paths") mc.encoder.n_paths = to_int(value);
      else if (key == "path_len") mc.encoder.path_len = to_int(value);
      else if (key == "use_pe") mc.encoder.use_pe = to_bool(value);
      else if (key == "use_clamp") mc.encoder.use_clamp = to_bool(value);
      else if (key == "backbone") mc.encoder.backbone = value;
      else if (key == "score_hidden") mc.score_hidden = to_int(value);
      else if (key == "shared_mlp") mc.shared_mlp = to_bool(value);
      else if (key == "size_metric") {
        if (value == "nodes") mc.size_metric = SizeMetric::kNodes;
        else if (value == "nodes_plus_edges")
          mc.size_metric = SizeMetric::kNodesPlusEdges;
        else throw std::runtime_error("unknown size_metric");
      }
      else if (key == "lr") tc.lr = to_double(value);
      else if (key == "batch_size") tc.batch_size = to_int(value);
      else if (key == "iters_per_epoch") tc.iters_per_epoch = to_int(value);
      else if (key == "warmup_epochs") tc.warmup_epochs = to_int(value);
      else if (key == "validate_every") tc.validate_every = to_int(value);
      else if (key == "patience") tc.patience = to_int(value);
      else if (key == "max_epochs") tc.max_epochs = to_int(value);
      else if (key == "max_wall_clock") tc.max_wall_clock_sec = to_double(value);
      else if (key == "loss") tc.loss_mode = loss_mode_from_name(value);
      else if (key == "seed") tc.seed = std::stoull(value);
      else throw std::runtime_error("unknown config key");
    } catch (const std::exception& e) {
      throw std::runtime_error("config key \"" + key + "\": " + e.what());
    }
  }
}

}  // namespace g2r
