#include "g2r/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace g2r {

namespace {

using ordered_json = nlohmann::ordered_json;

LinearParams init_linear(int in, int out, RngStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Tensor w = Tensor::zeros({in, out});
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = rng.uniform(-bound, bound);
  return LinearParams{std::move(w), Tensor::zeros({out})};
}

MlpParams init_mlp(int in, int hidden, int out, RngStream& rng) {
  MlpParams m;
  m.l1 = init_linear(in, hidden, rng);
  m.l2 = init_linear(hidden, out, rng);
  return m;
}

template <typename TensorPtr, typename Params>
std::vector<std::pair<std::string, TensorPtr>> entries_impl(Params& p) {
  std::vector<std::pair<std::string, TensorPtr>> out;
  auto add_linear = [&](const std::string& name, auto& lin) {
    out.emplace_back(name + ".weight", &lin.weight);
    out.emplace_back(name + ".bias", &lin.bias);
  };
  auto add_mlp = [&](const std::string& name, auto& mlp) {
    add_linear(name + ".l1", mlp.l1);
    add_linear(name + ".l2", mlp.l2);
  };
  add_linear("encoder.input", p.encoder.input);
  for (std::size_t i = 0; i < p.encoder.layers.size(); ++i)
    add_mlp("encoder.layer" + std::to_string(i), p.encoder.layers[i]);
  add_mlp("encoder.region", p.encoder.region);
  add_mlp("encoder.position", p.encoder.position);
  add_linear("encoder.projection", p.encoder.projection);
  add_mlp("score.mcs_mlp", p.score.mcs_mlp);
  add_mlp("score.ged_mlp", p.score.ged_mlp);
  out.emplace_back("score.alpha1", &p.score.alpha1);
  out.emplace_back("score.beta1", &p.score.beta1);
  out.emplace_back("score.alpha2", &p.score.alpha2);
  out.emplace_back("score.beta2", &p.score.beta2);
  out.emplace_back("score.gamma", &p.score.gamma);
  out.emplace_back("score.lambda", &p.score.lambda);
  out.emplace_back("theta_mcs", &p.theta_mcs);
  out.emplace_back("theta_ged", &p.theta_ged);
  return out;
}

std::string size_metric_name(SizeMetric m) {
  return m == SizeMetric::kNodes ? "nodes" : "nodes_plus_edges";
}

SizeMetric size_metric_from_name(const std::string& name) {
  if (name == "nodes") return SizeMetric::kNodes;
  if (name == "nodes_plus_edges") return SizeMetric::kNodesPlusEdges;
  throw std::runtime_error("unknown size_metric \"" + name + "\"");
}

ordered_json config_to_json(const ModelConfig& cfg) {
  ordered_json j;
  j["k"] = cfg.encoder.k;
  j["d"] = cfg.encoder.d;
  j["D"] = cfg.encoder.D;
  j["out"] = cfg.encoder.out;
  j["n_paths"] = cfg.encoder.n_paths;
  j["path_len"] = cfg.encoder.path_len;
  j["label_vocab"] = cfg.encoder.label_vocab;
  j["use_pe"] = cfg.encoder.use_pe;
  j["use_clamp"] = cfg.encoder.use_clamp;
  j["backbone"] = cfg.encoder.backbone;
  j["score_hidden"] = cfg.score_hidden;
  j["shared_mlp"] = cfg.shared_mlp;
  j["size_metric"] = size_metric_name(cfg.size_metric);
  return j;
}

ModelConfig config_from_json(const ordered_json& j) {
  ModelConfig cfg;
  cfg.encoder.k = j.at("k").get<int>();
  cfg.encoder.d = j.at("d").get<int>();
  cfg.encoder.D = j.at("D").get<int>();
  cfg.encoder.out = j.at("out").get<int>();
  cfg.encoder.n_paths = j.at("n_paths").get<int>();
  cfg.encoder.path_len = j.at("path_len").get<int>();
  cfg.encoder.label_vocab = j.at("label_vocab").get<int>();
  cfg.encoder.use_pe = j.at("use_pe").get<bool>();
  cfg.encoder.use_clamp = j.at("use_clamp").get<bool>();
  cfg.encoder.backbone = j.at("backbone").get<std::string>();
  cfg.score_hidden = j.at("score_hidden").get<int>();
  cfg.shared_mlp = j.at("shared_mlp").get<bool>();
  cfg.size_metric = size_metric_from_name(j.at("size_metric").get<std::string>());
  cfg.validate();
  return cfg;
}

}  // namespace

std::string loss_mode_name(LossMode mode) {
  switch (mode) {
    case LossMode::kMcs: return "mcs";
    case LossMode::kGed: return "ged";
    case LossMode::kDual: return "dual";
    case LossMode::kDualUncertainty: return "dual_uncertainty";
  }
  throw std::logic_error("unreachable loss mode");
}

LossMode loss_mode_from_name(const std::string& name) {
  if (name == "mcs") return LossMode::kMcs;
  if (name == "ged") return LossMode::kGed;
  if (name == "dual") return LossMode::kDual;
  if (name == "dual_uncertainty") return LossMode::kDualUncertainty;
  throw std::runtime_error("unknown loss mode \"" + name + "\"");
}

ModelParams init_model(const ModelConfig& cfg, RngStream& rng) {
  cfg.validate();
  const EncoderConfig& e = cfg.encoder;
  ModelParams p;
  p.encoder.input = init_linear(e.label_vocab, e.d, rng);
  for (int i = 0; i < e.k; ++i)
    p.encoder.layers.push_back(init_mlp(e.d, e.d, e.d, rng));
  p.encoder.region = init_mlp(e.d, e.D, e.D, rng);
  p.encoder.position = init_mlp(e.n_paths * e.path_len, e.D, e.D, rng);
  p.encoder.projection = init_linear(e.D, e.out, rng);
  p.score.mcs_mlp = init_mlp(e.k * e.out, cfg.score_hidden, 1, rng);
  p.score.ged_mlp = init_mlp(e.k * e.out, cfg.score_hidden, 1, rng);
  p.score.alpha1 = Tensor::scalar(1.0);
  p.score.beta1 = Tensor::scalar(1.0);
  p.score.alpha2 = Tensor::scalar(1.0);
  p.score.beta2 = Tensor::scalar(1.0);
  p.score.gamma = Tensor::scalar(1.0);
  p.score.lambda = Tensor::scalar(1.0);
  p.theta_mcs = Tensor::scalar(0.0);
  p.theta_ged = Tensor::scalar(0.0);
  return p;
}

ModelVars lift(Tape& tape, const ModelParams& params) {
  ModelVars v;
  v.encoder = lift(tape, params.encoder);
  v.score = lift(tape, params.score);
  v.theta_mcs = tape.leaf(params.theta_mcs);
  v.theta_ged = tape.leaf(params.theta_ged);
  return v;
}

std::vector<std::pair<std::string, Tensor*>> param_entries(ModelParams& p) {
  return entries_impl<Tensor*>(p);
}

std::vector<std::pair<std::string, const Tensor*>> param_entries(
    const ModelParams& p) {
  return entries_impl<const Tensor*>(p);
}

std::vector<Var> var_entries(const ModelVars& v) {
  std::vector<Var> out;
  auto add_linear = [&](const LinearVars& lin) {
    out.push_back(lin.weight);
    out.push_back(lin.bias);
  };
  auto add_mlp = [&](const MlpVars& mlp) {
    add_linear(mlp.l1);
    add_linear(mlp.l2);
  };
  add_linear(v.encoder.input);
  for (const MlpVars& layer : v.encoder.layers) add_mlp(layer);
  add_mlp(v.encoder.region);
  add_mlp(v.encoder.position);
  add_linear(v.encoder.projection);
  add_mlp(v.score.mcs_mlp);
  add_mlp(v.score.ged_mlp);
  out.push_back(v.score.alpha1);
  out.push_back(v.score.beta1);
  out.push_back(v.score.alpha2);
  out.push_back(v.score.beta2);
  out.push_back(v.score.gamma);
  out.push_back(v.score.lambda);
  out.push_back(v.theta_mcs);
  out.push_back(v.theta_ged);
  return out;
}

Tensor flatten_params(const ModelParams& p) {
  std::vector<double> flat;
  for (auto& [name, tensor] : param_entries(p))
    flat.insert(flat.end(), tensor->data(), tensor->data() + tensor->size());
  const int size = static_cast<int>(flat.size());
  return Tensor({size}, std::move(flat));
}

void unflatten_params(const Tensor& flat, ModelParams& p) {
  std::size_t offset = 0;
  for (auto& [name, tensor] : param_entries(p)) {
    if (offset + tensor->size() > flat.size())
      throw std::invalid_argument("flat parameter vector too short");
    for (std::size_t i = 0; i < tensor->size(); ++i)
      (*tensor)[i] = flat[offset + i];
    offset += tensor->size();
  }
  if (offset != flat.size())
    throw std::invalid_argument("flat parameter vector too long");
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  ordered_json j;
  j["format_version"] = 1;
  j["config"] = config_to_json(ckpt.config);
  j["loss_mode"] = loss_mode_name(ckpt.loss_mode);
  j["seed"] = ckpt.seed;
  j["train_fraction"] = ckpt.train_fraction;
  j["val_fraction"] = ckpt.val_fraction;
  ordered_json params = ordered_json::object();
  for (auto& [name, tensor] : param_entries(ckpt.params)) {
    ordered_json entry;
    entry["shape"] = tensor->shape();
    entry["data"] = std::vector<double>(tensor->data(),
                                        tensor->data() + tensor->size());
    params[name] = std::move(entry);
  }
  j["params"] = std::move(params);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": checkpoint parse error: " + e.what());
  }
  if (!j.contains("format_version") || j.at("format_version").get<int>() != 1)
    throw std::runtime_error(path + ": unsupported checkpoint format version");

  Checkpoint ckpt;
  ckpt.config = config_from_json(j.at("config"));
  ckpt.loss_mode = loss_mode_from_name(j.at("loss_mode").get<std::string>());
  ckpt.seed = j.at("seed").get<std::uint64_t>();
  ckpt.train_fraction = j.at("train_fraction").get<double>();
  ckpt.val_fraction = j.at("val_fraction").get<double>();

  RngStream dummy(0);
  ckpt.params = init_model(ckpt.config, dummy);
  const auto& params = j.at("params");
  auto entries = param_entries(ckpt.params);
  if (params.size() != entries.size())
    throw std::runtime_error(path + ": checkpoint parameter count mismatch");
  for (auto& [name, tensor] : entries) {
    if (!params.contains(name))
      throw std::runtime_error(path + ": checkpoint missing parameter " + name);
    const auto& entry = params.at(name);
    const auto shape = entry.at("shape").get<std::vector<int>>();
    if (shape != tensor->shape())
      throw std::runtime_error(path + ": shape mismatch for " + name);
    const auto data = entry.at("data").get<std::vector<double>>();
    if (data.size() != tensor->size())
      throw std::runtime_error(path + ": data length mismatch for " + name);
    for (std::size_t i = 0; i < data.size(); ++i) (*tensor)[i] = data[i];
  }
  return ckpt;
}

}  // namespace g2r
