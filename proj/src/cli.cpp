#include "g2r/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "g2r/generate.hpp"
#include "g2r/graph_io.hpp"
#include "g2r/metrics.hpp"
#include "g2r/oracle.hpp"
#include "g2r/region_io.hpp"
#include "g2r/train.hpp"

namespace g2r {

namespace {

using ordered_json = nlohmann::ordered_json;

struct GenArgs {
  int n_graphs = 100;
  int n_min = 5, n_max = 50;
  double p_min = 0.1, p_max = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_gen(const GenArgs& a) {
  if (a.n_min < 1 || a.n_max < a.n_min)
    throw std::runtime_error("need 1 <= n-min <= n-max");
  if (a.p_min <= 0 || a.p_max < a.p_min || a.p_max > 1)
    throw std::runtime_error("need 0 < p-min <= p-max <= 1");
  Dataset ds;
  ds.graphs.reserve(a.n_graphs);
  for (int i = 0; i < a.n_graphs; ++i) {
    RngStream rng = named_stream(a.seed, "gen/" + std::to_string(i));
    const int n = static_cast<int>(rng.uniform_int(a.n_min, a.n_max));
    const double p = a.p_min == a.p_max ? a.p_min : rng.uniform(a.p_min, a.p_max);
    ds.graphs.push_back(generate_er(n, p, rng));
  }
  save_dataset(ds, a.out);
  std::cout << "wrote " << ds.graphs.size() << " graphs to " << a.out << "\n";
}

struct OracleArgs {
  std::string dataset;
  std::string pairs = "all";
  int budget = 0;  // 0 = per-solver defaults
  double timeout = 60.0;
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<std::pair<int, int>> select_pairs(const std::string& spec,
                                              int n_graphs,
                                              std::uint64_t seed) {
  std::vector<std::pair<int, int>> pairs;
  if (spec == "all") {
    for (int a = 0; a < n_graphs; ++a)
      for (int b = a; b < n_graphs; ++b) pairs.emplace_back(a, b);
    return pairs;
  }
  if (spec.rfind("random:", 0) == 0) {
    const int m = std::stoi(spec.substr(7));
    if (m < 1) throw std::runtime_error("pair count must be positive");
    const long long all = static_cast<long long>(n_graphs) * (n_graphs + 1) / 2;
    if (m > all)
      throw std::runtime_error("requested more pairs than exist (" +
                               std::to_string(all) + ")");
    RngStream rng = named_stream(seed, "oracle/pairs");
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < m) {
      int a = static_cast<int>(rng.uniform_int(0, n_graphs - 1));
      int b = static_cast<int>(rng.uniform_int(0, n_graphs - 1));
      if (a > b) std::swap(a, b);
      chosen.insert({a, b});
    }
    pairs.assign(chosen.begin(), chosen.end());
    return pairs;
  }
  throw std::runtime_error("--pairs must be \"all\" or \"random:<m>\"");
}

int cmd_oracle(const OracleArgs& a) {
  Dataset ds = load_dataset(a.dataset);
  auto pairs = select_pairs(a.pairs, static_cast<int>(ds.graphs.size()),
                            a.seed);
  OracleOptions opts;
  if (a.budget > 0) {
    opts.mcs.max_nodes = a.budget;
    opts.ged.max_nodes = a.budget;
  }
  opts.mcs.timeout_sec = a.timeout;
  opts.ged.timeout_sec = a.timeout;
  opts.threads = a.threads > 0
                     ? a.threads
                     : std::max(1u, std::thread::hardware_concurrency());

  PairLabelReport report = label_pairs(ds, pairs, opts);
  save_pair_labels(report.labels, a.out);
  std::cout << "labeled=" << report.labels.size()
            << " skipped=" << report.skipped
            << " bound_violations=" << report.bound_violations << "\n";
  return report.bound_violations == 0 ? 0 : 2;
}

struct EncodeArgs {
  std::string dataset, checkpoint, out;
};

void cmd_encode(const EncodeArgs& a) {
  Dataset ds = load_dataset(a.dataset);
  Checkpoint ckpt = load_checkpoint(a.checkpoint);
  if (ds.label_vocab() != ckpt.config.encoder.label_vocab)
    throw std::runtime_error("dataset label vocab " +
                             std::to_string(ds.label_vocab()) +
                             " does not match the checkpoint");
  auto assigns =
      derive_assignments(ds.graphs, ckpt.config.encoder.n_paths, ckpt.seed);
  std::vector<RegionCacheEntry> entries;
  entries.reserve(ds.graphs.size());
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    RegionCacheEntry e;
    e.id = static_cast<int>(i);
    e.region = encode(ds.graphs[i], ckpt.params.encoder, ckpt.config.encoder,
                      assigns[i]);
    e.assign = assigns[i].values;
    entries.push_back(std::move(e));
  }
  save_region_cache(entries, a.out);
  std::cout << "encoded " << entries.size() << " graphs to " << a.out << "\n";
}

struct TrainArgs {
  std::string dataset, labels, config, loss, out, history;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void cmd_train(const TrainArgs& a) {
  Dataset ds = load_dataset(a.dataset);
  std::vector<PairLabel> labels = load_pair_labels(a.labels, ds);

  ModelConfig mc;
  TrainConfig tc;
  if (!a.config.empty()) apply_config(parse_config_file(a.config), mc, tc);
  if (!a.loss.empty()) tc.loss_mode = loss_mode_from_name(a.loss);
  if (a.seed_set) tc.seed = a.seed;
  mc.encoder.label_vocab = ds.label_vocab();

  TrainResult result = train(ds, labels, mc, tc);

  Checkpoint ckpt;
  ckpt.params = result.best;
  ckpt.config = mc;
  ckpt.loss_mode = tc.loss_mode;
  ckpt.seed = tc.seed;
  ckpt.train_fraction = tc.train_fraction;
  ckpt.val_fraction = tc.val_fraction_of_train;
  save_checkpoint(ckpt, a.out);
  if (!a.history.empty()) save_history_csv(result.history, a.history);

  std::cout << "epochs=" << result.history.size()
            << " best_val_loss=" << result.best_val_loss
            << " early_stopped=" << (result.early_stopped ? "yes" : "no")
            << " checkpoint=" << a.out << "\n";
}

struct EvalArgs {
  std::string dataset, labels, checkpoint;
  std::string metric = "mcs";
  std::string split = "all";
  std::vector<int> ks = {10};
};

void cmd_eval(const EvalArgs& a) {
  Dataset ds = load_dataset(a.dataset);
  std::vector<PairLabel> labels = load_pair_labels(a.labels, ds);
  Checkpoint ckpt = load_checkpoint(a.checkpoint);
  const bool want_mcs = a.metric == "mcs";
  if (!want_mcs && a.metric != "ged")
    throw std::runtime_error("--metric must be mcs or ged");

  std::vector<int> subset;
  if (a.split == "all") {
    subset.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      subset[i] = static_cast<int>(i);
  } else {
    SplitIndices split =
        split_pairs(static_cast<int>(labels.size()), ckpt.train_fraction,
                    ckpt.val_fraction, ckpt.seed);
    if (a.split == "train") subset = split.train;
    else if (a.split == "val") subset = split.val;
    else if (a.split == "test") subset = split.test;
    else throw std::runtime_error("--split must be all|train|val|test");
  }
  if (subset.empty()) throw std::runtime_error("selected split is empty");

  auto assigns =
      derive_assignments(ds.graphs, ckpt.config.encoder.n_paths, ckpt.seed);
  PairPredictions preds =
      predict_pairs(ds, assigns, ckpt.params, ckpt.config, labels, subset);

  std::vector<double> pred, truth;
  pred.reserve(subset.size());
  truth.reserve(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    pred.push_back(want_mcs ? preds.mcs[i] : preds.ged[i]);
    truth.push_back(want_mcs ? labels[subset[i]].nmcs
                             : labels[subset[i]].nged);
  }

  EvalReport report;
  report.mse = mse(pred, truth);
  report.mae = mae(pred, truth);
  report.spearman_rho = spearman(pred, truth);
  report.kendall_tau = kendall(pred, truth);

  // Ranking metrics: each graph queries the items it is paired with.
  std::unordered_map<int, std::vector<std::pair<double, double>>> per_query;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const PairLabel& pl = labels[subset[i]];
    per_query[pl.a].emplace_back(pred[i], truth[i]);
    if (pl.b != pl.a) per_query[pl.b].emplace_back(pred[i], truth[i]);
  }
  for (int k : a.ks) {
    double total = 0.0;
    int queries = 0;
    for (const auto& [q, items] : per_query) {
      if (static_cast<int>(items.size()) < k) continue;
      std::vector<double> qp, qt;
      qp.reserve(items.size());
      qt.reserve(items.size());
      for (const auto& [p, t] : items) {
        qp.push_back(p);
        qt.push_back(t);
      }
      total += precision_at_k(qp, qt, k);
      ++queries;
    }
    if (queries > 0) report.p_at_k[k] = total / queries;
  }

  std::cout << report_to_json(report) << "\n";
  std::cout << report_to_csv_row(report) << "\n";
}

struct PredictArgs {
  std::string regions, pairs, checkpoint, out;
};

void cmd_predict(const PredictArgs& a) {
  std::vector<RegionCacheEntry> cache = load_region_cache(a.regions);
  Checkpoint ckpt = load_checkpoint(a.checkpoint);
  std::unordered_map<int, const GraphRegion*> by_id;
  for (const auto& e : cache) by_id[e.id] = &e.region;

  std::ifstream in(a.pairs);
  if (!in) throw std::runtime_error("cannot open " + a.pairs);
  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot write " + a.out);

  std::string line;
  int line_no = 0, count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    int pa, pb;
    try {
      j = ordered_json::parse(line);
      pa = j.at("a").get<int>();
      pb = j.at("b").get<int>();
    } catch (const std::exception& e) {
      throw std::runtime_error(a.pairs + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
    auto ia = by_id.find(pa), ib = by_id.find(pb);
    if (ia == by_id.end() || ib == by_id.end())
      throw std::runtime_error(a.pairs + ":" + std::to_string(line_no) +
                               ": graph id not in the region cache");
    ordered_json rec;
    rec["a"] = pa;
    rec["b"] = pb;
    rec["mcs"] = score_mcs(*ia->second, *ib->second, ckpt.params.score,
                           ckpt.config);
    rec["ged"] = score_ged(*ia->second, *ib->second, ckpt.params.score,
                           ckpt.config);
    out << rec.dump() << "\n";
    ++count;
  }
  std::cout << "scored " << count << " pairs to " << a.out << "\n";
}

struct RankArgs {
  std::string regions, checkpoint;
  int query = 0;
  std::string metric = "mcs";
  std::string out;
};

void cmd_rank(const RankArgs& a) {
  std::vector<RegionCacheEntry> cache = load_region_cache(a.regions);
  Checkpoint ckpt = load_checkpoint(a.checkpoint);
  const bool want_mcs = a.metric == "mcs";
  if (!want_mcs && a.metric != "ged")
    throw std::runtime_error("--metric must be mcs or ged");

  const RegionCacheEntry* query = nullptr;
  for (const auto& e : cache)
    if (e.id == a.query) query = &e;
  if (!query) throw std::runtime_error("query id not in the region cache");

  std::vector<std::pair<double, int>> scored;
  scored.reserve(cache.size());
  for (const auto& e : cache) {
    const double s =
        want_mcs
            ? score_mcs(query->region, e.region, ckpt.params.score, ckpt.config)
            : score_ged(query->region, e.region, ckpt.params.score,
                        ckpt.config);
    scored.emplace_back(s, e.id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    out = &file;
  }
  for (const auto& [s, id] : scored) {
    ordered_json rec;
    rec["id"] = id;
    rec["score"] = s;
    *out << rec.dump() << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"graph similarity via geometric region embeddings"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "sample connected ER graphs");
  gen->add_option("--n-graphs", gen_args.n_graphs, "number of graphs");
  gen->add_option("--n-min", gen_args.n_min, "minimum node count");
  gen->add_option("--n-max", gen_args.n_max, "maximum node count");
  gen->add_option("--p-min", gen_args.p_min, "minimum edge probability");
  gen->add_option("--p-max", gen_args.p_max, "maximum edge probability");
  gen->add_option("--seed", gen_args.seed, "root seed");
  gen->add_option("--out", gen_args.out, "output dataset (JSON lines)")
      ->required();

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "exact-label graph pairs");
  oracle->add_option("--dataset", oracle_args.dataset, "dataset file")
      ->required();
  oracle->add_option("--pairs", oracle_args.pairs, "all or random:<m>");
  oracle->add_option("--budget", oracle_args.budget,
                     "max nodes for exact solvers (0 = defaults 16/10)");
  oracle->add_option("--timeout", oracle_args.timeout,
                     "per-pair solver timeout in seconds");
  oracle->add_option("--threads", oracle_args.threads,
                     "worker threads (0 = available parallelism)");
  oracle->add_option("--seed", oracle_args.seed, "seed for random pair picks");
  oracle->add_option("--out", oracle_args.out, "output pair labels")
      ->required();

  EncodeArgs encode_args;
  auto* enc = app.add_subcommand("encode", "precompute graph regions");
  enc->add_option("--dataset", encode_args.dataset, "dataset file")->required();
  enc->add_option("--checkpoint", encode_args.checkpoint, "model checkpoint")
      ->required();
  enc->add_option("--out", encode_args.out, "output region cache")->required();

  TrainArgs train_args;
  auto* tr = app.add_subcommand("train", "train the similarity model");
  tr->add_option("--dataset", train_args.dataset, "dataset file")->required();
  tr->add_option("--labels", train_args.labels, "pair labels")->required();
  tr->add_option("--config", train_args.config, "key = value config file");
  tr->add_option("--loss", train_args.loss,
                 "mcs | ged | dual | dual_uncertainty");
  auto* seed_opt = tr->add_option("--seed", train_args.seed, "root seed");
  tr->add_option("--out", train_args.out, "output checkpoint")->required();
  tr->add_option("--history", train_args.history, "training history CSV");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint");
  ev->add_option("--dataset", eval_args.dataset, "dataset file")->required();
  ev->add_option("--labels", eval_args.labels, "pair labels")->required();
  ev->add_option("--checkpoint", eval_args.checkpoint, "model checkpoint")
      ->required();
  ev->add_option("--metric", eval_args.metric, "mcs or ged");
  ev->add_option("--split", eval_args.split, "all | train | val | test");
  ev->add_option("--k", eval_args.ks, "precision@k cutoffs");

  PredictArgs predict_args;
  auto* pr = app.add_subcommand("predict", "score pairs from cached regions");
  pr->add_option("--regions", predict_args.regions, "region cache")->required();
  pr->add_option("--pairs", predict_args.pairs, "pair list (JSON lines)")
      ->required();
  pr->add_option("--checkpoint", predict_args.checkpoint, "model checkpoint")
      ->required();
  pr->add_option("--out", predict_args.out, "output predictions")->required();

  RankArgs rank_args;
  auto* rk = app.add_subcommand("rank", "rank the corpus against a query");
  rk->add_option("--regions", rank_args.regions, "region cache")->required();
  rk->add_option("--checkpoint", rank_args.checkpoint, "model checkpoint")
      ->required();
  rk->add_option("--query", rank_args.query, "query graph id")->required();
  rk->add_option("--metric", rank_args.metric, "mcs or ged");
  rk->add_option("--out", rank_args.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  train_args.seed_set = seed_opt->count() > 0;

  try {
    if (gen->parsed()) cmd_gen(gen_args);
    else if (oracle->parsed()) return cmd_oracle(oracle_args);
    else if (enc->parsed()) cmd_encode(encode_args);
    else if (tr->parsed()) cmd_train(train_args);
    else if (ev->parsed()) cmd_eval(eval_args);
    else if (pr->parsed()) cmd_predict(predict_args);
    else if (rk->parsed()) cmd_rank(rank_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("g2r");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace g2r
