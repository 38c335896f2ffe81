#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "g2r/generate.hpp"
#include "g2r/oracle.hpp"
#include "g2r/train.hpp"

using namespace g2r;

namespace {

ModelConfig desk_config() {
  ModelConfig mc;
  mc.encoder.k = 2;
  mc.encoder.d = 8;
  mc.encoder.D = 8;
  mc.encoder.out = 4;
  mc.encoder.n_paths = 2;
  mc.encoder.path_len = 2;
  mc.score_hidden = 4;
  return mc;
}

Var scalar_leaf(Tape& t, double v) { return t.leaf(Tensor::scalar(v)); }

}  // namespace

TEST_CASE("mse loss examples") {
  Tape t;
  CHECK(t.value(mse_loss({scalar_leaf(t, 0.5)}, {1.0})).item() ==
        doctest::Approx(0.25));
  CHECK(t.value(mse_loss({scalar_leaf(t, 0.3), scalar_leaf(t, -2.0)},
                         {0.3, -2.0}))
            .item() == 0.0);
  CHECK(t.value(mse_loss({scalar_leaf(t, 0.0), scalar_leaf(t, 1.0)},
                         {1.0, 0.0}))
            .item() == doctest::Approx(1.0));
  CHECK_THROWS_AS(mse_loss({}, {}), std::invalid_argument);
}

TEST_CASE("dual loss is the plain sum") {
  Tape t;
  CHECK(t.value(dual_loss(scalar_leaf(t, 0.2), scalar_leaf(t, 0.4))).item() ==
        doctest::Approx(0.6));
  CHECK(t.value(dual_loss(scalar_leaf(t, 0.0), scalar_leaf(t, 0.0))).item() ==
        0.0);
  CHECK(t.value(dual_loss(scalar_leaf(t, 0.7), scalar_leaf(t, 0.1))).item() ==
        t.value(dual_loss(scalar_leaf(t, 0.1), scalar_leaf(t, 0.7))).item());
}

TEST_CASE("uncertainty loss formula and gradient") {
  Tape t;
  CHECK(t.value(uncertainty_loss(scalar_leaf(t, 0.2), scalar_leaf(t, 0.4),
                                 scalar_leaf(t, 0.0), scalar_leaf(t, 0.0)))
            .item() == doctest::Approx(0.3));

  const double ln2 = std::log(2.0);
  CHECK(t.value(uncertainty_loss(scalar_leaf(t, 0.4), scalar_leaf(t, 0.4),
                                 scalar_leaf(t, ln2), scalar_leaf(t, ln2)))
            .item() == doctest::Approx(0.89315).epsilon(1e-4));

  // d/dtheta = (1 - exp(-theta) * L) / 2, zero at theta = ln L.
  Tape t2;
  Var l_mcs = scalar_leaf(t2, 0.4);
  Var l_ged = scalar_leaf(t2, 0.7);
  Var theta_mcs = scalar_leaf(t2, 0.3);
  Var theta_ged = scalar_leaf(t2, std::log(0.7));
  Var loss = uncertainty_loss(l_mcs, l_ged, theta_mcs, theta_ged);
  t2.backward(loss);
  CHECK(t2.grad(theta_mcs)[0] ==
        doctest::Approx(0.5 * (1.0 - std::exp(-0.3) * 0.4)).epsilon(1e-12));
  CHECK(t2.grad(theta_ged)[0] == doctest::Approx(0.0).epsilon(1e-12));

  auto f = [](Tape& tt, Var x) {
    Var parts = reshape(x, {4, 1});
    Var l1 = reshape(gather_rows(parts, {0}), {1});
    Var l2 = reshape(gather_rows(parts, {1}), {1});
    Var th1 = reshape(gather_rows(parts, {2}), {1});
    Var th2 = reshape(gather_rows(parts, {3}), {1});
    return uncertainty_loss(l1, l2, th1, th2);
  };
  GradCheckReport r =
      grad_check(f, Tensor({4}, {0.4, 0.7, 0.3, -0.2}), 1e-6, 1e-6);
  CHECK(r.passed);
}

TEST_CASE("uncertainty loss with zero thetas is half the dual loss") {
  RngStream rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
    Tape t;
    const double dual =
        t.value(dual_loss(scalar_leaf(t, a), scalar_leaf(t, b))).item();
    const double unc =
        t.value(uncertainty_loss(scalar_leaf(t, a), scalar_leaf(t, b),
                                 scalar_leaf(t, 0.0), scalar_leaf(t, 0.0)))
            .item();
    CHECK(unc == doctest::Approx(dual / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("adam step behavior") {
  Tensor p = Tensor::scalar(1.0);
  AdamState state;

  // Zero gradient leaves the parameter unchanged.
  adam_step({&p}, {Tensor::scalar(0.0)}, state, 0.001);
  CHECK(p.item() == 1.0);

  // First step with g=0.5 moves by about -lr.
  Tensor q = Tensor::scalar(1.0);
  AdamState s2;
  adam_step({&q}, {Tensor::scalar(0.5)}, s2, 0.001);
  CHECK(q.item() == doctest::Approx(1.0 - 0.000999998).epsilon(1e-9));

  // Constant gradients move monotonically against the gradient sign.
  Tensor r = Tensor::scalar(0.0);
  AdamState s3;
  double prev = 0.0;
  for (int step = 0; step < 5; ++step) {
    adam_step({&r}, {Tensor::scalar(2.0)}, s3, 0.01);
    CHECK(r.item() < prev);
    prev = r.item();
  }

  CHECK_THROWS_AS(adam_step({&p}, {Tensor::zeros({3})}, state, 0.001),
                  std::invalid_argument);
}

TEST_CASE("split is deterministic, disjoint, and sized 64/16/20") {
  SplitIndices s = split_pairs(100, 0.8, 0.2, 7);
  CHECK(s.train.size() == 64);
  CHECK(s.val.size() == 16);
  CHECK(s.test.size() == 20);
  std::set<int> all;
  for (int i : s.train) all.insert(i);
  for (int i : s.val) all.insert(i);
  for (int i : s.test) all.insert(i);
  CHECK(all.size() == 100);

  SplitIndices again = split_pairs(100, 0.8, 0.2, 7);
  CHECK(s.train == again.train);
  CHECK(s.val == again.val);
  CHECK(s.test == again.test);
}

TEST_CASE("an 8-pair batch overfits by 100x in 500 steps") {
  ModelConfig mc = desk_config();
  RngStream rng(3);
  std::vector<Graph> graphs;
  for (int i = 0; i < 6; ++i)
    graphs.push_back(generate_er(static_cast<int>(rng.uniform_int(3, 6)),
                                 0.5, rng));
  Dataset ds;
  ds.graphs = graphs;
  OracleOptions oracle_opts;
  auto report = label_pairs(
      ds, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}, {1, 5}, {0, 3}},
      oracle_opts);
  REQUIRE(report.labels.size() == 8);

  auto assigns = derive_assignments(ds.graphs, mc.encoder.n_paths, 11);
  RngStream init_rng = named_stream(11, "init");
  ModelParams params = init_model(mc, init_rng);

  AdamState adam;
  double first_loss = 0.0, last_loss = 0.0;
  for (int step = 0; step < 500; ++step) {
    Tape tape;
    ModelVars mv = lift(tape, params);
    std::vector<Var> preds;
    std::vector<double> targets;
    for (const PairLabel& pl : report.labels) {
      RegionVars ra =
          encode(tape, ds.graphs[pl.a], mv.encoder, mc.encoder, assigns[pl.a]);
      RegionVars rb =
          encode(tape, ds.graphs[pl.b], mv.encoder, mc.encoder, assigns[pl.b]);
      preds.push_back(score_mcs(ra, rb, mv.score, mc));
      targets.push_back(pl.nmcs);
    }
    Var loss = mse_loss(preds, targets);
    const double value = tape.value(loss).item();
    if (step == 0) first_loss = value;
    last_loss = value;
    tape.backward(loss);

    std::vector<Tensor*> targets_p;
    for (auto& [name, tensor] : param_entries(params))
      targets_p.push_back(tensor);
    std::vector<Tensor> grads;
    for (Var v : var_entries(mv)) grads.push_back(tape.grad_or_zero(v));
    adam_step(targets_p, grads, adam, 0.005);
  }
  CHECK(last_loss * 100.0 <= first_loss);
}

TEST_CASE("training on identical-graph pairs drives the loss under 1e-3") {
  Dataset ds;
  RngStream rng(5);
  Graph g = generate_er(5, 0.5, rng);
  for (int i = 0; i < 10; ++i) ds.graphs.push_back(g);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 10; ++i)
    for (int j = i; j < 10 && pairs.size() < 25; ++j) pairs.emplace_back(i, j);
  auto report = label_pairs(ds, pairs, {});
  REQUIRE(report.labels.size() == 25);
  for (const PairLabel& pl : report.labels) {
    CHECK(pl.nmcs == 1.0);
    CHECK(pl.ged == 0);
  }

  ModelConfig mc = desk_config();
  TrainConfig tc;
  tc.loss_mode = LossMode::kMcs;
  tc.batch_size = 8;
  tc.iters_per_epoch = 100;
  tc.max_epochs = 2;
  tc.warmup_epochs = 1;
  tc.validate_every = 1;
  tc.patience = 10;
  tc.seed = 21;
  TrainResult result = train(ds, report.labels, mc, tc);
  REQUIRE(result.history.size() == 2);
  CHECK(result.history.back().train_loss < 1e-3);
}

TEST_CASE("training is bitwise deterministic under a fixed seed") {
  Dataset ds;
  RngStream rng(6);
  for (int i = 0; i < 12; ++i)
    ds.graphs.push_back(
        generate_er(static_cast<int>(rng.uniform_int(3, 6)), 0.4, rng));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12 && pairs.size() < 30; ++j)
      pairs.emplace_back(i, j);
  auto report = label_pairs(ds, pairs, {});

  ModelConfig mc = desk_config();
  TrainConfig tc;
  tc.loss_mode = LossMode::kDualUncertainty;
  tc.batch_size = 4;
  tc.iters_per_epoch = 5;
  tc.max_epochs = 4;
  tc.warmup_epochs = 2;
  tc.validate_every = 1;
  tc.seed = 33;

  TrainResult a = train(ds, report.labels, mc, tc);
  TrainResult b = train(ds, report.labels, mc, tc);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_loss == b.history[i].train_loss);  // bitwise
    CHECK(a.history[i].theta_mcs == b.history[i].theta_mcs);
    CHECK(a.history[i].theta_ged == b.history[i].theta_ged);
  }
  // Uncertainty training actually moves the thetas.
  CHECK(a.history.back().theta_mcs != 0.0);
}

TEST_CASE("early stopping keeps the best validation checkpoint") {
  Dataset ds;
  RngStream rng(8);
  for (int i = 0; i < 12; ++i)
    ds.graphs.push_back(
        generate_er(static_cast<int>(rng.uniform_int(3, 6)), 0.4, rng));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12 && pairs.size() < 40; ++j)
      pairs.emplace_back(i, j);
  auto report = label_pairs(ds, pairs, {});

  ModelConfig mc = desk_config();
  TrainConfig tc;
  tc.loss_mode = LossMode::kMcs;
  tc.batch_size = 8;
  tc.iters_per_epoch = 10;
  tc.max_epochs = 12;
  tc.warmup_epochs = 1;
  tc.validate_every = 1;
  tc.patience = 3;
  tc.seed = 44;

  TrainResult result = train(ds, report.labels, mc, tc);
  double best_seen = std::numeric_limits<double>::infinity();
  for (const EpochRecord& r : result.history)
    if (r.validated) best_seen = std::min(best_seen, r.val_loss);
  CHECK(result.best_val_loss == best_seen);
}

TEST_CASE("checkpoint round trip preserves scores bitwise") {
  ModelConfig mc = desk_config();
  RngStream rng(9);
  ModelParams p = init_model(mc, rng);

  Checkpoint ckpt;
  ckpt.params = p;
  ckpt.config = mc;
  ckpt.loss_mode = LossMode::kDual;
  ckpt.seed = 123;
  const std::string path = "/tmp/g2r_test_ckpt.json";
  save_checkpoint(ckpt, path);
  Checkpoint loaded = load_checkpoint(path);

  CHECK(loaded.loss_mode == LossMode::kDual);
  CHECK(loaded.seed == 123);
  auto before = param_entries(ckpt.params);
  auto after = param_entries(loaded.params);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    REQUIRE(before[i].second->size() == after[i].second->size());
    for (std::size_t j = 0; j < before[i].second->size(); ++j)
      CHECK((*before[i].second)[j] == (*after[i].second)[j]);
  }

  Graph g = generate_er(6, 0.4, rng);
  Graph g2 = generate_er(5, 0.5, rng);
  SinkAssignment assign = sample_sink_assignment(6, mc.encoder.n_paths, rng);
  SinkAssignment assign2 = sample_sink_assignment(5, mc.encoder.n_paths, rng);
  GraphRegion ra = encode(g, p.encoder, mc.encoder, assign);
  GraphRegion rb = encode(g, loaded.params.encoder, mc.encoder, assign);
  for (std::size_t i = 0; i < ra.region.size(); ++i)
    CHECK(ra.region[i] == rb.region[i]);  // bitwise
  GraphRegion other = encode(g2, p.encoder, mc.encoder, assign2);
  CHECK(score_mcs(ra, other, p.score, mc) ==
        score_mcs(rb, other, loaded.params.score, mc));
  CHECK(score_ged(ra, other, p.score, mc) ==
        score_ged(rb, other, loaded.params.score, mc));

  // Wrong config shape fails the load.
  Checkpoint bad = ckpt;
  bad.config.encoder.k = 5;
  save_checkpoint(bad, path);  // params still have k=2 layers worth of MLPs
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);

  {
    std::ofstream out(path);
    out << "{ truncated";
  }
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("config file parsing") {
  const std::string path = "/tmp/g2r_test_config.txt";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "k = 4\n";
    out << "out = 16\n";
    out << "lr = 0.01\n";
    out << "loss = dual_uncertainty\n";
    out << "use_pe = false\n";
    out << "size_metric = nodes\n";
    out << "batch_size = 64   # trailing comment\n";
  }
  ModelConfig mc;
  TrainConfig tc;
  apply_config(parse_config_file(path), mc, tc);
  CHECK(mc.encoder.k == 4);
  CHECK(mc.encoder.out == 16);
  CHECK(mc.encoder.use_pe == false);
  CHECK(mc.size_metric == SizeMetric::kNodes);
  CHECK(tc.lr == doctest::Approx(0.01));
  CHECK(tc.loss_mode == LossMode::kDualUncertainty);
  CHECK(tc.batch_size == 64);

  {
    std::ofstream out(path);
    out << "unknown_key = 1\n";
  }
  CHECK_THROWS_AS(apply_config(parse_config_file(path), mc, tc),
                  std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("flatten and unflatten round trip") {
  ModelConfig mc = desk_config();
  RngStream rng(10);
  ModelParams p = init_model(mc, rng);
  Tensor flat = flatten_params(p);
  ModelParams q = init_model(mc, rng);  // different values
  unflatten_params(flat, q);
  auto pe = param_entries(p);
  auto qe = param_entries(q);
  for (std::size_t i = 0; i < pe.size(); ++i)
    for (std::size_t j = 0; j < pe[i].second->size(); ++j)
      CHECK((*pe[i].second)[j] == (*qe[i].second)[j]);
}
