#include "g2r/encoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace g2r {

void EncoderConfig::validate() const {
  if (k < 1 || d < 1 || D < 1 || out < 1 || n_paths < 1 || path_len < 1 ||
      label_vocab < 1)
    throw std::invalid_argument("encoder config dimensions must be >= 1");
  if (backbone != "gin")
    throw std::invalid_argument("unsupported backbone \"" + backbone + "\"");
}

SinkAssignment::SinkAssignment(Tensor v) : values(std::move(v)) {
  if (values.rank() != 2)
    throw std::invalid_argument("sink assignment must be rank 2");
  for (int c = 0; c < values.cols(); ++c)
    for (int r1 = 0; r1 < values.rows(); ++r1)
      for (int r2 = r1 + 1; r2 < values.rows(); ++r2)
        if (values.at(r1, c) == values.at(r2, c))
          throw std::invalid_argument(
              "sink assignment column " + std::to_string(c) +
              " has duplicate values (rows " + std::to_string(r1) + "," +
              std::to_string(r2) + ")");
}

SinkAssignment sample_sink_assignment(int num_nodes, int n_paths,
                                      RngStream& rng) {
  Tensor values = Tensor::zeros({num_nodes, n_paths});
  for (int c = 0; c < n_paths; ++c) {
    for (;;) {
      for (int r = 0; r < num_nodes; ++r) values.at(r, c) = rng.uniform();
      bool distinct = true;
      for (int r1 = 0; r1 < num_nodes && distinct; ++r1)
        for (int r2 = r1 + 1; r2 < num_nodes; ++r2)
          if (values.at(r1, c) == values.at(r2, c)) {
            distinct = false;
            break;
          }
      if (distinct) break;
    }
  }
  return SinkAssignment(std::move(values));
}

std::vector<SinkAssignment> derive_assignments(
    const std::vector<Graph>& graphs, int n_paths, std::uint64_t root_seed) {
  std::vector<SinkAssignment> out;
  out.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    RngStream rng = named_stream(root_seed, "assign/" + std::to_string(i));
    out.push_back(
        sample_sink_assignment(graphs[i].num_nodes(), n_paths, rng));
  }
  return out;
}

Tensor multi_sink_propagation(const Graph& g, const SinkAssignment& assign,
                              int path_len) {
  const int n = g.num_nodes();
  const int n_paths = assign.values.cols();
  if (assign.values.rows() != n)
    throw std::invalid_argument("sink assignment rows do not match the graph");
  if (path_len < 1) throw std::invalid_argument("path_len must be >= 1");

  Tensor out = Tensor::zeros({n, n_paths * path_len});
  std::vector<double> cur(n), nxt(n);
  for (int net = 0; net < n_paths; ++net) {
    for (int v = 0; v < n; ++v) cur[v] = assign.values.at(v, net);
    for (int step = 0; step < path_len; ++step) {
      for (int v = 0; v < n; ++v) {
        const auto& nbrs = g.neighbors(v);
        if (nbrs.empty()) {
          nxt[v] = cur[v];  // single-node graph keeps its value
          continue;
        }
        double m = cur[nbrs[0]];
        for (std::size_t i = 1; i < nbrs.size(); ++i)
          m = std::max(m, cur[nbrs[i]]);
        nxt[v] = m;
      }
      std::swap(cur, nxt);
      for (int v = 0; v < n; ++v)
        out.at(v, net * path_len + step) = cur[v];
    }
  }
  return out;
}

EncoderVars lift(Tape& tape, const EncoderParams& params) {
  auto lift_linear = [&](const LinearParams& p) {
    return LinearVars{tape.leaf(p.weight), tape.leaf(p.bias)};
  };
  EncoderVars v;
  v.input = lift_linear(params.input);
  for (const MlpParams& m : params.layers)
    v.layers.push_back({lift_linear(m.l1), lift_linear(m.l2)});
  v.region = {lift_linear(params.region.l1), lift_linear(params.region.l2)};
  v.position =
      {lift_linear(params.position.l1), lift_linear(params.position.l2)};
  v.projection = lift_linear(params.projection);
  return v;
}

Var apply_linear(const LinearVars& p, Var x) {
  return linear(x, p.weight, p.bias);
}

Var apply_mlp(const MlpVars& p, Var x) {
  return apply_linear(p.l2, relu(apply_linear(p.l1, x)));
}

std::vector<Var> gin_forward(Tape& tape, const Graph& g, Var x0,
                             const std::vector<MlpVars>& layers) {
  const int n = g.num_nodes();

  // Directed edge arrays (both orientations), sorted by destination so
  // within-segment accumulation order is fixed.
  std::vector<std::pair<int, int>> directed;  // (dst, src)
  directed.reserve(2 * g.edges().size());
  for (auto [u, v] : g.edges()) {
    directed.emplace_back(v, u);
    directed.emplace_back(u, v);
  }
  std::sort(directed.begin(), directed.end());
  std::vector<int> src, dst;
  src.reserve(directed.size());
  dst.reserve(directed.size());
  for (auto [d_, s_] : directed) {
    dst.push_back(d_);
    src.push_back(s_);
  }

  std::vector<Var> scales;
  Var x = x0;
  for (const MlpVars& layer : layers) {
    Var neighbor_sum = segment_sum(gather_rows(x, src), dst, n);
    Var x_next = add(apply_mlp(layer, add(x, neighbor_sum)), x);
    scales.push_back(x_next);
    x = x_next;
    (void)tape;
  }
  return scales;
}

namespace {

Tensor one_hot_labels(const Graph& g, int vocab) {
  Tensor x = Tensor::zeros({g.num_nodes(), vocab});
  for (int v = 0; v < g.num_nodes(); ++v) {
    const int l = g.label(v);
    if (l < 0 || l >= vocab)
      throw std::invalid_argument("node label " + std::to_string(l) +
                                  " outside vocab of " + std::to_string(vocab));
    x.at(v, l) = 1.0;
  }
  return x;
}

}  // namespace

RegionVars encode(Tape& tape, const Graph& g, const EncoderVars& params,
                  const EncoderConfig& cfg, const SinkAssignment& assign) {
  cfg.validate();
  const int n = g.num_nodes();

  Var x0 = apply_linear(params.input, tape.leaf(one_hot_labels(g, cfg.label_vocab)));
  std::vector<Var> scales = gin_forward(tape, g, x0, params.layers);

  Var positions;
  if (cfg.use_pe) {
    Tensor flows = multi_sink_propagation(g, assign, cfg.path_len);
    positions = apply_mlp(params.position, tape.leaf(std::move(flows)));
  }

  const std::vector<int> whole_graph(n, 0);
  Var origin_shift;
  if (cfg.use_pe && cfg.use_clamp)
    origin_shift = segment_min(positions, whole_graph, 1);

  std::vector<Var> region_rows;
  region_rows.reserve(scales.size());
  for (Var x : scales) {
    Var node_regions = apply_mlp(params.region, x);
    if (cfg.use_pe) node_regions = add(node_regions, positions);
    Var pooled = segment_sum(node_regions, whole_graph, 1);
    if (cfg.use_pe && cfg.use_clamp) pooled = sub(pooled, origin_shift);
    region_rows.push_back(reshape(pooled, {cfg.D}));
  }

  Var projected = softplus(apply_linear(params.projection, vstack(region_rows)));

  RegionVars r;
  r.region = projected;
  r.mean_region = mean_rows(projected);
  r.size = g.cardinality();
  r.num_nodes = n;
  return r;
}

GraphRegion encode(const Graph& g, const EncoderParams& params,
                   const EncoderConfig& cfg, const SinkAssignment& assign) {
  Tape tape;
  RegionVars v = encode(tape, g, lift(tape, params), cfg, assign);
  GraphRegion region;
  region.region = tape.value(v.region);
  region.mean_region = tape.value(v.mean_region);
  region.size = v.size;
  region.num_nodes = v.num_nodes;
  return region;
}

RegionVars lift_region(Tape& tape, const GraphRegion& region) {
  RegionVars v;
  v.region = tape.leaf(region.region);
  v.mean_region = tape.leaf(region.mean_region);
  v.size = region.size;
  v.num_nodes = region.num_nodes;
  return v;
}

}  // namespace g2r
