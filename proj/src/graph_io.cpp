#include "g2r/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace g2r {

namespace {

using ordered_json = nlohmann::ordered_json;

int intern_label(const std::string& name, std::vector<std::string>& dict) {
  auto it = std::find(dict.begin(), dict.end(), name);
  if (it != dict.end()) return static_cast<int>(it - dict.begin());
  dict.push_back(name);
  return static_cast<int>(dict.size()) - 1;
}

Graph graph_from_json(const ordered_json& obj,
                      std::vector<std::string>* label_dict) {
  if (!obj.is_object() || !obj.contains("nodes") || !obj.contains("edges"))
    throw std::runtime_error("graph object must have \"nodes\" and \"edges\"");

  int num_nodes = 0;
  std::vector<int> labels;
  const auto& nodes = obj.at("nodes");
  if (nodes.is_number_integer()) {
    num_nodes = nodes.get<int>();
  } else if (nodes.is_array()) {
    if (label_dict == nullptr)
      throw std::runtime_error("labeled graph needs a label dictionary");
    num_nodes = static_cast<int>(nodes.size());
    labels.reserve(nodes.size());
    for (const auto& name : nodes) {
      if (!name.is_string())
        throw std::runtime_error("node label must be a string");
      labels.push_back(intern_label(name.get<std::string>(), *label_dict));
    }
  } else {
    throw std::runtime_error("\"nodes\" must be a count or a label list");
  }

  std::vector<std::pair<int, int>> edges;
  for (const auto& e : obj.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw std::runtime_error("edge must be a pair of node indices");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph(num_nodes, std::move(edges), std::move(labels));
}

ordered_json graph_to_json_obj(const Graph& g,
                               const std::vector<std::string>& label_names) {
  ordered_json obj;
  if (g.labeled()) {
    ordered_json names = ordered_json::array();
    for (int v = 0; v < g.num_nodes(); ++v) {
      int id = g.label(v);
      if (id < 0 || id >= static_cast<int>(label_names.size()))
        throw std::runtime_error("label id has no dictionary entry");
      names.push_back(label_names[id]);
    }
    obj["nodes"] = std::move(names);
  } else {
    obj["nodes"] = g.num_nodes();
  }
  ordered_json edges = ordered_json::array();
  for (auto [u, v] : g.edges()) edges.push_back(ordered_json::array({u, v}));
  obj["edges"] = std::move(edges);
  return obj;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

Graph parse_graph_json(const std::string& text,
                       std::vector<std::string>* label_dict) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("graph JSON parse error: ") +
                             e.what());
  }
  return graph_from_json(obj, label_dict);
}

std::string graph_to_json(const Graph& g,
                          const std::vector<std::string>& label_names) {
  return graph_to_json_obj(g, label_names).dump();
}

Graph load_graph(const std::string& path) {
  auto in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::vector<std::string> dict;
  return parse_graph_json(buf.str(), &dict);
}

void save_graph(const Graph& g, const std::string& path) {
  std::vector<std::string> names;
  if (g.labeled()) {
    // A standalone graph gets a positional dictionary: label id i -> "i".
    int max_id = *std::max_element(g.labels().begin(), g.labels().end());
    for (int i = 0; i <= max_id; ++i) names.push_back(std::to_string(i));
  }
  auto out = open_out(path);
  out << graph_to_json(g, names) << "\n";
}

Dataset load_dataset(const std::string& path) {
  auto in = open_in(path);
  Dataset ds;
  std::string line;
  int line_no = 0;
  int labeled_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Graph g = parse_graph_json(line, &ds.label_names);
      if (g.labeled()) ++labeled_lines;
      ds.graphs.push_back(std::move(g));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  if (labeled_lines != 0 && labeled_lines != static_cast<int>(ds.graphs.size()))
    throw std::runtime_error(path + ": dataset mixes labeled and unlabeled graphs");
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  auto out = open_out(path);
  for (const auto& g : ds.graphs)
    out << graph_to_json(g, ds.label_names) << "\n";
}

double nmcs_target(const Graph& g1, const Graph& g2, int mcs_nodes) {
  return mcs_nodes / ((g1.num_nodes() + g2.num_nodes()) / 2.0);
}

double nged_target(const Graph& g1, const Graph& g2, int ged) {
  return std::exp(-ged / ((g1.num_nodes() + g2.num_nodes()) / 2.0));
}

std::vector<PairLabel> load_pair_labels(const std::string& path,
                                        const Dataset& ds) {
  auto in = open_in(path);
  std::vector<PairLabel> labels;
  std::string line;
  int line_no = 0;
  const int n_graphs = static_cast<int>(ds.graphs.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto obj = ordered_json::parse(line);
      PairLabel pl;
      pl.a = obj.at("a").get<int>();
      pl.b = obj.at("b").get<int>();
      pl.mcs_nodes = obj.at("mcs_nodes").get<int>();
      pl.mcs_edges = obj.at("mcs_edges").get<int>();
      pl.ged = obj.at("ged").get<int>();
      if (pl.a < 0 || pl.a >= n_graphs || pl.b < 0 || pl.b >= n_graphs)
        throw std::runtime_error("graph index out of range");
      const Graph& ga = ds.graphs[pl.a];
      const Graph& gb = ds.graphs[pl.b];
      if (pl.mcs_nodes < 0 ||
          pl.mcs_nodes > std::min(ga.num_nodes(), gb.num_nodes()))
        throw std::runtime_error("mcs_nodes exceeds smaller node count");
      if (pl.mcs_edges < 0 ||
          pl.mcs_edges > std::min(ga.num_edges(), gb.num_edges()))
        throw std::runtime_error("mcs_edges exceeds smaller edge count");
      if (pl.ged < 0) throw std::runtime_error("negative ged");
      pl.nmcs = nmcs_target(ga, gb, pl.mcs_nodes);
      pl.nged = nged_target(ga, gb, pl.ged);
      labels.push_back(pl);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return labels;
}

void save_pair_labels(const std::vector<PairLabel>& labels,
                      const std::string& path) {
  auto out = open_out(path);
  for (const auto& pl : labels) {
    ordered_json obj;
    obj["a"] = pl.a;
    obj["b"] = pl.b;
    obj["mcs_nodes"] = pl.mcs_nodes;
    obj["mcs_edges"] = pl.mcs_edges;
    obj["ged"] = pl.ged;
    out << obj.dump() << "\n";
  }
}

}  // namespace g2r
