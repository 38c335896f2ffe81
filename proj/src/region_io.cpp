#include "g2r/region_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace g2r {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Tensor& t) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < t.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < t.cols(); ++c) row.push_back(t.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Tensor matrix_from_json(const ordered_json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::runtime_error("expected a non-empty array of rows");
  const int k = static_cast<int>(rows.size());
  const int d = static_cast<int>(rows[0].size());
  Tensor t = Tensor::zeros({k, d});
  for (int r = 0; r < k; ++r) {
    if (static_cast<int>(rows[r].size()) != d)
      throw std::runtime_error("ragged matrix rows");
    for (int c = 0; c < d; ++c) t.at(r, c) = rows[r][c].get<double>();
  }
  return t;
}

// Must mirror the mean_rows op: accumulate rows in ascending order, then
// divide, so cached regions reproduce scores bit for bit.
Tensor column_means(const Tensor& region) {
  Tensor mean = Tensor::zeros({region.cols()});
  for (int r = 0; r < region.rows(); ++r)
    for (int c = 0; c < region.cols(); ++c) mean[c] += region.at(r, c);
  for (int c = 0; c < region.cols(); ++c) mean[c] /= region.rows();
  return mean;
}

}  // namespace

void save_region_cache(const std::vector<RegionCacheEntry>& entries,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const RegionCacheEntry& e : entries) {
    ordered_json j;
    j["id"] = e.id;
    j["region"] = matrix_to_json(e.region.region);
    j["size"] = e.region.size;
    j["nodes"] = e.region.num_nodes;
    j["assign"] = matrix_to_json(e.assign);
    out << j.dump() << "\n";
  }
}

std::vector<RegionCacheEntry> load_region_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RegionCacheEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = ordered_json::parse(line);
      RegionCacheEntry e;
      e.id = j.at("id").get<int>();
      e.region.region = matrix_from_json(j.at("region"));
      e.region.mean_region = column_means(e.region.region);
      e.region.size = j.at("size").get<int>();
      e.region.num_nodes = j.at("nodes").get<int>();
      e.assign = matrix_from_json(j.at("assign"));
      entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               ex.what());
    }
  }
  return entries;
}

}  // namespace g2r
