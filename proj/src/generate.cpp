#include "g2r/generate.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace g2r {

namespace {

// Union-find connectivity probe on the raw edge draw; cheaper than building
// adjacency lists for draws that will be rejected anyway.
bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = n;
  for (auto [u, v] : edges) {
    int ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Graph generate_er(int n, double p, RngStream& rng, int max_attempts) {
  if (n < 1) throw std::invalid_argument("node count must be positive");
  if (p <= 0.0 || p > 1.0)
    throw std::invalid_argument("edge probability must be in (0, 1]");

  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    edges.clear();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.uniform() < p) edges.emplace_back(u, v);
    if (n == 1 || connected(n, edges)) return Graph(n, std::move(edges));
  }
  throw std::runtime_error("cannot produce connected graph: n=" +
                           std::to_string(n) + " p=" + std::to_string(p) +
                           " after " + std::to_string(max_attempts) +
                           " attempts");
}

Graph generate_er(int n, double p, std::uint64_t seed, int max_attempts) {
  RngStream rng(seed);
  return generate_er(n, p, rng, max_attempts);
}

}  // namespace g2r
