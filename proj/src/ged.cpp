#include "g2r/ged.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <queue>
#include <string>

namespace g2r {

namespace {

using Clock = std::chrono::steady_clock;

struct SearchNode {
  int f;            // g + admissible lower bound
  int g;            // cost of the prefix
  int depth;        // number of processed g1 nodes
  int parent;       // arena index, -1 at the root
  int assigned;     // g2 node for this depth, -1 = deleted
  unsigned used;    // bitmask of consumed g2 nodes
  int e2_used;      // g2 edges with both endpoints consumed
};

struct GedSearcher {
  const Graph& g1;
  const Graph& g2;
  std::vector<std::vector<char>> adj1, adj2;
  std::vector<int> order;             // g1 nodes, descending degree
  std::vector<int> e1_acc_by_depth;   // g1 edges inside the first d nodes
  std::vector<std::vector<int>> suffix_labels;  // label counts from depth d on
  int vocab = 1;
  Clock::time_point start, deadline;
  bool has_deadline;
  long long ticks = 0;

  static constexpr std::size_t kArenaLimit = 8u << 20;

  GedSearcher(const Graph& a, const Graph& b, double timeout_sec)
      : g1(a), g2(b), start(Clock::now()), has_deadline(timeout_sec > 0) {
    adj1 = matrix(a);
    adj2 = matrix(b);
    order.resize(a.num_nodes());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return a.degree(x) > a.degree(y);
    });
    deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(
                               has_deadline ? timeout_sec : 0.0));

    const int n1 = a.num_nodes();
    e1_acc_by_depth.assign(n1 + 1, 0);
    for (int d = 1; d <= n1; ++d) {
      int acc = e1_acc_by_depth[d - 1];
      for (int j = 0; j < d - 1; ++j)
        if (adj1[order[d - 1]][order[j]]) ++acc;
      e1_acc_by_depth[d] = acc;
    }

    for (int v = 0; v < a.num_nodes(); ++v)
      vocab = std::max(vocab, a.label(v) + 1);
    for (int v = 0; v < b.num_nodes(); ++v)
      vocab = std::max(vocab, b.label(v) + 1);
    suffix_labels.assign(n1 + 1, std::vector<int>(vocab, 0));
    for (int d = n1 - 1; d >= 0; --d) {
      suffix_labels[d] = suffix_labels[d + 1];
      ++suffix_labels[d][g1.label(order[d])];
    }
  }

  static std::vector<std::vector<char>> matrix(const Graph& g) {
    std::vector<std::vector<char>> adj(g.num_nodes(),
                                       std::vector<char>(g.num_nodes(), 0));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    return adj;
  }

  void check_deadline() {
    if (++ticks % 4096 != 0 || !has_deadline) return;
    auto now = Clock::now();
    if (now >= deadline)
      throw SolveTimeout(
          "ged_exact timed out after " +
          std::to_string(std::chrono::duration<double>(now - start).count()) +
          "s");
  }

  // Unmatched node surplus + unavoidable label substitutions among the
  // remaining nodes + mismatch between the yet-unaccounted edge counts.
  int lower_bound(int depth, unsigned used, int e2_used) const {
    const int r1 = g1.num_nodes() - depth;
    const int r2 = g2.num_nodes() - __builtin_popcount(used);

    int matchable = 0;
    std::vector<int> c2(vocab, 0);
    for (int v = 0; v < g2.num_nodes(); ++v)
      if (!(used >> v & 1)) ++c2[g2.label(v)];
    for (int l = 0; l < vocab; ++l)
      matchable += std::min(suffix_labels[depth][l], c2[l]);
    const int h_nodes =
        std::abs(r1 - r2) + std::max(0, std::min(r1, r2) - matchable);

    const int e1_rem = g1.num_edges() - e1_acc_by_depth[depth];
    const int e2_rem = g2.num_edges() - e2_used;
    return h_nodes + std::abs(e1_rem - e2_rem);
  }

  // Returns the matched (g1, g2) node pairs of an optimal assignment and
  // writes the optimal cost to *out_cost.
  std::vector<std::pair<int, int>> solve(int* out_cost) {
    const int n1 = g1.num_nodes(), n2 = g2.num_nodes();
    std::vector<SearchNode> arena;
    using Entry = std::pair<int, int>;  // (f, arena index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

    arena.push_back({lower_bound(0, 0, 0), 0, 0, -1, 0, 0u, 0});
    open.push({arena[0].f, 0});

    std::vector<int> prefix(std::max(n1, 1), -2);
    while (!open.empty()) {
      check_deadline();
      const int idx = open.top().second;
      open.pop();
      const SearchNode node = arena[idx];

      for (int i = node.depth, cur = idx; i > 0; --i) {
        prefix[i - 1] = arena[cur].assigned;
        cur = arena[cur].parent;
      }

      if (node.depth == n1) {
        *out_cost = node.g + (n2 - __builtin_popcount(node.used)) +
                    (g2.num_edges() - node.e2_used);
        std::vector<std::pair<int, int>> mapped;
        for (int i = 0; i < n1; ++i)
          if (prefix[i] >= 0) mapped.emplace_back(order[i], prefix[i]);
        return mapped;
      }
      if (arena.size() > kArenaLimit)
        throw SolveTimeout("ged_exact exceeded the search memory budget");

      const int u = order[node.depth];

      for (int v = 0; v < n2; ++v) {
        if (node.used >> v & 1) continue;
        int delta = (g1.label(u) != g2.label(v)) ? 1 : 0;
        int e2_gain = 0;
        for (int j = 0; j < node.depth; ++j) {
          const int uj = order[j];
          const int wj = prefix[j];
          if (wj >= 0) {
            const bool e1 = adj1[u][uj], e2 = adj2[v][wj];
            if (e1 != e2) ++delta;
            if (e2) ++e2_gain;
          } else if (adj1[u][uj]) {
            ++delta;  // edge into a deleted node goes with it
          }
        }
        const int g_child = node.g + delta;
        const unsigned used_child = node.used | (1u << v);
        const int e2_child = node.e2_used + e2_gain;
        const int h = lower_bound(node.depth + 1, used_child, e2_child);
        arena.push_back({g_child + h, g_child, node.depth + 1, idx, v,
                         used_child, e2_child});
        open.push({g_child + h, static_cast<int>(arena.size()) - 1});
      }

      {
        int delta = 1;
        for (int j = 0; j < node.depth; ++j)
          if (adj1[u][order[j]]) ++delta;
        const int g_child = node.g + delta;
        const int h = lower_bound(node.depth + 1, node.used, node.e2_used);
        arena.push_back({g_child + h, g_child, node.depth + 1, idx, -1,
                         node.used, node.e2_used});
        open.push({g_child + h, static_cast<int>(arena.size()) - 1});
      }
    }
    throw std::logic_error("ged search exhausted without reaching a goal");
  }
};

// Ordered unit-cost edit sequence realizing a node mapping, in g1's
// orientation: edge deletions, node deletions, substitutions, node
// insertions, edge insertions.
GedResult path_from_mapping(const Graph& g1, const Graph& g2,
                            const std::vector<std::pair<int, int>>& mapped) {
  std::vector<int> image(g1.num_nodes(), -1);   // g1 -> g2
  std::vector<int> source(g2.num_nodes(), -1);  // g2 -> g1
  for (auto [u, v] : mapped) {
    image[u] = v;
    source[v] = u;
  }

  GedResult result;
  auto& ops = result.edit_path;

  for (auto [u, w] : g1.edges()) {
    const bool kept =
        image[u] >= 0 && image[w] >= 0 && g2.has_edge(image[u], image[w]);
    if (!kept) ops.push_back({EditOp::kDeleteEdge, u, w, 0});
  }
  for (int u = 0; u < g1.num_nodes(); ++u)
    if (image[u] < 0) ops.push_back({EditOp::kDeleteNode, u, -1, 0});
  for (auto [u, v] : mapped)
    if (g1.label(u) != g2.label(v))
      ops.push_back({EditOp::kRelabel, u, -1, g2.label(v)});

  std::vector<int> replay_id(g2.num_nodes(), -1);
  for (auto [u, v] : mapped) replay_id[v] = u;
  int next_id = g1.num_nodes();
  for (int v = 0; v < g2.num_nodes(); ++v) {
    if (source[v] < 0) {
      replay_id[v] = next_id++;
      ops.push_back({EditOp::kInsertNode, replay_id[v], -1, g2.label(v)});
    }
  }
  for (auto [v, w] : g2.edges()) {
    const bool kept =
        source[v] >= 0 && source[w] >= 0 && g1.has_edge(source[v], source[w]);
    if (!kept)
      ops.push_back({EditOp::kInsertEdge, replay_id[v], replay_id[w], 0});
  }

  result.cost = static_cast<int>(ops.size());
  return result;
}

}  // namespace

GedResult ged_exact(const Graph& g1, const Graph& g2, const GedOptions& opts) {
  if (g1.labeled() != g2.labeled())
    throw std::invalid_argument("cannot mix labeled and unlabeled graphs");
  const int n_max = std::max(g1.num_nodes(), g2.num_nodes());
  if (n_max > opts.max_nodes)
    throw BudgetExceeded("ged_exact: " + std::to_string(n_max) +
                         " nodes exceeds budget of " +
                         std::to_string(opts.max_nodes));
  if (n_max > 31)
    throw BudgetExceeded("ged_exact: node bitmask supports at most 31 nodes");

  // Search from the smaller side; the node mapping is orientation-free.
  const bool swapped = g1.num_nodes() > g2.num_nodes();
  const Graph& a = swapped ? g2 : g1;
  const Graph& b = swapped ? g1 : g2;

  GedSearcher searcher(a, b, opts.timeout_sec);
  int cost = 0;
  std::vector<std::pair<int, int>> mapped = searcher.solve(&cost);
  if (swapped)
    for (auto& [u, v] : mapped) std::swap(u, v);

  GedResult result = path_from_mapping(g1, g2, mapped);
  if (result.cost != cost)
    throw std::logic_error("edit path cost " + std::to_string(result.cost) +
                           " disagrees with search cost " +
                           std::to_string(cost));
  return result;
}

}  // namespace g2r
