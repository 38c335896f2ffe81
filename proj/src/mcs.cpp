#include "g2r/mcs.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <map>
#include <string>

namespace g2r {

namespace {

using Clock = std::chrono::steady_clock;

// Branch and bound over compatible vertex pairs. A solution is a set of
// label-consistent, mutually injective pairs whose common-edge graph (edges
// present in both graphs under the mapping) is connected; pairs join the
// current set only through a common edge, and a forbidden set makes each
// connected pair-set reachable exactly once. The node bound is the
// label-class matching count; exploration continues at equal node counts so
// the edge tie-break can improve.
struct Searcher {
  const Graph& g1;
  const Graph& g2;
  std::vector<std::vector<char>> adj1, adj2;

  // Compatible pairs, flattened: pair_v[p], pair_w[p].
  std::vector<int> pair_v, pair_w;
  std::vector<char> forbidden;
  std::vector<char> used1, used2;
  std::vector<int> avail1_by_label, avail2_by_label;  // unmapped counts

  std::vector<int> current;  // pair indices
  int current_edges = 0;

  McsResult best;
  long long ticks = 0;
  Clock::time_point start, deadline;
  bool has_deadline = false;

  Searcher(const Graph& a, const Graph& b, double timeout_sec)
      : g1(a), g2(b), start(Clock::now()), has_deadline(timeout_sec > 0) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(
                               has_deadline ? timeout_sec : 0.0));
    adj1 = matrix(a);
    adj2 = matrix(b);

    int max_label = 0;
    for (int v = 0; v < a.num_nodes(); ++v)
      max_label = std::max(max_label, a.label(v));
    for (int w = 0; w < b.num_nodes(); ++w)
      max_label = std::max(max_label, b.label(w));
    avail1_by_label.assign(max_label + 1, 0);
    avail2_by_label.assign(max_label + 1, 0);
    for (int v = 0; v < a.num_nodes(); ++v) ++avail1_by_label[a.label(v)];
    for (int w = 0; w < b.num_nodes(); ++w) ++avail2_by_label[b.label(w)];

    // Pairs ordered by descending degree product so dense matches are
    // branched early; ties by index keep the search deterministic.
    std::vector<std::pair<long long, int>> order;
    for (int v = 0; v < a.num_nodes(); ++v)
      for (int w = 0; w < b.num_nodes(); ++w) {
        if (a.label(v) != b.label(w)) continue;
        pair_v.push_back(v);
        pair_w.push_back(w);
        const int p = static_cast<int>(pair_v.size()) - 1;
        const long long key =
            -(static_cast<long long>(a.degree(v) + 1) * (b.degree(w) + 1));
        order.push_back({key, p});
      }
    std::stable_sort(order.begin(), order.end());
    std::vector<int> v_sorted, w_sorted;
    v_sorted.reserve(pair_v.size());
    w_sorted.reserve(pair_w.size());
    for (auto [key, p] : order) {
      v_sorted.push_back(pair_v[p]);
      w_sorted.push_back(pair_w[p]);
    }
    pair_v.swap(v_sorted);
    pair_w.swap(w_sorted);

    forbidden.assign(pair_v.size(), 0);
    used1.assign(a.num_nodes(), 0);
    used2.assign(b.num_nodes(), 0);
  }

  static std::vector<std::vector<char>> matrix(const Graph& g) {
    std::vector<std::vector<char>> adj(g.num_nodes(),
                                       std::vector<char>(g.num_nodes(), 0));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    return adj;
  }

  void check_deadline() {
    if (++ticks % 2048 != 0 || !has_deadline) return;
    auto now = Clock::now();
    if (now >= deadline)
      throw SolveTimeout(
          "mcs_exact timed out after " +
          std::to_string(std::chrono::duration<double>(now - start).count()) +
          "s");
  }

  int node_bound() const {
    int bound = 0;
    for (std::size_t l = 0; l < avail1_by_label.size(); ++l)
      bound += std::min(avail1_by_label[l], avail2_by_label[l]);
    return bound;
  }

  void maybe_update_best() {
    const int nodes = static_cast<int>(current.size());
    if (nodes > best.node_count ||
        (nodes == best.node_count && current_edges > best.edge_count)) {
      best.node_count = nodes;
      best.edge_count = current_edges;
      best.mapping.clear();
      for (int p : current) best.mapping.emplace_back(pair_v[p], pair_w[p]);
    }
  }

  // Common edges can only still appear on edges with an unmapped endpoint.
  int edge_headroom() const {
    int e1_open = 0, e2_open = 0;
    for (auto [u, v] : g1.edges())
      if (!used1[u] || !used1[v]) ++e1_open;
    for (auto [u, v] : g2.edges())
      if (!used2[u] || !used2[v]) ++e2_open;
    return std::min(e1_open, e2_open);
  }

  void search() {
    check_deadline();
    maybe_update_best();
    const int reachable = static_cast<int>(current.size()) + node_bound();
    if (reachable < best.node_count) return;
    if (reachable == best.node_count &&
        current_edges + edge_headroom() <= best.edge_count)
      return;

    // Candidates sorted by descending common-edge gain, then pair order.
    std::vector<std::pair<int, int>> candidates;  // (-delta, p)
    for (int p = 0; p < static_cast<int>(pair_v.size()); ++p) {
      if (forbidden[p] || used1[pair_v[p]] || used2[pair_w[p]]) continue;
      int delta = 0;
      for (int q : current)
        if (adj1[pair_v[p]][pair_v[q]] && adj2[pair_w[p]][pair_w[q]]) ++delta;
      if (!current.empty() && delta == 0) continue;
      candidates.push_back({-delta, p});
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<int> newly_forbidden;
    for (auto [neg_delta, p] : candidates) {
      const int edge_delta = -neg_delta;
      current.push_back(p);
      current_edges += edge_delta;
      used1[pair_v[p]] = 1;
      used2[pair_w[p]] = 1;
      --avail1_by_label[g1.label(pair_v[p])];
      --avail2_by_label[g2.label(pair_w[p])];

      search();

      ++avail2_by_label[g2.label(pair_w[p])];
      ++avail1_by_label[g1.label(pair_v[p])];
      used2[pair_w[p]] = 0;
      used1[pair_v[p]] = 0;
      current_edges -= edge_delta;
      current.pop_back();

      forbidden[p] = 1;
      newly_forbidden.push_back(p);
    }
    for (int p : newly_forbidden) forbidden[p] = 0;
  }
};

}  // namespace

McsResult mcs_exact(const Graph& g1, const Graph& g2, const McsOptions& opts) {
  if (g1.labeled() != g2.labeled())
    throw std::invalid_argument("cannot mix labeled and unlabeled graphs");
  const int n_max = std::max(g1.num_nodes(), g2.num_nodes());
  if (n_max > opts.max_nodes)
    throw BudgetExceeded("mcs_exact: " + std::to_string(n_max) +
                         " nodes exceeds budget of " +
                         std::to_string(opts.max_nodes));

  Searcher s(g1, g2, opts.timeout_sec);
  s.search();
  std::sort(s.best.mapping.begin(), s.best.mapping.end());
  return s.best;
}

}  // namespace g2r
