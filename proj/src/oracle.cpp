#include "g2r/oracle.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace g2r {

int bunke_ged(const Graph& g1, const Graph& g2, int mcs_nodes) {
  const int result = g1.num_nodes() + g2.num_nodes() - 2 * mcs_nodes;
  if (result < 0)
    throw std::invalid_argument("bunke_ged: mcs_nodes=" +
                                std::to_string(mcs_nodes) +
                                " exceeds the graph sizes");
  return result;
}

int phi(const Graph& g1, const Graph& g2, int mcs_edges) {
  const int result = g1.num_edges() + g2.num_edges() - 2 * mcs_edges;
  if (result < 0)
    throw std::invalid_argument("phi: mcs_edges=" + std::to_string(mcs_edges) +
                                " exceeds the graph edge counts");
  return result;
}

bool check_prop2_bound(int ged, int bunke, int phi_val) {
  return ged <= bunke + phi_val;
}

PairLabelReport label_pairs(const Dataset& ds,
                            const std::vector<std::pair<int, int>>& pairs,
                            const OracleOptions& opts) {
  const int n = static_cast<int>(pairs.size());
  std::vector<PairLabel> slots(n);
  std::vector<char> ok(n, 0);
  std::vector<char> violated(n, 0);
  std::atomic<int> cursor{0};
  std::atomic<bool> fatal{false};
  std::string fatal_message;
  std::mutex fatal_mutex;

  auto worker = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= n || fatal.load()) return;
      const auto [a, b] = pairs[i];
      try {
        const Graph& ga = ds.graphs.at(a);
        const Graph& gb = ds.graphs.at(b);
        McsResult mcs = mcs_exact(ga, gb, opts.mcs);
        GedResult ged = ged_exact(ga, gb, opts.ged);

        PairLabel pl;
        pl.a = a;
        pl.b = b;
        pl.mcs_nodes = mcs.node_count;
        pl.mcs_edges = mcs.edge_count;
        pl.ged = ged.cost;
        pl.nmcs = nmcs_target(ga, gb, mcs.node_count);
        pl.nged = nged_target(ga, gb, ged.cost);
        slots[i] = pl;
        ok[i] = 1;

        const int bunke = bunke_ged(ga, gb, mcs.node_count);
        const int ph = phi(ga, gb, mcs.edge_count);
        if (!check_prop2_bound(ged.cost, bunke, ph)) violated[i] = 1;
      } catch (const BudgetExceeded&) {
        // skipped; reported in the summary
      } catch (const SolveTimeout&) {
        // skipped; reported in the summary
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        fatal_message = e.what();
        fatal.store(true);
        return;
      }
    }
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fatal.load()) throw std::runtime_error("label_pairs: " + fatal_message);

  PairLabelReport report;
  report.labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (ok[i]) {
      report.labels.push_back(slots[i]);
      if (violated[i]) ++report.bound_violations;
    } else {
      ++report.skipped;
    }
  }
  return report;
}

}  // namespace g2r
