#include "g2r/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace g2r {

namespace {

void require_paired(const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t min_len, const char* op) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(op) + ": length mismatch");
  if (a.size() < min_len)
    throw std::invalid_argument(std::string(op) + ": need at least " +
                                std::to_string(min_len) + " samples");
}

// Average ranks, 1-based; tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double mean_rank = (i + j) / 2.0 + 1.0;
    for (int t = i; t <= j; ++t) ranks[idx[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

// Inversions (strictly decreasing pairs) via merge sort.
long long count_inversions(std::vector<double>& seq) {
  const std::size_t n = seq.size();
  std::vector<double> buf(n);
  long long inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo, b = mid, o = lo;
      while (a < mid && b < hi) {
        if (seq[a] <= seq[b]) {
          buf[o++] = seq[a++];
        } else {
          inversions += static_cast<long long>(mid - a);
          buf[o++] = seq[b++];
        }
      }
      while (a < mid) buf[o++] = seq[a++];
      while (b < hi) buf[o++] = seq[b++];
      std::copy(buf.begin() + lo, buf.begin() + hi, seq.begin() + lo);
    }
  }
  return inversions;
}

long long tie_pairs(const std::vector<double>& values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  long long pairs = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const long long t = static_cast<long long>(j - i + 1);
    pairs += t * (t - 1) / 2;
    i = j + 1;
  }
  return pairs;
}

}  // namespace

double mse(const std::vector<double>& preds,
           const std::vector<double>& targets) {
  require_paired(preds, targets, 1, "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - targets[i];
    acc += d * d;
  }
  return acc / static_cast<double>(preds.size());
}

double mae(const std::vector<double>& preds,
           const std::vector<double>& targets) {
  require_paired(preds, targets, 1, "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    acc += std::abs(preds[i] - targets[i]);
  return acc / static_cast<double>(preds.size());
}

std::optional<double> spearman(const std::vector<double>& x,
                               const std::vector<double>& y) {
  require_paired(x, y, 2, "spearman");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const int n = static_cast<int>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> kendall(const std::vector<double>& x,
                              const std::vector<double>& y) {
  require_paired(x, y, 2, "kendall");
  const int n = static_cast<int>(x.size());

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });
  std::vector<double> y_sorted(n);
  for (int i = 0; i < n; ++i) y_sorted[i] = y[idx[i]];
  const long long discordant = count_inversions(y_sorted);

  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  const long long n1 = tie_pairs(x);
  const long long n2 = tie_pairs(y);

  long long n3 = 0;  // pairs tied in both coordinates
  {
    std::vector<std::pair<double, double>> xy(n);
    for (int i = 0; i < n; ++i) xy[i] = {x[i], y[i]};
    std::sort(xy.begin(), xy.end());
    std::size_t i = 0;
    while (i < xy.size()) {
      std::size_t j = i;
      while (j + 1 < xy.size() && xy[j + 1] == xy[i]) ++j;
      const long long t = static_cast<long long>(j - i + 1);
      n3 += t * (t - 1) / 2;
      i = j + 1;
    }
  }

  if (n0 == n1 || n0 == n2) return std::nullopt;  // a coordinate is all ties
  const long long concordant_minus_discordant =
      n0 - n1 - n2 + n3 - 2 * discordant;
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(n0 - n1) *
                   static_cast<double>(n0 - n2));
}

double precision_at_k(const std::vector<double>& pred_scores,
                      const std::vector<double>& true_scores, int k) {
  require_paired(pred_scores, true_scores, 1, "precision_at_k");
  if (k < 1 || k > static_cast<int>(pred_scores.size()))
    throw std::invalid_argument("precision_at_k: k must be in [1, n]");

  auto top_k = [k](const std::vector<double>& scores) {
    std::vector<int> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  const std::vector<int> tp = top_k(pred_scores);
  const std::vector<int> tt = top_k(true_scores);
  std::vector<int> common;
  std::set_intersection(tp.begin(), tp.end(), tt.begin(), tt.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["mse"] = report.mse;
  j["mae"] = report.mae;
  if (report.spearman_rho) j["spearman"] = *report.spearman_rho;
  else j["spearman"] = nullptr;
  if (report.kendall_tau) j["kendall"] = *report.kendall_tau;
  else j["kendall"] = nullptr;
  nlohmann::ordered_json pk = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.p_at_k) pk[std::to_string(k)] = v;
  j["p_at_k"] = std::move(pk);
  return j.dump();
}

std::string report_to_csv_row(const EvalReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << report.mse << "," << report.mae << ",";
  if (report.spearman_rho) out << *report.spearman_rho;
  out << ",";
  if (report.kendall_tau) out << *report.kendall_tau;
  for (const auto& [k, v] : report.p_at_k) out << "," << v;
  return out.str();
}

}  // namespace g2r
