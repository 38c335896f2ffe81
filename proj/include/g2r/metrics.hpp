#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g2r {

double mse(const std::vector<double>& preds, const std::vector<double>& targets);
double mae(const std::vector<double>& preds, const std::vector<double>& targets);

// Pearson correlation of average ranks (ties share the mean rank).
// nullopt when either input has zero rank variance.
std::optional<double> spearman(const std::vector<double>& x,
                               const std::vector<double>& y);

// Tie-corrected tau-b, discordances counted by merge sort. nullopt when
// either input is entirely tied.
std::optional<double> kendall(const std::vector<double>& x,
                              const std::vector<double>& y);

// |top-k(pred) intersect top-k(true)| / k; top-k by descending score,
// ascending index on ties.
double precision_at_k(const std::vector<double>& pred_scores,
                      const std::vector<double>& true_scores, int k);

struct EvalReport {
  double mse = 0.0;
  double mae = 0.0;
  std::optional<double> spearman_rho;
  std::optional<double> kendall_tau;
  std::map<int, double> p_at_k;
};

std::string report_to_json(const EvalReport& report);
std::string report_to_csv_row(const EvalReport& report);

}  // namespace g2r
