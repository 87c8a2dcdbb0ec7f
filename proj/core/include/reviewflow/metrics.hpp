#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reviewflow/consensus.hpp"
#include "reviewflow/errors.hpp"
#include "reviewflow/table.hpp"

namespace reviewflow {

class MetricsError : public Error {
 public:
  using Error::Error;
};

/// Scores with binary ground-truth labels, index-aligned.
struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;  // 0 or 1
};

struct Confusion {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  long long n() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

Confusion confusion(const std::vector<Decision>& predictions,
                    const std::vector<int>& labels);

/// Accuracy is always defined (n >= 1); recall/precision are null when their
/// denominators are zero, never reported as 0.
struct Prf {
  double accuracy = 0;
  std::optional<double> recall;
  std::optional<double> precision;
};

Prf prf(const Confusion& counts);

/// Exact reduced fraction, den > 0.
struct Ratio {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

/// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(score_pos = score_neg)
/// over all positive-negative pairs, accumulated in integers and returned as
/// an exact reduced fraction. Throws MetricsError("degenerate_labels") when
/// only one class is present.
Ratio roc_auc_exact(const LabeledScores& data);
double roc_auc(const LabeledScores& data);

/// ROC staircase: one point per distinct score threshold (descending), with
/// the (0,0) and (1,1) endpoints. The trapezoid over these points equals
/// roc_auc.
std::vector<std::pair<double, double>> roc_points(const LabeledScores& data);

double trapezoid_area(const std::vector<std::pair<double, double>>& points);

/// Score/label columns pulled out of a table: exact decimals for threshold
/// classification, doubles for ranking, with null-score rows counted.
struct ExtractedScores {
  std::vector<Decimal> decimals;
  LabeledScores data;
  long long excluded_null_scores = 0;
};

ExtractedScores extract_scores(const ReviewTable& table,
                               const std::string& score_column,
                               const std::string& label_column);

struct StrategyMetrics {
  ThresholdStrategy strategy;
  Confusion counts;
  Prf scores;
};

struct MetricsReport {
  long long n = 0;
  long long n_positive = 0;
  double positive_rate = 0;
  long long excluded_null_scores = 0;
  std::vector<StrategyMetrics> strategies;
  std::optional<double> auc;
  std::optional<std::string> auc_error;

  /// Canonical JSON (sorted keys, 2-space indent).
  std::string to_json() const;
  /// Aligned text table: n / %positive, one row per strategy, AUC.
  std::string to_text() const;
};

/// Scores the table against ground truth: parses score_column as decimals
/// and label_column as 0/1, excludes (and counts) null-score rows, then
/// computes per-strategy confusion metrics and the AUC. Unparsable cells
/// report their row index.
MetricsReport evaluate(const ReviewTable& table, const std::string& score_column,
                       const std::string& label_column,
                       const std::vector<ThresholdStrategy>& strategies);

}  // namespace reviewflow
