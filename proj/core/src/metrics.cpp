#include "reviewflow/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

namespace reviewflow {

using nlohmann::json;

Confusion confusion(const std::vector<Decision>& predictions,
                    const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) {
    throw MetricsError("predictions and labels differ in length");
  }
  Confusion c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool included = predictions[i] == Decision::include;
    const bool positive = labels[i] != 0;
    if (included && positive) ++c.tp;
    else if (included && !positive) ++c.fp;
    else if (!included && !positive) ++c.tn;
    else ++c.fn;
  }
  return c;
}

Prf prf(const Confusion& counts) {
  const long long n = counts.n();
  if (n < 1) throw MetricsError("empty confusion matrix");
  Prf out;
  out.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(n);
  if (counts.tp + counts.fn > 0) {
    out.recall = static_cast<double>(counts.tp) /
                 static_cast<double>(counts.tp + counts.fn);
  }
  if (counts.tp + counts.fp > 0) {
    out.precision = static_cast<double>(counts.tp) /
                    static_cast<double>(counts.tp + counts.fp);
  }
  return out;
}

namespace {

struct ClassCounts {
  long long positives = 0;
  long long negatives = 0;
};

ClassCounts count_classes(const LabeledScores& data) {
  if (data.scores.size() != data.labels.size()) {
    throw MetricsError("scores and labels differ in length");
  }
  if (data.scores.empty()) throw MetricsError("empty input");
  ClassCounts c;
  for (int label : data.labels) {
    if (label == 1) ++c.positives;
    else if (label == 0) ++c.negatives;
    else throw MetricsError("labels must be 0 or 1");
  }
  if (c.positives == 0 || c.negatives == 0) {
    throw MetricsError("degenerate_labels: need at least one positive and one negative");
  }
  return c;
}

Ratio reduce(long long num, long long den) {
  const long long g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace

Ratio roc_auc_exact(const LabeledScores& data) {
  const ClassCounts counts = count_classes(data);
  const std::size_t n = data.scores.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.scores[a] < data.scores[b];
  });

  // ascending walk over tie groups: each positive beats every negative seen
  // in strictly lower groups and half-ties with negatives in its own group
  long long wins = 0;
  long long tie_pairs = 0;
  long long negatives_below = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    long long group_pos = 0;
    long long group_neg = 0;
    while (j < n && data.scores[order[j]] == data.scores[order[i]]) {
      if (data.labels[order[j]] == 1) ++group_pos;
      else ++group_neg;
      ++j;
    }
    wins += group_pos * negatives_below;
    tie_pairs += group_pos * group_neg;
    negatives_below += group_neg;
    i = j;
  }

  return reduce(2 * wins + tie_pairs, 2 * counts.positives * counts.negatives);
}

double roc_auc(const LabeledScores& data) { return roc_auc_exact(data).value(); }

std::vector<std::pair<double, double>> roc_points(const LabeledScores& data) {
  const ClassCounts counts = count_classes(data);
  const std::size_t n = data.scores.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.scores[a] > data.scores[b];
  });

  std::vector<std::pair<double, double>> points;
  points.emplace_back(0.0, 0.0);
  long long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && data.scores[order[j]] == data.scores[order[i]]) {
      if (data.labels[order[j]] == 1) ++tp;
      else ++fp;
      ++j;
    }
    points.emplace_back(
        static_cast<double>(fp) / static_cast<double>(counts.negatives),
        static_cast<double>(tp) / static_cast<double>(counts.positives));
    i = j;
  }
  if (points.back() != std::make_pair(1.0, 1.0)) {
    points.emplace_back(1.0, 1.0);
  }
  return points;
}

double trapezoid_area(const std::vector<std::pair<double, double>>& points) {
  double area = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [x0, y0] = points[i - 1];
    const auto& [x1, y1] = points[i];
    area += (x1 - x0) * (y0 + y1) / 2.0;
  }
  return area;
}

namespace {

std::string format4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string format_opt4(const std::optional<double>& v) {
  return v ? format4(*v) : "n/a";
}

}  // namespace

std::string MetricsReport::to_json() const {
  json doc;
  doc["n"] = n;
  doc["n_positive"] = n_positive;
  doc["positive_rate"] = positive_rate;
  doc["excluded_null_scores"] = excluded_null_scores;
  json rows = json::array();
  for (const auto& s : strategies) {
    json row;
    row["strategy"] = s.strategy.name;
    row["threshold"] = s.strategy.threshold.to_string();
    row["tp"] = s.counts.tp;
    row["fp"] = s.counts.fp;
    row["tn"] = s.counts.tn;
    row["fn"] = s.counts.fn;
    row["accuracy"] = s.scores.accuracy;
    if (s.scores.recall) row["recall"] = *s.scores.recall;
    else row["recall"] = nullptr;
    if (s.scores.precision) row["precision"] = *s.scores.precision;
    else row["precision"] = nullptr;
    rows.push_back(std::move(row));
  }
  doc["strategies"] = std::move(rows);
  if (auc) doc["auc"] = *auc;
  else doc["auc"] = nullptr;
  if (auc_error) doc["auc_error"] = *auc_error;
  return doc.dump(2);
}

std::string MetricsReport::to_text() const {
  std::string out;
  out += "n=" + std::to_string(n) + "  positives=" + std::to_string(n_positive) +
         " (" + format4(positive_rate * 100.0) + "%)";
  if (excluded_null_scores > 0) {
    out += "  excluded_null_scores=" + std::to_string(excluded_null_scores);
  }
  out += '\n';

  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %-9s %-9s %-9s %-9s %5s %5s %5s %5s\n",
                "strategy", "threshold", "accuracy", "recall", "precision",
                "tp", "fp", "tn", "fn");
  out += line;
  for (const auto& s : strategies) {
    std::snprintf(line, sizeof(line),
                  "%-10s %-9s %-9s %-9s %-9s %5lld %5lld %5lld %5lld\n",
                  s.strategy.name.c_str(), s.strategy.threshold.to_string().c_str(),
                  format4(s.scores.accuracy).c_str(),
                  format_opt4(s.scores.recall).c_str(),
                  format_opt4(s.scores.precision).c_str(), s.counts.tp,
                  s.counts.fp, s.counts.tn, s.counts.fn);
    out += line;
  }
  if (auc) {
    out += "auc: " + format4(*auc) + "\n";
  } else {
    out += "auc: n/a (" + auc_error.value_or("unavailable") + ")\n";
  }
  return out;
}

ExtractedScores extract_scores(const ReviewTable& table,
                               const std::string& score_column,
                               const std::string& label_column) {
  for (const auto& column : {score_column, label_column}) {
    if (!table.has_column(column)) {
      throw MetricsError("missing column '" + column + "'");
    }
  }

  ExtractedScores out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const Cell& score_cell = table.cell(r, score_column);
    if (!score_cell.has_value()) {
      ++out.excluded_null_scores;
      continue;
    }
    const auto score = Decimal::parse(*score_cell);
    if (!score) {
      throw MetricsError("row " + std::to_string(r) + ": score cell '" +
                         *score_cell + "' is not a decimal number");
    }
    const Cell& label_cell = table.cell(r, label_column);
    if (!label_cell.has_value() || (*label_cell != "0" && *label_cell != "1")) {
      throw MetricsError("row " + std::to_string(r) + ": label cell '" +
                         (label_cell ? *label_cell : std::string("\\N")) +
                         "' is not 0 or 1");
    }
    out.decimals.push_back(*score);
    out.data.scores.push_back(score->to_double());
    out.data.labels.push_back(*label_cell == "1" ? 1 : 0);
  }
  return out;
}

MetricsReport evaluate(const ReviewTable& table, const std::string& score_column,
                       const std::string& label_column,
                       const std::vector<ThresholdStrategy>& strategies) {
  ExtractedScores extracted =
      extract_scores(table, score_column, label_column);
  const std::vector<Decimal>& scores = extracted.decimals;
  const LabeledScores& data = extracted.data;

  MetricsReport report;
  report.excluded_null_scores = extracted.excluded_null_scores;
  report.n = static_cast<long long>(scores.size());
  report.n_positive =
      std::count(data.labels.begin(), data.labels.end(), 1);
  report.positive_rate =
      report.n > 0 ? static_cast<double>(report.n_positive) /
                         static_cast<double>(report.n)
                   : 0.0;

  if (report.n > 0) {
    for (const auto& strategy : strategies) {
      std::vector<Decision> predictions;
      predictions.reserve(scores.size());
      for (const auto& score : scores) {
        predictions.push_back(classify(score, strategy));
      }
      StrategyMetrics sm;
      sm.strategy = strategy;
      sm.counts = confusion(predictions, data.labels);
      sm.scores = prf(sm.counts);
      report.strategies.push_back(std::move(sm));
    }
  }

  try {
    report.auc = roc_auc(data);
  } catch (const MetricsError& e) {
    report.auc_error = e.what();
  }
  return report;
}

}  // namespace reviewflow
