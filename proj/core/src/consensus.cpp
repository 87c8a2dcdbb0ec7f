#include "reviewflow/consensus.hpp"

namespace reviewflow {

namespace {

void check_score_range(int score, const char* which) {
  if (score < 1 || score > 5) {
    throw ConsensusError(std::string(which) + " score " +
                         std::to_string(score) + " is outside 1..5");
  }
}

}  // namespace

bool needs_senior(int junior1, int junior2, int neutral_score) {
  check_score_range(junior1, "junior");
  check_score_range(junior2, "junior");
  return junior1 != junior2 ||
         (junior1 == neutral_score && junior2 == neutral_score);
}

Decimal final_score(int junior1, int junior2, std::optional<int> senior,
                    int neutral_score) {
  if (needs_senior(junior1, junior2, neutral_score)) {
    if (!senior.has_value()) {
      throw ConsensusError("missing_senior: juniors scored " +
                           std::to_string(junior1) + "/" +
                           std::to_string(junior2) +
                           " but no senior score is present");
    }
    check_score_range(*senior, "senior");
    return Decimal::from_int(*senior);
  }
  // equal non-neutral juniors: exact average, always a half-integer
  return Decimal(junior1 + junior2, 0) * Decimal(5, -1);
}

ThresholdStrategy ThresholdStrategy::sensitive() {
  return {"sensitive", Decimal(15, -1)};
}

ThresholdStrategy ThresholdStrategy::balanced() {
  return {"balanced", Decimal(3, 0)};
}

ThresholdStrategy ThresholdStrategy::specific() {
  return {"specific", Decimal(45, -1)};
}

std::vector<ThresholdStrategy> ThresholdStrategy::all_three() {
  return {sensitive(), balanced(), specific()};
}

Decision classify(const Decimal& score, const ThresholdStrategy& strategy) {
  return score >= strategy.threshold ? Decision::include : Decision::exclude;
}

namespace {

// Parses a 1..5 integer cell; null yields nullopt; anything else throws.
std::optional<int> parse_score_cell(const Cell& cell, const std::string& column,
                                    std::size_t row) {
  if (!cell.has_value()) return std::nullopt;
  const auto parsed = Decimal::parse(*cell);
  if (!parsed || parsed->exponent() < 0) {
    throw ConsensusError("cell '" + *cell + "' in column '" + column +
                         "' row " + std::to_string(row) +
                         " is not an integer score");
  }
  const Decimal& d = *parsed;
  if (d < Decimal::from_int(1) || d > Decimal::from_int(5)) {
    throw ConsensusError("cell '" + *cell + "' in column '" + column +
                         "' row " + std::to_string(row) +
                         " is outside 1..5");
  }
  long long v = d.mantissa();
  for (int e = 0; e < d.exponent(); ++e) v *= 10;
  return static_cast<int>(v);
}

}  // namespace

ConsensusResult apply_consensus(const ReviewTable& table,
                                const ConsensusConfig& config) {
  for (const auto& column :
       {config.junior1_column, config.junior2_column, config.senior_column}) {
    if (!table.has_column(column)) {
      throw ConsensusError("missing column '" + column + "'");
    }
  }

  ConsensusResult result;
  std::vector<Cell> output(table.row_count());

  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto j1 = parse_score_cell(table.cell(r, config.junior1_column),
                                     config.junior1_column, r);
    const auto j2 = parse_score_cell(table.cell(r, config.junior2_column),
                                     config.junior2_column, r);
    const auto senior = parse_score_cell(table.cell(r, config.senior_column),
                                         config.senior_column, r);
    if (!j1.has_value() || !j2.has_value()) {
      result.failures.push_back({static_cast<long long>(r),
                                 "junior score missing (null cell)"});
      continue;
    }
    try {
      output[r] = final_score(*j1, *j2, senior, config.neutral_score)
                      .to_fixed(1);
    } catch (const ConsensusError& e) {
      result.failures.push_back({static_cast<long long>(r), e.what()});
    }
  }

  result.table = append_columns(table, {{config.output_column, output}});
  return result;
}

}  // namespace reviewflow
