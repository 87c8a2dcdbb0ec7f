#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewflow/decimal.hpp"
#include "reviewflow/errors.hpp"
#include "reviewflow/table.hpp"

namespace reviewflow {

class ConsensusError : public Error {
 public:
  using Error::Error;
};

/// Hierarchical two-junior / one-senior decision rule over 1-5 scores.
struct ConsensusConfig {
  std::string junior1_column;
  std::string junior2_column;
  std::string senior_column;   // cells may be null where no escalation happened
  std::string output_column = "final_score";
  int neutral_score = 3;
};

/// True iff the juniors disagree or both sit on the neutral score: the cases
/// where the senior's verdict is sought and becomes definitive.
bool needs_senior(int junior1, int junior2, int neutral_score = 3);

/// Senior verdict when escalation is needed, otherwise the juniors' exact
/// average (always a half-integer). Throws ConsensusError for out-of-range
/// scores or a missing senior on an escalated pair.
Decimal final_score(int junior1, int junior2, std::optional<int> senior,
                    int neutral_score = 3);

enum class Decision { include, exclude };

/// Named decision cutoff; include iff score >= threshold (inclusive).
struct ThresholdStrategy {
  std::string name;
  Decimal threshold;

  static ThresholdStrategy sensitive();  // 1.5, maximizes recall
  static ThresholdStrategy balanced();   // 3.0, middle ground
  static ThresholdStrategy specific();   // 4.5, maximizes precision
  static std::vector<ThresholdStrategy> all_three();
};

Decision classify(const Decimal& score, const ThresholdStrategy& strategy);

struct ConsensusRowFailure {
  long long row;
  std::string message;
};

struct ConsensusResult {
  ReviewTable table;
  std::vector<ConsensusRowFailure> failures;
};

/// Appends config.output_column with the per-row final score, rendered with
/// one decimal place ("4.0", "2.5"). Rows with an escalation but a null
/// senior cell (and rows with null junior cells) get a null output and a
/// failure record. Non-null cells that do not parse as integers 1..5 are
/// hard errors.
ConsensusResult apply_consensus(const ReviewTable& table,
                                const ConsensusConfig& config);

}  // namespace reviewflow
