#pragma once

#include <string>
#include <vector>

#include "reviewflow/decimal.hpp"

namespace reviewflow {

/// Token usage and money spent by one agent on one row.
struct CostEntry {
  std::string agent;
  std::string round_id;
  long long row = 0;
  long long input_tokens = 0;
  long long output_tokens = 0;
  Decimal cost;
};

/// Append-only usage log; totals are exact decimal sums, never float
/// accumulation.
class CostLedger {
 public:
  void add(CostEntry entry) { entries_.push_back(std::move(entry)); }

  const std::vector<CostEntry>& entries() const { return entries_; }

  Decimal total_cost() const;
  Decimal round_cost(const std::string& round_id) const;
  long long total_input_tokens() const;
  long long total_output_tokens() const;

 private:
  std::vector<CostEntry> entries_;
};

}  // namespace reviewflow
