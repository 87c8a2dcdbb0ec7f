#include "reviewflow/cost.hpp"

namespace reviewflow {

Decimal CostLedger::total_cost() const {
  Decimal total;
  for (const auto& e : entries_) total += e.cost;
  return total;
}

Decimal CostLedger::round_cost(const std::string& round_id) const {
  Decimal total;
  for (const auto& e : entries_) {
    if (e.round_id == round_id) total += e.cost;
  }
  return total;
}

long long CostLedger::total_input_tokens() const {
  long long total = 0;
  for (const auto& e : entries_) total += e.input_tokens;
  return total;
}

long long CostLedger::total_output_tokens() const {
  long long total = 0;
  for (const auto& e : entries_) total += e.output_tokens;
  return total;
}

}  // namespace reviewflow
