#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/optimizer.hpp"
#include "qkdbudget/sweep.hpp"

namespace qkdbudget::cli {

nlohmann::ordered_json ledger_to_json(const BudgetLedger& ledger);

// target is "mu", "alpha" or "m".
nlohmann::ordered_json result_to_json(const OptimizationResult& result, std::string_view target);

void print_ledger(std::ostream& out, const BudgetLedger& ledger);
void print_result(std::ostream& out, const OptimizationResult& result, std::string_view target);

// Shortest round-tripping decimal form ("%.17g" precision).
std::string format_number(double v);

std::vector<std::string> sweep_csv_header(const SweepTable& table);
void write_sweep_csv(std::ostream& out, const SweepTable& table);
// One JSON object per row.
void write_sweep_jsonl(std::ostream& out, const SweepTable& table);

// Parsed back from CSV. Cells keep their text so callers can compare exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(std::istream& in);

}  // namespace qkdbudget::cli
