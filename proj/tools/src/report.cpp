#include "qkdbudget_cli/report.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qkdbudget::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

nlohmann::ordered_json ledger_to_json(const BudgetLedger& l) {
  nlohmann::ordered_json j;
  j["m"] = l.m;
  j["n"] = l.n;
  j["e_T"] = l.e_T;
  j["n1"] = l.n1;
  j["e_T1"] = l.e_T1;
  j["q"] = l.q;
  j["t"] = l.t;
  j["nu"] = l.nu;
  j["a"] = l.a;
  j["g_pa"] = l.g_pa_bits;
  j["L"] = l.L;
  j["S"] = l.S;
  j["R"] = l.R;
  j["regime"] = std::string(to_string(l.regime.label));
  j["y"] = l.regime.y;
  // JSON has no infinity; f is unbounded exactly when e_T == 0.
  if (std::isfinite(l.f)) j["f"] = l.f;
  else j["f"] = nullptr;
  j["nu_tilde"] = l.nu_tilde;
  j["S_approx"] = l.S_approx;
  j["feasible"] = l.feasible;
  j["warnings"] = l.warnings;
  return j;
}

nlohmann::ordered_json result_to_json(const OptimizationResult& r, std::string_view target) {
  nlohmann::ordered_json j;
  j["target"] = std::string(target);
  j["argmax"] = r.argmax;
  j["value"] = r.value;
  j["feasible"] = r.feasible;
  j["boundary"] = r.boundary;
  j["iterations"] = r.iterations;
  if (r.witness) {
    j["witness"] = {{"below", r.witness->below},
                    {"above", r.witness->above},
                    {"S_below", r.witness->s_below},
                    {"S_above", r.witness->s_above}};
  } else {
    j["witness"] = nullptr;
  }
  j["ledger"] = ledger_to_json(r.ledger_at_optimum);
  return j;
}

void print_ledger(std::ostream& out, const BudgetLedger& l) {
  fmt::print(out, "block length m        {:>16.6g} pulses\n", l.m);
  fmt::print(out, "sifted bits n         {:>16.6f}\n", l.n);
  fmt::print(out, "errors e_T            {:>16.6f}\n", l.e_T);
  fmt::print(out, "  single-photon n1    {:>16.6f}\n", l.n1);
  fmt::print(out, "  single-photon e_T1  {:>16.6f}\n", l.e_T1);
  fmt::print(out, "ec leakage q          {:>16.6f}\n", l.q);
  fmt::print(out, "attack bound t        {:>16.6f}\n", l.t);
  fmt::print(out, "multi-photon nu       {:>16.6f}\n", l.nu);
  fmt::print(out, "authentication a      {:>16.6f}\n", l.a);
  fmt::print(out, "privacy margin g_pa   {:>16.6f}\n", l.g_pa_bits);
  fmt::print(out, "final key L           {:>16.6f}\n", l.L);
  fmt::print(out, "regime                {} (y = {:.6g})\n", to_string(l.regime.label), l.regime.y);
  fmt::print(out, "secrecy capacity S    {:.9g}\n", l.S);
  fmt::print(out, "small-r_d estimate    {:.9g}\n", l.S_approx);
  fmt::print(out, "key rate R            {:.9g} bit/s\n", l.R);
  fmt::print(out, "feasible              {}\n", l.feasible ? "yes" : "no");
  for (const auto& w : l.warnings) fmt::print(out, "warning: {}\n", w);
}

void print_result(std::ostream& out, const OptimizationResult& r, std::string_view target) {
  fmt::print(out, "target {}\n", target);
  if (r.feasible) {
    fmt::print(out, "optimum {} = {:.12g}\n", target, r.argmax);
  } else {
    fmt::print(out, "no feasible {} found; best at {} = {:.12g}\n", target, target, r.argmax);
  }
  fmt::print(out, "S = {:.12g}\n", r.value);
  fmt::print(out, "iterations {}{}\n", r.iterations, r.boundary ? ", on a search bound" : "");
  if (r.witness) {
    const auto& w = *r.witness;
    fmt::print(out, "witness S({} = {:.12g}) = {:.6g} <= 0 < S({} = {:.12g}) = {:.6g}\n", target,
               w.below, w.s_below, target, w.above, w.s_above);
  }
  fmt::print(out, "\n");
  print_ledger(out, r.ledger_at_optimum);
}

std::vector<std::string> sweep_csv_header(const SweepTable& table) {
  std::vector<std::string> header{table.axis};
  if (table.optimized_mu) header.emplace_back("source.mu");
  for (const char* col : {"n", "e_T", "q", "t", "nu", "a", "L", "S", "R", "regime", "feasible"}) {
    header.emplace_back(col);
  }
  return header;
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << join(sweep_csv_header(table));
  for (const auto& row : table.rows) {
    std::vector<std::string> cells{format_number(row.value)};
    if (table.optimized_mu) cells.push_back(format_number(row.mu));
    if (row.ledger) {
      const auto& l = *row.ledger;
      for (double v : {l.n, l.e_T, l.q, l.t, l.nu, l.a, l.L, l.S, l.R}) {
        cells.push_back(format_number(v));
      }
      cells.emplace_back(to_string(l.regime.label));
      cells.emplace_back(l.feasible ? "true" : "false");
    } else {
      // Failed point: numeric cells empty, feasibility false.
      for (int i = 0; i < 9; ++i) cells.emplace_back();
      cells.emplace_back("error");
      cells.emplace_back("false");
    }
    out << join(cells);
  }
}

void write_sweep_jsonl(std::ostream& out, const SweepTable& table) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    j[table.axis] = row.value;
    j["source.mu"] = row.mu;
    if (row.ledger) j["ledger"] = ledger_to_json(*row.ledger);
    else j["error"] = row.error;
    out << j.dump() << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace qkdbudget::cli
