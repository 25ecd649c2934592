#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/optimizer.hpp"
#include "qkdbudget/parameters.hpp"

namespace qkdbudget {

// Numeric parameter paths accepted by sweeps, e.g. "channel.alpha".
std::span<const std::string_view> sweepable_parameters();

// Set the numeric parameter named by `path`. Throws DomainError for an
// unknown path. Does not validate the resulting bundles.
void apply_parameter(LinkParameters& link, SecurityParameters& sec, std::string_view path,
                     double value);

struct SweepSpec {
  std::string axis;
  std::vector<double> grid;
  bool optimize_mu_per_point = false;
  MuBounds mu_bounds;
};

// Throws DomainError unless the axis is known and the grid is non-empty and
// strictly monotone.
void validate(const SweepSpec& spec);

struct SweepRow {
  double value = 0;
  double mu = 0;  // intensity used at this point (optimized or fixed)
  std::optional<BudgetLedger> ledger;
  std::string error;  // set when the point failed
};

struct SweepTable {
  std::string axis;
  bool optimized_mu = false;
  std::vector<SweepRow> rows;
};

// One ledger per grid point, in grid order. `threads` == 0 selects
// default_worker_count().
SweepTable sweep(const LinkParameters& link, const SecurityParameters& sec,
                 const SweepSpec& spec, unsigned threads = 0);

}  // namespace qkdbudget
