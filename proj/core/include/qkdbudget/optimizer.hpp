#pragma once

#include <optional>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/parameters.hpp"

namespace qkdbudget {

struct MuBounds {
  double lo = 1e-3;
  double hi = 10.0;
};

enum class MuPolicy { fixed, optimized };

// Sign-change bracket around a feasibility threshold: S(below) <= 0 < S(above).
struct Witness {
  double below = 0;
  double above = 0;
  double s_below = 0;
  double s_above = 0;
};

struct OptimizationResult {
  double argmax = 0;   // mu*, alpha* or m*
  double value = 0;    // S at argmax
  bool feasible = false;
  bool boundary = false;  // argmax sits on a search bound
  int iterations = 0;
  BudgetLedger ledger_at_optimum;
  std::optional<Witness> witness;
};

// Pulse intensity maximizing S: log-spaced grid scan, then golden-section
// refinement of every near-best bracket.
OptimizationResult optimize_mu(const LinkParameters& link, const SecurityParameters& sec,
                               MuBounds bounds = {});

// Smallest channel transmission with S > 0.
OptimizationResult max_attenuation(const LinkParameters& link, const SecurityParameters& sec,
                                   MuPolicy policy = MuPolicy::fixed, MuBounds bounds = {});

// Smallest integer block length with S > 0.
OptimizationResult min_block_length(const LinkParameters& link, const SecurityParameters& sec);

// Secrecy capacity with domain failures mapped to -infinity.
double secrecy_capacity_or_ninf(const LinkParameters& link, const SecurityParameters& sec);

}  // namespace qkdbudget
