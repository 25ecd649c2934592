#include "qkdbudget/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "qkdbudget/errors.hpp"

namespace qkdbudget {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMuGridPoints = 256;
constexpr double kMuRelTol = 1e-7;
constexpr double kComparableHeight = 1e-6;
constexpr int kGoldenMaxIter = 200;
constexpr double kAlphaFloor = 1e-12;
constexpr double kAlphaAbsTol = 5e-10;
constexpr double kAlphaRelTol = 1e-7;
constexpr int kAlphaGridPoints = 400;
constexpr double kMaxBlockLength = 1e24;

struct Point {
  double x = 0;
  double fx = kNegInf;
};

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

// Golden-section maximization on [a, b]; returns the best point evaluated.
template <typename F>
Point golden_maximize(F&& f, double a, double b, int& iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kGoldenMaxIter && (b - a) > kMuRelTol * 0.5 * (a + b); ++it) {
    ++iterations;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Point{c, fc} : Point{d, fd};
}

// Shrinks [lo, hi] around the sign change of s, given s(lo) <= 0 < s(hi).
template <typename F>
Witness bisect_threshold(F&& s, double lo, double hi, double s_lo, double s_hi,
                         double abs_tol, double rel_tol, int& iterations) {
  while ((hi - lo) > abs_tol || (hi - lo) > rel_tol * hi) {
    const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    const double s_mid = s(mid);
    if (s_mid > 0.0) {
      hi = mid;
      s_hi = s_mid;
    } else {
      lo = mid;
      s_lo = s_mid;
    }
  }
  return {lo, hi, s_lo, s_hi};
}

void fill_ledger(OptimizationResult& result, const LinkParameters& link,
                 const SecurityParameters& sec) {
  try {
    result.ledger_at_optimum = compute_ledger(link, sec);
    result.value = result.ledger_at_optimum.S;
  } catch (const std::exception& e) {
    result.ledger_at_optimum = BudgetLedger{};
    result.ledger_at_optimum.warnings.push_back(fmt::format("ledger unavailable: {}", e.what()));
    result.value = kNegInf;
  }
  result.feasible = result.value > 0.0;
}

}  // namespace

double secrecy_capacity_or_ninf(const LinkParameters& link, const SecurityParameters& sec) {
  try {
    return compute_ledger(link, sec).S;
  } catch (const DomainError&) {
    return kNegInf;
  } catch (const InfeasibleError&) {
    return kNegInf;
  }
}

OptimizationResult optimize_mu(const LinkParameters& link, const SecurityParameters& sec,
                               MuBounds bounds) {
  if (!(bounds.lo > 0.0 && bounds.lo < bounds.hi && std::isfinite(bounds.hi))) {
    throw DomainError(
        fmt::format("optimize_mu needs 0 < mu_lo < mu_hi (got [{}, {}])", bounds.lo, bounds.hi));
  }
  LinkParameters trial = link;
  auto s_of = [&](double mu) {
    trial.source.mu = mu;
    return secrecy_capacity_or_ninf(trial, sec);
  };

  const auto grid = log_grid(bounds.lo, bounds.hi, kMuGridPoints);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = s_of(grid[i]);
  const auto best_it = std::max_element(values.begin(), values.end());
  const double best_grid = *best_it;

  OptimizationResult result;
  Point best{grid[static_cast<std::size_t>(best_it - values.begin())], best_grid};
  std::size_t best_index = static_cast<std::size_t>(best_it - values.begin());

  if (std::isfinite(best_grid)) {
    const std::size_t last = grid.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
      const bool local_max = (i == 0 || values[i] >= values[i - 1]) &&
                             (i == last || values[i] >= values[i + 1]);
      if (!local_max || values[i] < best_grid - kComparableHeight) continue;
      const double a = grid[i == 0 ? 0 : i - 1];
      const double b = grid[i == last ? last : i + 1];
      Point refined = golden_maximize(s_of, a, b, result.iterations);
      if (values[i] > refined.fx) refined = {grid[i], values[i]};
      if (refined.fx > best.fx) {
        best = refined;
        best_index = i;
      }
    }
  }

  // An optimum on the first or last grid cell is pinned to the bound when
  // the bound itself is at least as good.
  if (best_index == 0) {
    const double at_lo = s_of(bounds.lo);
    if (at_lo >= best.fx) best = {bounds.lo, at_lo};
  } else if (best_index == grid.size() - 1) {
    const double at_hi = s_of(bounds.hi);
    if (at_hi >= best.fx) best = {bounds.hi, at_hi};
  }
  result.boundary = best.x == bounds.lo || best.x == bounds.hi;
  result.argmax = best.x;

  trial.source.mu = best.x;
  fill_ledger(result, trial, sec);
  return result;
}

OptimizationResult max_attenuation(const LinkParameters& link, const SecurityParameters& sec,
                                   MuPolicy policy, MuBounds bounds) {
  validate(link);
  validate(sec);
  LinkParameters trial = link;
  int evaluations = 0;
  auto s_of = [&](double alpha) {
    trial.channel.alpha = alpha;
    ++evaluations;
    if (policy == MuPolicy::fixed) return secrecy_capacity_or_ninf(trial, sec);
    return optimize_mu(trial, sec, bounds).value;
  };

  OptimizationResult result;
  auto finish = [&](double alpha) {
    result.argmax = alpha;
    trial.channel.alpha = alpha;
    if (policy == MuPolicy::optimized) {
      const auto inner = optimize_mu(trial, sec, bounds);
      trial.source.mu = inner.argmax;
    }
    fill_ledger(result, trial, sec);
    trial.source.mu = link.source.mu;
  };

  const double s_top = s_of(1.0);
  if (!(s_top > 0.0)) {
    finish(1.0);
    result.boundary = true;
    result.feasible = false;
    return result;
  }

  double lo = kAlphaFloor;
  double hi = 1.0;
  double s_lo = s_of(lo);
  double s_hi = s_top;
  if (s_lo > 0.0) {
    finish(lo);
    result.boundary = true;
    return result;
  }

  if (y_depends_on_alpha(link.eve)) {
    // S(alpha) is not known to be monotone: locate the lowest grid cell
    // where S turns positive, then bisect inside it.
    const auto grid = log_grid(kAlphaFloor, 1.0, kAlphaGridPoints);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double s = i + 1 == grid.size() ? s_top : s_of(grid[i]);
      if (s > 0.0) {
        hi = grid[i];
        s_hi = s;
        break;
      }
      lo = grid[i];
      s_lo = s;
    }
  }

  int bisection_steps = 0;
  const Witness w = bisect_threshold(s_of, lo, hi, s_lo, s_hi, kAlphaAbsTol, kAlphaRelTol,
                                     bisection_steps);
  finish(w.above);
  result.witness = w;
  result.iterations = evaluations;
  return result;
}

OptimizationResult min_block_length(const LinkParameters& link, const SecurityParameters& sec) {
  OptimizationResult result;
  const double s_inf = asymptotic_capacity(link, sec);
  SecurityParameters trial = sec;
  if (!(s_inf > 0.0)) {
    fill_ledger(result, link, sec);
    result.argmax = std::numeric_limits<double>::infinity();
    result.value = s_inf;
    result.feasible = false;
    return result;
  }

  auto s_of = [&](double m) {
    trial.m = m;
    ++result.iterations;
    return secrecy_capacity_or_ninf(link, trial);
  };

  double hi = 2.0;
  double s_hi = s_of(hi);
  while (!(s_hi > 0.0)) {
    if (hi > kMaxBlockLength) {
      trial.m = sec.m;
      fill_ledger(result, link, trial);
      result.argmax = std::numeric_limits<double>::infinity();
      result.feasible = false;
      return result;
    }
    hi *= 2.0;
    s_hi = s_of(hi);
  }

  if (hi == 2.0) {
    result.boundary = true;
    trial.m = hi;
    result.argmax = hi;
    fill_ledger(result, link, trial);
    return result;
  }

  double lo = hi / 2.0;
  double s_lo = s_of(lo);
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (mid <= lo || mid >= hi) break;
    const double s_mid = s_of(mid);
    if (s_mid > 0.0) {
      hi = mid;
      s_hi = s_mid;
    } else {
      lo = mid;
      s_lo = s_mid;
    }
  }

  result.witness = Witness{lo, hi, s_lo, s_hi};
  result.argmax = hi;
  trial.m = hi;
  fill_ledger(result, link, trial);
  return result;
}

}  // namespace qkdbudget
