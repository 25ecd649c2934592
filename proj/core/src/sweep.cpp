#include "qkdbudget/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "qkdbudget/errors.hpp"
#include "qkdbudget/parallel.hpp"

namespace qkdbudget {
namespace {

constexpr std::array<std::string_view, 14> kSweepable = {
    "source.mu",       "source.tau",       "channel.alpha",  "channel.r_c",
    "detector.eta",    "detector.r_d",     "error_correction.x", "eve.y_override",
    "security.m",      "security.epsilon", "security.g_pa",  "security.g_auth",
    "security.g_ec",   "security.g_tilde_ec",
};

}  // namespace

std::span<const std::string_view> sweepable_parameters() { return kSweepable; }

void apply_parameter(LinkParameters& link, SecurityParameters& sec, std::string_view path,
                     double value) {
  if (path == "source.mu") link.source.mu = value;
  else if (path == "source.tau") link.source.tau = value;
  else if (path == "channel.alpha") link.channel.alpha = value;
  else if (path == "channel.r_c") link.channel.r_c = value;
  else if (path == "detector.eta") link.detector.eta = value;
  else if (path == "detector.r_d") link.detector.r_d = value;
  else if (path == "error_correction.x") link.error_correction.x = value;
  else if (path == "eve.y_override") link.eve.y_override = value;
  else if (path == "security.m") sec.m = value;
  else if (path == "security.epsilon") sec.epsilon = value;
  else if (path == "security.g_pa") sec.g_pa = value;
  else if (path == "security.g_auth") sec.g_auth = value;
  else if (path == "security.g_ec") sec.g_ec = value;
  else if (path == "security.g_tilde_ec") sec.g_tilde_ec = value;
  else throw DomainError(fmt::format("unknown numeric parameter '{}'", path));
}

void validate(const SweepSpec& spec) {
  if (std::find(kSweepable.begin(), kSweepable.end(), spec.axis) == kSweepable.end()) {
    throw DomainError(fmt::format("sweep axis '{}' is not a numeric parameter", spec.axis));
  }
  if (spec.grid.empty()) throw DomainError("sweep grid is empty");
  if (spec.grid.size() > 1) {
    const bool up = spec.grid[1] > spec.grid[0];
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
      const bool ok = up ? spec.grid[i] > spec.grid[i - 1] : spec.grid[i] < spec.grid[i - 1];
      if (!ok) throw DomainError("sweep grid must be strictly monotone");
    }
  }
  for (double v : spec.grid) {
    if (!std::isfinite(v)) throw DomainError("sweep grid values must be finite");
  }
}

SweepTable sweep(const LinkParameters& link, const SecurityParameters& sec,
                 const SweepSpec& spec, unsigned threads) {
  validate(spec);
  const bool optimize = spec.optimize_mu_per_point && spec.axis != "source.mu";

  SweepTable table;
  table.axis = spec.axis;
  table.optimized_mu = optimize;
  table.rows.resize(spec.grid.size());

  parallel_for(spec.grid.size(), threads, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.value = spec.grid[i];
    LinkParameters point_link = link;
    SecurityParameters point_sec = sec;
    try {
      apply_parameter(point_link, point_sec, spec.axis, row.value);
      if (optimize) {
        validate(point_link);
        validate(point_sec);
        auto best = optimize_mu(point_link, point_sec, spec.mu_bounds);
        row.mu = best.argmax;
        point_link.source.mu = best.argmax;
      } else {
        row.mu = point_link.source.mu;
      }
      row.ledger = compute_ledger(point_link, point_sec);
    } catch (const std::exception& e) {
      row.ledger.reset();
      row.error = e.what();
    }
  });
  return table;
}

}  // namespace qkdbudget
