#include "qkdbudget_cli/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/mc_oracle.hpp"
#include "qkdbudget/photon_stats.hpp"

namespace qkdbudget::cli {
namespace {

constexpr std::array<double, 6> kMuGrid{0.05, 0.1, 0.5, 1.0, 2.0, 5.0};
constexpr std::array<double, 7> kYGrid{0.05, 0.1, 0.206, 0.25, 0.293, 0.5, 0.9};

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::vector<CheckResult> oracle_checks() {
  std::vector<CheckResult> out;

  {
    const bool ok = std::round(kIndirectThreshold * 1000) == 293 &&
                    std::round(kDirectThreshold * 1000) == 206;
    out.push_back({"regime thresholds", ok,
                   fmt::format("indirect for y >= {:.5f}, direct for y <= {:.5f}",
                               kIndirectThreshold, kDirectThreshold)});
  }

  {
    double worst = 0;
    int bad = 0;
    for (double mu : kMuGrid) {
      for (double y : kYGrid) {
        const auto regime = regime_classify(y);
        const double closed = multiphoton_leakage(2.0, mu, regime);
        const double series = nu_series(mu, y, regime.label);
        const double d = rel(closed, series);
        worst = std::max(worst, d);
        if (d > 1e-10) ++bad;
      }
    }
    out.push_back({"nu closed form vs series", bad == 0,
                   fmt::format("{}/{} grid points within 1e-10, worst {:.3g}",
                               kMuGrid.size() * kYGrid.size() - bad,
                               kMuGrid.size() * kYGrid.size(), worst)});
  }

  {
    struct Spot {
      double y;
      double expected;
    };
    // Per pulse pair at mu = 1, rounded to 7 digits.
    constexpr std::array<Spot, 3> spots{{{0.5, 0.1548181}, {0.1, 0.0594701}, {0.25, 0.0882651}}};
    bool ok = true;
    std::string detail;
    for (const auto& s : spots) {
      const double v = nu_series(1.0, s.y, regime_classify(s.y).label);
      ok = ok && std::abs(v - s.expected) <= 5e-8;
      detail += fmt::format("{}y={} -> {:.7f}", detail.empty() ? "" : ", ", s.y, v);
    }
    out.push_back({"nu spot values", ok, detail});
  }

  {
    double worst = 0;
    for (double mu : kMuGrid) {
      const double at_high = nu_series(mu, kIndirectThreshold, RegimeLabel::adaptive);
      const double indirect =
          multiphoton_leakage(2.0, mu, {RegimeLabel::indirect, kIndirectThreshold});
      const double at_low = nu_series(mu, kDirectThreshold, RegimeLabel::adaptive);
      const double direct = multiphoton_leakage(2.0, mu, {RegimeLabel::direct, kDirectThreshold});
      worst = std::max({worst, rel(at_high, indirect), rel(at_low, direct)});
    }
    out.push_back({"regime boundary continuity", worst <= 1e-10,
                   fmt::format("worst relative gap {:.3g}", worst)});
  }

  {
    int bad = 0;
    for (double mu : kMuGrid) {
      for (double y : kYGrid) {
        const double nu = multiphoton_leakage(2.0, mu, regime_classify(y));
        if (!(nu < poisson_tail(mu, 2))) ++bad;
      }
    }
    out.push_back({"partial multi-photon leakage", bad == 0,
                   fmt::format("nu below multi-photon fraction at {}/{} points",
                               kMuGrid.size() * kYGrid.size() - bad,
                               kMuGrid.size() * kYGrid.size())});
  }
  return out;
}

std::vector<CheckResult> monte_carlo_checks(const ScenarioConfig& cfg, int seeds) {
  const auto m = cfg.validate.pulses;
  const double md = static_cast<double>(m);
  const auto& link = cfg.link;
  const double n = sifted_length(md, link.source, link.channel, link.detector);
  const double e = error_count(md, link.source, link.channel, link.detector);
  const auto single = single_photon_counts(md, link.source, link.channel, link.detector);
  const std::array<double, 4> expected{n, e, single.n1, single.e_T1};
  constexpr std::array<const char*, 4> names{"sifted n", "errors e_T", "single-click n1",
                                             "single-click e_T1"};

  std::array<int, 4> within{};
  for (int s = 0; s < seeds; ++s) {
    const auto outcome = simulate_block(m, link, cfg.validate.seed + static_cast<std::uint64_t>(s));
    const std::array<double, 4> got{static_cast<double>(outcome.sifted),
                                    static_cast<double>(outcome.errors),
                                    static_cast<double>(outcome.sifted_single_photon),
                                    static_cast<double>(outcome.errors_single_photon)};
    for (std::size_t k = 0; k < 4; ++k) {
      const double sigma = std::sqrt(expected[k] * (1.0 - expected[k] / md));
      if (std::abs(got[k] - expected[k]) <= 4.0 * sigma) ++within[k];
    }
  }

  const int needed = static_cast<int>(std::ceil(0.95 * seeds));
  std::vector<CheckResult> out;
  for (std::size_t k = 0; k < 4; ++k) {
    out.push_back({fmt::format("monte carlo {}", names[k]), within[k] >= needed,
                   fmt::format("{}/{} seeds within 4 sigma of {:.6g} (m = {})", within[k], seeds,
                               expected[k], m)});
  }
  return out;
}

}  // namespace qkdbudget::cli
