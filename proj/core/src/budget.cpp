#include "qkdbudget/budget.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "qkdbudget/errors.hpp"

namespace qkdbudget {
namespace {

constexpr double kSeriesTailCutoff = 1e-15;
constexpr int kMaxEvenPairs = 200;

double detected_mean(const SourceModel& source, const ChannelModel& channel,
                     const DetectorModel& detector) {
  return detector.eta * source.mu * channel.alpha;
}

// e^u - 1 - u without cancellation for small u.
double exp_minus_linear(double u) {
  if (std::abs(u) >= 0.5) return std::expm1(u) - u;
  double term = u * u / 2.0;
  double sum = 0.0;
  for (int j = 3; std::abs(term) > std::abs(sum) * 1e-18; ++j) {
    sum += term;
    term *= u / j;
  }
  return sum;
}

void require_y(Probability y) {
  if (!(y > 0.0 && y <= 1.0)) throw DomainError(fmt::format("y must lie in (0,1], got {}", y));
}

// Per-pulse-pair leakage, indirect attack on every multi-photon pulse:
// psi_{>=2}(mu) - (1-y)^{-1} [e^{-y mu} - e^{-mu}(1 + mu(1-y))].
double indirect_leakage(double mu, double y) {
  const double d = 1.0 - y;
  const double all = poisson_tail(mu, 2);
  if (d == 0.0) return all;
  const double u = mu * d;
  const double kept = u < 0.5 ? std::exp(-mu) * exp_minus_linear(u) / d
                              : (std::exp(-y * mu) - std::exp(-mu) * (1.0 + u)) / d;
  return all - kept;
}

// 1 - e^{-mu}(sqrt2 sinh(mu/sqrt2) + 2 cosh(mu/sqrt2) - 1), regrouped as
// exponentials around 1 so the leading unit cancels exactly.
double direct_multiphoton_remainder(double mu) {
  const double c = 1.0 / std::numbers::sqrt2;
  const double s = mu * c;
  const double e0 = std::expm1(-mu);
  const double e1 = std::expm1(-(mu - s));
  const double e2 = std::expm1(-(mu + s));
  return e0 - (1.0 + c) * e1 - (1.0 - c) * e2;
}

// e^{-mu}(sinh mu - sqrt2 sinh(mu/sqrt2)): direct-attack yield summed over
// odd photon numbers.
double odd_direct_yield(double mu) {
  const double c = 1.0 / std::numbers::sqrt2;
  const double s = mu * c;
  return -0.5 * std::expm1(-2.0 * mu) - c * (std::expm1(-(mu - s)) - std::expm1(-(mu + s)));
}

double adaptive_leakage(double mu, double y) {
  double sum = poisson_pmf(mu, 2) * y + odd_direct_yield(mu);
  for (int k = 2; k <= kMaxEvenPairs; ++k) {
    if (poisson_tail(mu, 2 * k) < kSeriesTailCutoff) break;
    const double indirect = 1.0 - std::pow(1.0 - y, 2 * k - 1);
    const double direct = 1.0 - std::exp2(1 - k);
    // Equal yields at sigma_e = 1 make the tie-break immaterial.
    const bool indirect_wins = eve_strength_sigma(k, y) >= 1.0;
    sum += poisson_pmf(mu, 2 * k) * (indirect_wins ? indirect : direct);
  }
  return sum;
}

double log2_checked(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(fmt::format("auth_cost: log2 of non-positive {}", what));
  return std::log2(v);
}

// 4 (g + log2 log2 v) log2 v
double auth_term(double g, double v, const char* what) {
  const double l = log2_checked(v, what);
  return 4.0 * (g + log2_checked(l, what)) * l;
}

}  // namespace

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::indirect: return "indirect";
    case RegimeLabel::direct: return "direct";
    case RegimeLabel::adaptive: return "adaptive";
  }
  return "?";
}

Bits sifted_length(double m, const SourceModel& source, const ChannelModel& channel,
                   const DetectorModel& detector) {
  const double detected = poisson_tail(detected_mean(source, channel, detector), 1);
  return m / 2.0 * (detected * (1.0 - detector.r_d) + detector.r_d);
}

Bits error_count(double m, const SourceModel& source, const ChannelModel& channel,
                 const DetectorModel& detector) {
  const double detected = poisson_tail(detected_mean(source, channel, detector), 1);
  return m / 2.0 * (detected * channel.r_c * (1.0 - detector.r_d) + detector.r_d / 2.0);
}

SinglePhotonCounts single_photon_counts(double m, const SourceModel& source,
                                        const ChannelModel& channel,
                                        const DetectorModel& detector) {
  const double single = poisson_pmf(detected_mean(source, channel, detector), 1);
  const double r_d = detector.r_d;
  return {m / 2.0 * (single * (1.0 - r_d) + r_d),
          m / 2.0 * (channel.r_c * single * (1.0 - r_d) + r_d / 2.0)};
}

Bits ec_leakage(Bits n, Bits e_T, double x) {
  return x * ec_leakage_min(n, e_T);
}

Bits ec_leakage_min(Bits n, Bits e_T) {
  if (!(e_T >= 0.0) || !(n >= 0.0)) throw DomainError("ec_leakage needs n, e_T >= 0");
  if (e_T > n) throw DomainError(fmt::format("ec_leakage needs e_T <= n ({} > {})", e_T, n));
  if (n == 0.0 || e_T == 0.0) return 0.0;
  return n * binary_entropy(e_T / n);
}

Bits single_photon_attack_bound(Bits n1, Bits e_T1, Probability epsilon) {
  if (n1 == 0.0) return 0.0;
  if (!(n1 > 0.0)) throw DomainError("single-photon bound needs n1 >= 0");
  if (!(e_T1 >= 0.0 && e_T1 <= n1)) {
    throw DomainError(fmt::format("single-photon bound needs 0 <= e_T1 <= n1 (e_T1 = {})", e_T1));
  }
  const double xi = attack_margin_xi(n1, epsilon);
  const double rate = e_T1 / n1;
  return (n1 - e_T1) * renyi_info_max(rate + xi) + xi * n1 * std::sqrt(1.0 - rate);
}

AttackRegime regime_classify(Probability y) {
  require_y(y);
  if (y > kIndirectThreshold) return {RegimeLabel::indirect, y};
  if (y < kDirectThreshold) return {RegimeLabel::direct, y};
  return {RegimeLabel::adaptive, y};
}

AttackRegime regime_classify(const EveCapability& eve, const DetectorModel& detector,
                             const ChannelModel& channel) {
  return regime_classify(eve_y(eve, detector, channel));
}

double eve_strength_sigma(int k, Probability y) {
  if (k < 2) throw DomainError("eve_strength_sigma needs k >= 2");
  require_y(y);
  return (1.0 - std::pow(1.0 - y, 2 * k - 1)) / (1.0 - std::exp2(1 - k));
}

Bits multiphoton_leakage(double m, double mu, const AttackRegime& regime) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("multiphoton_leakage needs mu > 0");
  require_y(regime.y);
  const double y = regime.y;
  double per_pair = 0.0;
  switch (regime.label) {
    case RegimeLabel::indirect:
      per_pair = indirect_leakage(mu, y);
      break;
    case RegimeLabel::direct:
      per_pair = poisson_pmf(mu, 2) * y + direct_multiphoton_remainder(mu);
      break;
    case RegimeLabel::adaptive:
      per_pair = adaptive_leakage(mu, y);
      break;
  }
  return m / 2.0 * per_pair;
}

Bits auth_cost(Bits n, double m, double g_auth, double g_ec, double g_tilde_ec) {
  if (!(m > 0.0)) throw DomainError("auth_cost needs m > 0");
  const double wide = 2.0 * n * (1.0 + log2_checked(m, "m"));
  return auth_term(g_auth, wide, "2n(1+log2 m)") + auth_term(g_auth, 2.0 * n, "2n") +
         auth_term(g_ec, n, "n") + auth_term(g_auth, g_ec, "g_ec") + g_tilde_ec +
         auth_term(g_auth, g_tilde_ec, "g_tilde_ec");
}

Bits pa_info_bound(double g_pa) {
  if (!(g_pa >= 0.0)) throw DomainError("pa_info_bound needs g_pa >= 0");
  return std::exp2(-g_pa) / std::numbers::ln2;
}

BudgetLedger compute_ledger(const LinkParameters& link, const SecurityParameters& sec) {
  validate(link);
  validate(sec);

  BudgetLedger led;
  const double m = sec.m;
  led.m = m;
  led.regime = regime_classify(link.eve, link.detector, link.channel);

  led.n = sifted_length(m, link.source, link.channel, link.detector);
  led.e_T = error_count(m, link.source, link.channel, link.detector);
  const auto single = single_photon_counts(m, link.source, link.channel, link.detector);
  led.n1 = single.n1;
  led.e_T1 = single.e_T1;

  led.q = ec_leakage(led.n, led.e_T, link.error_correction.x);
  led.t = single_photon_attack_bound(led.n1, led.e_T1, sec.epsilon);
  led.nu = multiphoton_leakage(m, link.source.mu, led.regime);
  led.a = sec.authenticate ? auth_cost(led.n, m, sec.g_auth, sec.g_ec, sec.g_tilde_ec) : 0.0;
  led.g_pa_bits = sec.g_pa;

  led.L = led.n - (led.e_T + led.q + led.t + led.nu) - (led.a + led.g_pa_bits);
  led.S = led.L / m;
  led.R = led.S / link.source.tau;
  led.feasible = led.S > 0.0;
  led.nu_tilde = 2.0 * led.nu / m;

  const double detected =
      poisson_tail(detected_mean(link.source, link.channel, link.detector), 1);
  const double r_c = link.channel.r_c;
  const double r_d = link.detector.r_d;
  double error_weighted;  // f (psi_{>=1} r_c + r_d / 2)
  if (led.e_T > 0.0) {
    led.f = 1.0 + led.q / led.e_T + led.t / led.e_T;
    error_weighted = led.f * (detected * r_c + r_d / 2.0);
  } else {
    led.f = std::numeric_limits<double>::infinity();
    error_weighted = 2.0 * (led.e_T + led.q + led.t) / m;
  }
  led.S_approx = 0.5 * (detected + r_d - error_weighted - led.nu_tilde) -
                 (led.g_pa_bits + led.a) / m;

  if (led.n1 == 0.0) led.warnings.emplace_back("no single-photon signal: t set to 0");
  if (led.n > 0.0 && led.e_T / led.n > 0.25) {
    led.warnings.push_back(fmt::format(
        "sifted error rate e_T/n = {:.4g} exceeds 0.25; leakage bounds may be loose",
        led.e_T / led.n));
  }
  return led;
}

double asymptotic_capacity(const LinkParameters& link, const SecurityParameters& sec) {
  validate(link);
  validate(sec);
  // Every remaining term is linear in m; evaluate one pulse pair.
  const double m = 2.0;
  const double n = sifted_length(m, link.source, link.channel, link.detector);
  const double e_T = error_count(m, link.source, link.channel, link.detector);
  const auto single = single_photon_counts(m, link.source, link.channel, link.detector);
  const double q = ec_leakage(n, e_T, link.error_correction.x);
  const double t = single_photon_attack_bound(single.n1, single.e_T1, 1.0);
  const double nu = multiphoton_leakage(
      m, link.source.mu, regime_classify(link.eve, link.detector, link.channel));
  return (n - e_T - q - t - nu) / m;
}

}  // namespace qkdbudget
