#include "qkdbudget/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qkdbudget/errors.hpp"

namespace qkdbudget {
namespace {

void require_mean(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("Poisson mean must be finite and >= 0, got " + std::to_string(mean));
  }
}

// Upward sum of psi_l for l >= k. Terms shrink by mean / (l + 1) < 1 once
// l >= mean, so this is used only when mean < k.
double upper_series(double mean, int k) {
  double term = poisson_pmf(mean, k);
  double sum = 0.0;
  for (int l = k; term > 0.0; ++l) {
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon() * 0.25) break;
    term *= mean / static_cast<double>(l + 1);
  }
  return sum;
}

// Initial single-precision estimate (M. Giles' polynomial fit).
double inverse_erf_seed(double z) {
  double w = -std::log((1.0 - z) * (1.0 + z));
  double p;
  if (w < 5.0) {
    w -= 2.5;
    p = 2.81022636e-08;
    p = 3.43273939e-07 + p * w;
    p = -3.5233877e-06 + p * w;
    p = -4.39150654e-06 + p * w;
    p = 0.00021858087 + p * w;
    p = -0.00125372503 + p * w;
    p = -0.00417768164 + p * w;
    p = 0.246640727 + p * w;
    p = 1.50140941 + p * w;
  } else {
    w = std::sqrt(w) - 3.0;
    p = -0.000200214257;
    p = 0.000100950558 + p * w;
    p = 0.00134934322 + p * w;
    p = -0.00367342844 + p * w;
    p = 0.00573950773 + p * w;
    p = -0.0076224613 + p * w;
    p = 0.00943887047 + p * w;
    p = 1.00167406 + p * w;
    p = 2.83297682 + p * w;
  }
  return p * z;
}

}  // namespace

Probability poisson_pmf(double mean, int count) {
  require_mean(mean);
  if (count < 0) throw DomainError("photon count must be >= 0");
  if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
  if (count <= 64 && mean < 700.0) {
    double p = std::exp(-mean);
    for (int i = 1; i <= count; ++i) p *= mean / static_cast<double>(i);
    return p;
  }
  const double c = static_cast<double>(count);
  return std::exp(-mean + c * std::log(mean) - std::lgamma(c + 1.0));
}

Probability poisson_tail(double mean, int k) {
  require_mean(mean);
  if (k < 0) throw DomainError("tail index must be >= 0");
  if (k == 0) return 1.0;
  if (mean == 0.0) return 0.0;
  if (k == 1) return -std::expm1(-mean);
  if (mean < static_cast<double>(k)) return upper_series(mean, k);
  double head = 0.0;
  for (int l = 0; l < k; ++l) head += poisson_pmf(mean, l);
  return head >= 1.0 ? 0.0 : 1.0 - head;
}

Bits binary_entropy(Probability p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary entropy needs p in [0,1], got " + std::to_string(p));
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double inverse_erf(double z) {
  if (!(std::abs(z) < 1.0)) {
    throw DomainError("inverse_erf needs |z| < 1, got " + std::to_string(z));
  }
  if (z == 0.0) return 0.0;
  const double a = std::abs(z);
  const double slope = 2.0 / std::sqrt(std::numbers::pi);
  double w = std::abs(inverse_erf_seed(a));
  // Newton on erf below 1/2 and on erfc above, where 1 - a is exact.
  for (int iter = 0; iter < 8; ++iter) {
    const double residual = a <= 0.5 ? std::erf(w) - a : (1.0 - a) - std::erfc(w);
    const double step = residual / (slope * std::exp(-w * w));
    w -= step;
    if (std::abs(step) <= 1e-17 * w) break;
  }
  return std::copysign(w, z);
}

double attack_margin_xi(double n1, Probability epsilon) {
  if (!(n1 > 0.0)) throw DomainError("attack margin needs n1 > 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in (0,1], got " + std::to_string(epsilon));
  }
  if (epsilon == 0.0) throw InfeasibleError("epsilon = 0 makes the single-photon margin diverge");
  if (epsilon == 1.0) return 0.0;
  return inverse_erf(1.0 - epsilon) / std::sqrt(2.0 * n1);
}

Bits renyi_info_max(double zeta) {
  if (!(zeta >= 0.0)) throw DomainError("Renyi ceiling needs zeta >= 0");
  if (zeta >= 1.0 / 3.0) return 1.0;
  const double r = (1.0 - 3.0 * zeta) / (1.0 - zeta);
  return 1.0 + std::log2(1.0 - 0.5 * r * r);
}

}  // namespace qkdbudget
