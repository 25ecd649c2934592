#pragma once

#include <algorithm>
#include <cmath>

#include "qkdbudget/parameters.hpp"

namespace qkdbudget::testing {

// Reference link used across the suites: fiber, 10% transmission, 50%
// detector, technology-limited eavesdropper (y = eta * alpha = 0.05).
inline LinkParameters golden_link() {
  LinkParameters link;
  link.source = {0.1, 1e-9};
  link.channel = {0.1, 0.01, Medium::fiber};
  link.detector = {0.5, 1e-5};
  link.error_correction = {1.2};
  link.eve = {EveClass::technology_limited, std::nullopt};
  return link;
}

inline SecurityParameters golden_security() {
  SecurityParameters sec;
  sec.m = 1e7;
  sec.epsilon = 0.01;
  sec.g_pa = sec.g_auth = sec.g_ec = sec.g_tilde_ec = 30.0;
  return sec;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace qkdbudget::testing
