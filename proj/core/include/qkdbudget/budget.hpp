#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qkdbudget/parameters.hpp"
#include "qkdbudget/photon_stats.hpp"

namespace qkdbudget {

// Above this y the indirect (store-and-measure) attack is optimal for every
// multi-photon pulse.
inline constexpr double kIndirectThreshold = 1.0 - 1.0 / std::numbers::sqrt2;
// Below this y the direct attack is optimal for every multi-photon pulse.
inline const double kDirectThreshold = 1.0 - std::cbrt(0.5);

enum class RegimeLabel { indirect, direct, adaptive };

std::string_view to_string(RegimeLabel label);

// Eve's optimal multi-photon strategy class.
struct AttackRegime {
  RegimeLabel label = RegimeLabel::indirect;
  Probability y = 1.0;
};

// Expected bit counts of the key-length ledger for one block of m pulses.
struct BudgetLedger {
  Bits n = 0;        // sifted length
  Bits e_T = 0;      // errors in the sifted string
  Bits n1 = 0;       // single-click part of n
  Bits e_T1 = 0;     // single-click part of e_T
  Bits q = 0;        // error-correction leakage
  Bits t = 0;        // single-photon attack bound
  Bits nu = 0;       // multi-photon leakage
  Bits a = 0;        // authentication cost
  Bits g_pa_bits = 0;
  Bits L = 0;        // final key length
  double m = 0;
  double S = 0;      // secrecy capacity L / m
  double R = 0;      // key rate S / tau, bits per second
  AttackRegime regime;
  double f = 0;          // 1 + Q + T; +inf when e_T == 0
  double nu_tilde = 0;   // 2 nu / m
  double S_approx = 0;   // small-dark-count form of S
  bool feasible = false; // S > 0
  std::vector<std::string> warnings;
};

Bits sifted_length(double m, const SourceModel& source, const ChannelModel& channel,
                   const DetectorModel& detector);

Bits error_count(double m, const SourceModel& source, const ChannelModel& channel,
                 const DetectorModel& detector);

struct SinglePhotonCounts {
  Bits n1 = 0;
  Bits e_T1 = 0;
};

SinglePhotonCounts single_photon_counts(double m, const SourceModel& source,
                                        const ChannelModel& channel,
                                        const DetectorModel& detector);

// q = x n h(e_T / n). Zero when n or e_T is zero.
Bits ec_leakage(Bits n, Bits e_T, double x);

// Shannon minimum n h(e_T / n).
Bits ec_leakage_min(Bits n, Bits e_T);

// t = T e_T, evaluated in the cancelled form
//   (n1 - e_T1) I(e_T1/n1 + xi) + xi n1 sqrt(1 - e_T1/n1)
// so that e_T = 0 is regular. Returns 0 when n1 == 0.
Bits single_photon_attack_bound(Bits n1, Bits e_T1, Probability epsilon);

AttackRegime regime_classify(const EveCapability& eve, const DetectorModel& detector,
                             const ChannelModel& channel);
AttackRegime regime_classify(Probability y);

// Ratio of indirect to direct information for a pulse of 2k photons.
double eve_strength_sigma(int k, Probability y);

// Upper bound on nu over m pulses, closed form chosen by the regime label.
Bits multiphoton_leakage(double m, double mu, const AttackRegime& regime);

// Continuous authentication cost with real-valued logarithms.
Bits auth_cost(Bits n, double m, double g_auth, double g_ec, double g_tilde_ec);

// Bound on Eve's expected information after privacy amplification.
Bits pa_info_bound(double g_pa);

BudgetLedger compute_ledger(const LinkParameters& link, const SecurityParameters& sec);

// m -> infinity limit of S: no authentication or privacy-amplification cost
// and a vanishing single-photon margin.
double asymptotic_capacity(const LinkParameters& link, const SecurityParameters& sec);

}  // namespace qkdbudget
