#pragma once

#include <optional>
#include <string_view>

#include "qkdbudget/photon_stats.hpp"

namespace qkdbudget {

// Weak coherent pulse source.
struct SourceModel {
  double mu = 0.1;     // mean photons per pulse
  double tau = 1e-9;   // pulse period, seconds
};

enum class Medium { fiber, free_space };

struct ChannelModel {
  Probability alpha = 1.0;  // transmission probability
  Probability r_c = 0.0;    // intrinsic error probability, at most 1/2
  Medium medium = Medium::fiber;
};

struct DetectorModel {
  Probability eta = 1.0;  // detector efficiency
  Probability r_d = 0.0;  // dark-count probability per pulse period
};

// Technology attributed to the eavesdropper. Determines the y parameter of
// the multi-photon attack analysis:
//   lossless_replacement, entanglement_assisted -> y = eta
//   technology_limited                          -> y = eta * alpha
enum class EveClass { lossless_replacement, entanglement_assisted, technology_limited };

struct EveCapability {
  EveClass cls = EveClass::lossless_replacement;
  std::optional<Probability> y_override;  // replaces the class rule when set
};

struct ErrorCorrectionModel {
  double x = 1.0;  // leakage multiplier over the Shannon bound, >= 1
};

struct LinkParameters {
  SourceModel source;
  ChannelModel channel;
  DetectorModel detector;
  ErrorCorrectionModel error_correction;
  EveCapability eve;
};

struct SecurityParameters {
  double m = 1e6;          // raw block length, bits
  Probability epsilon = 1e-2;
  double g_pa = 30.0;
  double g_auth = 30.0;
  double g_ec = 30.0;
  double g_tilde_ec = 30.0;
  // When false the continuous authentication cost is taken as zero.
  bool authenticate = true;
};

// Throw ValidationError naming the first violated invariant.
void validate(const LinkParameters& link);
void validate(const SecurityParameters& sec);

// The y parameter implied by Eve's capability class (or its override).
Probability eve_y(const EveCapability& eve, const DetectorModel& detector,
                  const ChannelModel& channel);

// True when y depends on the channel transmission, so S(alpha) need not be
// monotone.
bool y_depends_on_alpha(const EveCapability& eve);

std::string_view to_string(Medium medium);
std::string_view to_string(EveClass cls);
std::optional<Medium> parse_medium(std::string_view text);
std::optional<EveClass> parse_eve_class(std::string_view text);

}  // namespace qkdbudget
