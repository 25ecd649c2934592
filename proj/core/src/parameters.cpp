#include "qkdbudget/parameters.hpp"

#include <cmath>
#include <fmt/format.h>

#include "qkdbudget/errors.hpp"

namespace qkdbudget {
namespace {

void check(bool ok, const char* field, const char* rule, double value) {
  if (!ok) throw ValidationError(field, fmt::format("must satisfy {} (got {})", rule, value));
}

}  // namespace

void validate(const LinkParameters& link) {
  check(link.source.mu > 0.0 && std::isfinite(link.source.mu), "source.mu", "mu > 0",
        link.source.mu);
  check(link.source.tau > 0.0 && std::isfinite(link.source.tau), "source.tau", "tau > 0",
        link.source.tau);
  check(link.channel.alpha > 0.0 && link.channel.alpha <= 1.0, "channel.alpha",
        "0 < alpha <= 1", link.channel.alpha);
  check(link.channel.r_c >= 0.0 && link.channel.r_c <= 0.5, "channel.r_c", "0 <= r_c <= 1/2",
        link.channel.r_c);
  check(link.detector.eta > 0.0 && link.detector.eta <= 1.0, "detector.eta", "0 < eta <= 1",
        link.detector.eta);
  check(link.detector.r_d >= 0.0 && link.detector.r_d < 1.0, "detector.r_d", "0 <= r_d < 1",
        link.detector.r_d);
  check(link.error_correction.x >= 1.0 && std::isfinite(link.error_correction.x),
        "error_correction.x", "x >= 1", link.error_correction.x);
  if (link.eve.y_override) {
    check(*link.eve.y_override > 0.0 && *link.eve.y_override <= 1.0, "eve.y_override",
          "0 < y <= 1", *link.eve.y_override);
  }
}

void validate(const SecurityParameters& sec) {
  check(sec.m >= 2.0 && std::isfinite(sec.m), "security.m", "m >= 2", sec.m);
  check(sec.epsilon > 0.0 && sec.epsilon <= 1.0, "security.epsilon", "0 < epsilon <= 1",
        sec.epsilon);
  check(sec.g_pa >= 0.0 && std::isfinite(sec.g_pa), "security.g_pa", "g_pa >= 0", sec.g_pa);
  check(sec.g_auth >= 0.0 && std::isfinite(sec.g_auth), "security.g_auth", "g_auth >= 0",
        sec.g_auth);
  check(sec.g_ec >= 0.0 && std::isfinite(sec.g_ec), "security.g_ec", "g_ec >= 0", sec.g_ec);
  check(sec.g_tilde_ec >= 0.0 && std::isfinite(sec.g_tilde_ec), "security.g_tilde_ec",
        "g_tilde_ec >= 0", sec.g_tilde_ec);
}

Probability eve_y(const EveCapability& eve, const DetectorModel& detector,
                  const ChannelModel& channel) {
  if (eve.y_override) return *eve.y_override;
  switch (eve.cls) {
    case EveClass::lossless_replacement:
    case EveClass::entanglement_assisted:
      return detector.eta;
    case EveClass::technology_limited:
      return detector.eta * channel.alpha;
  }
  return detector.eta;
}

bool y_depends_on_alpha(const EveCapability& eve) {
  return !eve.y_override && eve.cls == EveClass::technology_limited;
}

std::string_view to_string(Medium medium) {
  return medium == Medium::fiber ? "fiber" : "free_space";
}

std::string_view to_string(EveClass cls) {
  switch (cls) {
    case EveClass::lossless_replacement: return "lossless_replacement";
    case EveClass::entanglement_assisted: return "entanglement_assisted";
    case EveClass::technology_limited: return "technology_limited";
  }
  return "?";
}

std::optional<Medium> parse_medium(std::string_view text) {
  if (text == "fiber") return Medium::fiber;
  if (text == "free_space") return Medium::free_space;
  return std::nullopt;
}

std::optional<EveClass> parse_eve_class(std::string_view text) {
  if (text == "lossless_replacement") return EveClass::lossless_replacement;
  if (text == "entanglement_assisted") return EveClass::entanglement_assisted;
  if (text == "technology_limited") return EveClass::technology_limited;
  return std::nullopt;
}

}  // namespace qkdbudget
