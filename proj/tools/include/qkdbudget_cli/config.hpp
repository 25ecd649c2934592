#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkdbudget/optimizer.hpp"
#include "qkdbudget/parameters.hpp"
#include "qkdbudget/sweep.hpp"

namespace qkdbudget::cli {

// Malformed or invalid scenario configuration. The message is already
// prefixed with "<source>:<line>: " when a line is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One "key = value" assignment and where it came from.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;  // file name, or "command line"
  int line = 0;        // 0 for command-line overrides
};

// Parse flat "section.key = value" text. Optional "[section]" headers prefix
// the keys that follow; '#' and ';' start comments.
std::vector<ConfigEntry> parse_config_text(std::string_view text, std::string_view origin);

struct OptimizerSettings {
  MuBounds mu_bounds;
  MuPolicy alpha_policy = MuPolicy::fixed;
};

struct ValidateSettings {
  std::uint64_t pulses = 1'000'000;
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  LinkParameters link;
  SecurityParameters security;
  OptimizerSettings optimizer;
  std::optional<SweepSpec> sweep;
  ValidateSettings validate;
};

// Build a scenario from entries; later entries may override earlier ones only
// when they come from a different origin (file, then command line). Unknown
// keys, duplicates within one origin, missing required keys and violated
// invariants raise ConfigError.
ScenarioConfig build_scenario(const std::vector<ConfigEntry>& entries);

// Read `path` and apply `overrides` ("key", "value") on top.
ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

// Every key the configuration accepts.
std::vector<std::string_view> known_config_keys();

}  // namespace qkdbudget::cli
