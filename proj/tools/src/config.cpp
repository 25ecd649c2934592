#include "qkdbudget_cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "qkdbudget/errors.hpp"

namespace qkdbudget::cli {
namespace {

struct KeySpec {
  std::string_view name;
  bool required;
};

constexpr std::array<KeySpec, 29> kKeys = {{
    {"source.mu", true},
    {"source.tau", true},
    {"channel.alpha", true},
    {"channel.r_c", true},
    {"channel.medium", false},
    {"detector.eta", true},
    {"detector.r_d", true},
    {"error_correction.x", true},
    {"eve.capability", true},
    {"eve.y_override", false},
    {"security.m", true},
    {"security.epsilon", true},
    {"security.g_pa", true},
    {"security.g_auth", true},
    {"security.g_ec", true},
    {"security.g_tilde_ec", true},
    {"security.authenticate", false},
    {"optimizer.mu_min", false},
    {"optimizer.mu_max", false},
    {"optimizer.alpha_policy", false},
    {"sweep.axis", false},
    {"sweep.values", false},
    {"sweep.start", false},
    {"sweep.stop", false},
    {"sweep.points", false},
    {"sweep.spacing", false},
    {"sweep.optimize_mu", false},
    {"validate.pulses", false},
    {"validate.seed", false},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const ConfigEntry& e) {
  return e.line > 0 ? fmt::format("{}:{}", e.origin, e.line) : e.origin;
}

[[noreturn]] void fail(const ConfigEntry& e, std::string_view message) {
  throw ConfigError(fmt::format("{}: {} ({})", where(e), message, e.key));
}

double to_double(const ConfigEntry& e) {
  double v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(e, fmt::format("expected a finite number, got '{}'", e.value));
  }
  return v;
}

std::uint64_t to_count(const ConfigEntry& e) {
  std::uint64_t v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    // Accept integral values written in floating notation, e.g. 1e6.
    const double d = to_double(e);
    if (d < 0 || d != std::floor(d) || d > 1.8e19) {
      fail(e, fmt::format("expected a non-negative integer, got '{}'", e.value));
    }
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

bool to_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  fail(e, fmt::format("expected true or false, got '{}'", e.value));
}

std::vector<double> to_list(const ConfigEntry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    ConfigEntry item = e;
    item.value = std::string(trim(rest.substr(0, comma)));
    out.push_back(to_double(item));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace

std::vector<std::string_view> known_config_keys() {
  std::vector<std::string_view> out;
  for (const auto& k : kKeys) out.push_back(k.name);
  return out;
}

std::vector<ConfigEntry> parse_config_text(std::string_view text, std::string_view origin) {
  std::vector<ConfigEntry> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto comment = raw.find_first_of("#;");
    std::string_view line = trim(raw.substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(fmt::format("{}:{}: malformed section header", origin, line_no));
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", origin, line_no));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    entries.push_back({std::move(key), std::move(value), std::string(origin), line_no});
  }
  return entries;
}

ScenarioConfig build_scenario(const std::vector<ConfigEntry>& entries) {
  // Last assignment per key wins across origins; repeats inside one origin
  // are mistakes.
  std::map<std::string, const ConfigEntry*, std::less<>> chosen;
  for (const auto& e : entries) {
    const bool known = std::any_of(kKeys.begin(), kKeys.end(),
                                   [&](const KeySpec& k) { return k.name == e.key; });
    if (!known) fail(e, "unknown key");
    auto it = chosen.find(e.key);
    if (it != chosen.end() && it->second->origin == e.origin) {
      fail(e, fmt::format("duplicate key (first set at {})", where(*it->second)));
    }
    chosen[e.key] = &e;
  }
  for (const auto& k : kKeys) {
    if (k.required && !chosen.contains(k.name)) {
      throw ConfigError(fmt::format("missing required key '{}'", k.name));
    }
  }

  ScenarioConfig cfg;
  auto get = [&](std::string_view key) -> const ConfigEntry* {
    auto it = chosen.find(key);
    return it == chosen.end() ? nullptr : it->second;
  };

  for (const auto& [key, entry] : chosen) {
    const ConfigEntry& e = *entry;
    if (key == "channel.medium") {
      auto medium = parse_medium(e.value);
      if (!medium) fail(e, fmt::format("expected fiber or free_space, got '{}'", e.value));
      cfg.link.channel.medium = *medium;
    } else if (key == "eve.capability") {
      auto cls = parse_eve_class(e.value);
      if (!cls) {
        fail(e, fmt::format("expected lossless_replacement, entanglement_assisted or "
                            "technology_limited, got '{}'",
                            e.value));
      }
      cfg.link.eve.cls = *cls;
    } else if (key == "security.authenticate") {
      cfg.security.authenticate = to_bool(e);
    } else if (key == "optimizer.mu_min") {
      cfg.optimizer.mu_bounds.lo = to_double(e);
    } else if (key == "optimizer.mu_max") {
      cfg.optimizer.mu_bounds.hi = to_double(e);
    } else if (key == "optimizer.alpha_policy") {
      if (e.value == "fixed") cfg.optimizer.alpha_policy = MuPolicy::fixed;
      else if (e.value == "optimized") cfg.optimizer.alpha_policy = MuPolicy::optimized;
      else fail(e, fmt::format("expected fixed or optimized, got '{}'", e.value));
    } else if (key == "validate.pulses") {
      cfg.validate.pulses = to_count(e);
    } else if (key == "validate.seed") {
      cfg.validate.seed = to_count(e);
    } else if (key.starts_with("sweep.")) {
      continue;  // assembled below
    } else {
      try {
        apply_parameter(cfg.link, cfg.security, key, to_double(e));
      } catch (const DomainError& err) {
        fail(e, err.what());
      }
    }
  }

  try {
    validate(cfg.link);
    validate(cfg.security);
  } catch (const ValidationError& err) {
    if (const ConfigEntry* e = get(err.field())) {
      throw ConfigError(fmt::format("{}: {}", where(*e), err.what()));
    }
    throw ConfigError(err.what());
  }
  const auto& bounds = cfg.optimizer.mu_bounds;
  if (!(bounds.lo > 0.0 && bounds.lo < bounds.hi)) {
    const ConfigEntry* e = get("optimizer.mu_min") ? get("optimizer.mu_min") : get("optimizer.mu_max");
    throw ConfigError(fmt::format("{}: optimizer bounds must satisfy 0 < mu_min < mu_max",
                                  e ? where(*e) : std::string("defaults")));
  }

  if (const ConfigEntry* axis = get("sweep.axis")) {
    SweepSpec spec;
    spec.axis = axis->value;
    spec.mu_bounds = cfg.optimizer.mu_bounds;
    if (const ConfigEntry* opt = get("sweep.optimize_mu")) spec.optimize_mu_per_point = to_bool(*opt);
    const ConfigEntry* values = get("sweep.values");
    const ConfigEntry* start = get("sweep.start");
    const ConfigEntry* stop = get("sweep.stop");
    const ConfigEntry* points = get("sweep.points");
    if (values) {
      if (start || stop || points) fail(*values, "give either sweep.values or start/stop/points");
      spec.grid = to_list(*values);
    } else {
      if (!start || !stop || !points) {
        fail(*axis, "sweep needs sweep.values or all of sweep.start, sweep.stop, sweep.points");
      }
      const double a = to_double(*start);
      const double b = to_double(*stop);
      const auto count = to_count(*points);
      if (count < 1 || count > 1'000'000) fail(*points, "sweep.points must be in [1, 1e6]");
      bool log_spacing = false;
      if (const ConfigEntry* sp = get("sweep.spacing")) {
        if (sp->value == "log") log_spacing = true;
        else if (sp->value != "linear") fail(*sp, "expected linear or log");
      }
      if (log_spacing && !(a > 0 && b > 0)) fail(*start, "log spacing needs positive endpoints");
      for (std::uint64_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        spec.grid.push_back(log_spacing ? a * std::pow(b / a, f) : a + (b - a) * f);
      }
    }
    try {
      validate(spec);
    } catch (const DomainError& err) {
      fail(*axis, err.what());
    }
    cfg.sweep = std::move(spec);
  } else {
    for (std::string_view k : {"sweep.values", "sweep.start", "sweep.stop", "sweep.points",
                               "sweep.spacing", "sweep.optimize_mu"}) {
      if (const ConfigEntry* e = get(k)) fail(*e, "sweep settings given without sweep.axis");
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto entries = parse_config_text(buffer.str(), path);
  for (const auto& [key, value] : overrides) {
    entries.push_back({key, value, "command line", 0});
  }
  return build_scenario(entries);
}

}  // namespace qkdbudget::cli
