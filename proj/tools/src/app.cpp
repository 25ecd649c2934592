#include "qkdbudget_cli/app.hpp"

#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qkdbudget/budget.hpp"
#include "qkdbudget/errors.hpp"
#include "qkdbudget/optimizer.hpp"
#include "qkdbudget/sweep.hpp"
#include "qkdbudget_cli/checks.hpp"
#include "qkdbudget_cli/config.hpp"
#include "qkdbudget_cli/report.hpp"

namespace qkdbudget::cli {
namespace {

struct Options {
  std::string config;
  bool json = false;
  std::string target = "mu";
  std::string out_path;
  int seeds = 20;
};

// "--section.key=value" or "--section.key value" tokens left over by the parser.
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& token = extras[i];
    if (!token.starts_with("--") || token.size() < 3) {
      throw ConfigError(fmt::format("command line: unrecognized argument '{}'", token));
    }
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(token.substr(2, eq - 2), token.substr(eq + 1));
    } else if (i + 1 < extras.size() && !extras[i + 1].starts_with("--")) {
      out.emplace_back(token.substr(2), extras[i + 1]);
      ++i;
    } else {
      throw ConfigError(fmt::format("command line: {} needs a value", token));
    }
  }
  return out;
}

int cmd_budget(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  const auto ledger = compute_ledger(cfg.link, cfg.security);
  if (opt.json) out << ledger_to_json(ledger).dump() << '\n';
  else print_ledger(out, ledger);
  return ledger.feasible ? kExitOk : kExitInfeasible;
}

int cmd_optimize(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  OptimizationResult result;
  if (opt.target == "mu") {
    result = optimize_mu(cfg.link, cfg.security, cfg.optimizer.mu_bounds);
  } else if (opt.target == "alpha") {
    result = max_attenuation(cfg.link, cfg.security, cfg.optimizer.alpha_policy,
                             cfg.optimizer.mu_bounds);
  } else {
    result = min_block_length(cfg.link, cfg.security);
  }
  if (opt.json) out << result_to_json(result, opt.target).dump() << '\n';
  else print_result(out, result, opt.target);
  return result.feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const ScenarioConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!cfg.sweep) throw ConfigError(fmt::format("{}: no sweep section (set sweep.axis)", opt.config));
  const auto table = sweep(cfg.link, cfg.security, *cfg.sweep);

  std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    fmt::print(err, "error: cannot write {}\n", opt.out_path);
    return kExitIo;
  }
  write_sweep_csv(file, table);
  file.close();
  if (!file) {
    fmt::print(err, "error: failed writing {}\n", opt.out_path);
    return kExitIo;
  }

  if (opt.json) {
    write_sweep_jsonl(out, table);
  } else {
    std::size_t feasible = 0, failed = 0;
    for (const auto& row : table.rows) {
      if (!row.ledger) ++failed;
      else if (row.ledger->feasible) ++feasible;
    }
    fmt::print(out, "wrote {} rows over {} to {} ({} feasible, {} failed)\n", table.rows.size(),
               table.axis, opt.out_path, feasible, failed);
  }
  for (const auto& row : table.rows) {
    if (!row.ledger) fmt::print(err, "warning: {} = {}: {}\n", table.axis, row.value, row.error);
  }
  return kExitOk;
}

int cmd_validate(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  auto checks = oracle_checks();
  auto mc = monte_carlo_checks(cfg, opt.seeds);
  checks.insert(checks.end(), mc.begin(), mc.end());
  bool all = true;
  for (const auto& c : checks) {
    if (opt.json) {
      nlohmann::ordered_json j{{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}};
      out << j.dump() << '\n';
    } else {
      fmt::print(out, "{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    }
    all = all && c.passed;
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-key budget and secrecy capacity of a BB84 link", "qkdbudget"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config, "scenario file")->required();
    sub->add_flag("--json", opt.json, "one JSON object per line");
    sub->allow_extras();
    sub->footer("Any config key can be overridden with --key=value, e.g. --channel.alpha=0.05");
  };
  auto* budget = app.add_subcommand("budget", "print the key budget ledger");
  add_common(budget);
  auto* optimize = app.add_subcommand("optimize", "optimize mu, find the loss limit or the minimum block");
  add_common(optimize);
  optimize->add_option("--target", opt.target, "mu, alpha or m")
      ->check(CLI::IsMember({"mu", "alpha", "m"}));
  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate the ledger over one parameter");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--out", opt.out_path, "CSV output path")->required();
  auto* validate_cmd = app.add_subcommand("validate", "check closed forms against the oracles");
  add_common(validate_cmd);
  validate_cmd->add_option("--seeds", opt.seeds, "Monte Carlo seeds")->check(CLI::Range(1, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const auto cfg = load_scenario(opt.config, parse_overrides(sub->remaining()));
    if (sub == budget) return cmd_budget(cfg, opt, out);
    if (sub == optimize) return cmd_optimize(cfg, opt, out);
    if (sub == sweep_cmd) return cmd_sweep(cfg, opt, out, err);
    return cmd_validate(cfg, opt, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const ResourceError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    fmt::print(err, "infeasible: {}\n", e.what());
    return kExitInfeasible;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  }
}

}  // namespace qkdbudget::cli
