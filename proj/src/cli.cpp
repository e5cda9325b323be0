#include "rabbi/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "rabbi/config.hpp"
#include "rabbi/experiment.hpp"
#include "rabbi/lp.hpp"
#include "rabbi/monotonicity.hpp"
#include "rabbi/report.hpp"

namespace rabbi {

namespace {

struct GlobalOptions {
  std::string output_dir = ".";
  unsigned threads = 0;
  std::string format = "csv";
};

OutputFormat output_format(const std::string& name) {
  return name == "json" ? OutputFormat::json : OutputFormat::csv;
}

void print_summary(const RegretReport& report, std::ostream& out) {
  char line[256];
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-9s %-9s k=%-4d T=%-6d regret %.4f +/- %.4f", r.setting.c_str(),
                  r.policy.c_str(), r.k, r.T, r.mean_regret, r.ci90_halfwidth);
    out << line;
    if (r.mean_dp_gap) {
      std::snprintf(line, sizeof line, "  dp gap %.4f", *r.mean_dp_gap);
      out << line;
    }
    out << '\n';
  }
}

int run_and_write(const ExperimentConfig& cfg, const std::string& stem, const GlobalOptions& g,
                  std::ostream& out) {
  const RegretReport report = run_experiment(cfg, resolve_threads(g.threads ? std::optional<unsigned>(g.threads) : std::nullopt));
  const auto path = write_report(report, g.output_dir, stem, output_format(g.format));
  print_summary(report, out);
  out << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_dp(const ExperimentConfig& cfg, std::ostream& out) {
  char line[256];
  for (int k : cfg.scaling) {
    const Instance inst = scale_instance(cfg.base, k);
    if (const auto* p = std::get_if<pricing::PricingInstance>(&inst)) {
      const double v = pricing::dp_pricing_value(*p);
      const auto st = pricing::static_price_baseline(*p);
      std::snprintf(line, sizeof line,
                    "k=%d T=%d B=%d dp=%.9g full_information=%.9g static_index=%zu static=%.9g\n", k,
                    p->horizon, p->inventory, v, pricing::full_information_value(*p), st.index,
                    st.expected_value);
    } else if (const auto* x = std::get_if<knapsack::KnapsackInstance>(&inst)) {
      std::snprintf(line, sizeof line, "k=%d T=%d B=%.9g dp=%.9g\n", k, x->horizon, x->budget,
                    knapsack::dp_online_value(*x));
    } else {
      std::snprintf(line, sizeof line, "k=%d no DP oracle for setting %s\n", k,
                    to_string(setting_of(inst)).c_str());
    }
    out << line;
  }
  return 0;
}

int cmd_monotonicity(const ExperimentConfig& cfg, std::ostream& out) {
  const int max_T = horizon_of(cfg.base);
  MonotonicityReport rep;
  if (const auto* k = std::get_if<knapsack::KnapsackInstance>(&cfg.base))
    rep = check_bellman_monotonicity(*k, max_T, cfg.tolerance);
  else if (const auto* l = std::get_if<learning::LearningInstance>(&cfg.base))
    rep = check_bellman_monotonicity(*l, max_T, cfg.tolerance);
  else if (const auto* p = std::get_if<probing::ProbingInstance>(&cfg.base))
    rep = check_bellman_monotonicity(*p, max_T, cfg.tolerance);
  else
    throw PreconditionError("monotonicity check is not available for the pricing setting");
  out << "triples " << rep.triples << ", excluded " << rep.excluded_triples << ", violations "
      << rep.violations.size() << " (" << rep.nonexcluded_violations << " outside exclusion sets)\n";
  out << "max excluded overshoot " << format_real(rep.max_excluded_overshoot)
      << " (where the arrival fits: " << format_real(rep.max_excluded_overshoot_feasible)
      << "), rmax " << format_real(rep.rmax) << '\n';
  out << (rep.passed() ? "PASS" : "FAIL") << '\n';
  return rep.passed() ? 0 : 2;
}

int cmd_check_lp(std::size_t count, std::uint64_t seed, std::ostream& out) {
  const auto r = lp::run_property_suite(count, seed);
  out << "instances " << r.instances << '\n';
  out << "strong duality failures " << r.duality_failures << " (max gap "
      << format_real(r.max_duality_gap) << ")\n";
  out << "unit reduction failures " << r.unit_identity_failures << " of " << r.unit_identity_checks
      << " (max error " << format_real(r.max_unit_identity_error) << ")\n";
  out << "concavity failures " << r.concavity_failures << " of " << r.concavity_checks << '\n';
  out << (r.passed() ? "PASS" : "FAIL") << '\n';
  return r.passed() ? 0 : 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online resource allocation by LP re-solving: simulations and oracles", "rabbi"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--output", g.output_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Parallel replication workers (default: RABBI_THREADS or all cores)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();

  int k_max = 40;
  std::size_t reps = 10000;
  std::uint64_t seed = 20240101;
  auto* preset = app.add_subcommand("preset", "Run a built-in experiment");
  std::string preset_name;
  preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember({"pricing-demo"}));
  preset->add_option("--k-max", k_max, "Largest scaling factor")->check(CLI::PositiveNumber);
  preset->add_option("--reps", reps, "Replications per scaling factor")->check(CLI::PositiveNumber);
  preset->add_option("--seed", seed, "Master seed");

  std::size_t lp_count = 1000;
  std::uint64_t lp_seed = 1;
  auto* check_lp = app.add_subcommand("check-lp", "Randomized LP property suite");
  check_lp->add_option("--count", lp_count, "Number of random LPs")->check(CLI::PositiveNumber);
  check_lp->add_option("--seed", lp_seed, "Seed");

  auto* mono = app.add_subcommand("check-monotonicity", "Exhaustive Bellman-inequality check");
  mono->add_option("config", config_path, "Config file")->required();

  auto* dp = app.add_subcommand("dp", "Exact oracle values for each scaling factor");
  dp->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*run || *mono || *dp) {
      ExperimentConfig cfg;
      try {
        cfg = load_config(config_path);
      } catch (const ConfigFileError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
      }
      if (*run) {
        const std::string stem =
            cfg.output.empty() ? std::filesystem::path(config_path).stem().string() : cfg.output;
        return run_and_write(cfg, stem, g, out);
      }
      if (*mono) return cmd_monotonicity(cfg, out);
      return cmd_dp(cfg, out);
    }
    if (*preset) return run_and_write(pricing_demo_config(k_max, reps, seed), "pricing-demo", g, out);
    if (*check_lp) return cmd_check_lp(lp_count, lp_seed, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rabbi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rabbi
