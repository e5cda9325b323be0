#include "rabbi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "rabbi/error.hpp"

namespace rabbi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct TaskResult {
  double regret = 0.0;
  double reward = 0.0;
  double benchmark = 0.0;
  double bellman = 0.0;
  double info = 0.0;
};

}  // namespace

std::string to_string(Setting s) {
  switch (s) {
    case Setting::knapsack:
      return "knapsack";
    case Setting::probing:
      return "probing";
    case Setting::pricing:
      return "pricing";
    case Setting::learning:
      return "learning";
  }
  return "unknown";
}

Setting parse_setting(std::string_view name) {
  if (name == "knapsack") return Setting::knapsack;
  if (name == "probing") return Setting::probing;
  if (name == "pricing") return Setting::pricing;
  if (name == "learning") return Setting::learning;
  throw StructuralError("unknown setting '" + std::string(name) + "'");
}

Setting setting_of(const Instance& inst) {
  return std::visit(overloaded{
                        [](const knapsack::KnapsackInstance&) { return Setting::knapsack; },
                        [](const probing::ProbingInstance&) { return Setting::probing; },
                        [](const pricing::PricingInstance&) { return Setting::pricing; },
                        [](const learning::LearningInstance&) { return Setting::learning; },
                    },
                    inst);
}

int horizon_of(const Instance& inst) {
  return std::visit([](const auto& x) { return x.horizon; }, inst);
}

double budget_of(const Instance& inst) {
  return std::visit(overloaded{
                        [](const knapsack::KnapsackInstance& x) { return x.budget; },
                        [](const probing::ProbingInstance& x) { return double(x.hire_budget); },
                        [](const pricing::PricingInstance& x) { return double(x.inventory); },
                        [](const learning::LearningInstance& x) { return x.budget; },
                    },
                    inst);
}

void validate_instance(const Instance& inst) {
  std::visit([](const auto& x) { x.validate(); }, inst);
}

Instance scale_instance(const Instance& base, int k) {
  if (k < 1) throw StructuralError("scaling factors must be positive");
  return std::visit(overloaded{
                        [k](knapsack::KnapsackInstance x) -> Instance {
                          if (x.arrival_probs.size() > 1)
                            throw PreconditionError("scaling needs i.i.d. arrivals");
                          x.horizon *= k;
                          x.budget *= k;
                          return x;
                        },
                        [k](probing::ProbingInstance x) -> Instance {
                          x.horizon *= k;
                          x.hire_budget *= k;
                          x.probe_budget *= k;
                          return x;
                        },
                        [k](pricing::PricingInstance x) -> Instance {
                          x.horizon *= k;
                          x.inventory *= k;
                          return x;
                        },
                        [k](learning::LearningInstance x) -> Instance {
                          x.horizon *= k;
                          x.budget *= k;
                          return x;
                        },
                    },
                    base);
}

std::vector<std::string> policies_for(Setting s) {
  switch (s) {
    case Setting::knapsack:
      return {"rabbi", "dp_table"};
    case Setting::probing:
      return {"rabbi"};
    case Setting::pricing:
      return {"rabbi", "static", "dp_table"};
    case Setting::learning:
      return {"rabbi"};
  }
  return {};
}

void ExperimentConfig::validate() const {
  if (setting_of(base) != setting) throw StructuralError("instance does not match the setting");
  validate_instance(base);
  if (replications < 1) throw StructuralError("replications must be >= 1");
  if (scaling.empty()) throw StructuralError("scaling list must be nonempty");
  for (int k : scaling)
    if (k < 1) throw StructuralError("scaling factors must be positive");
  if (policies.empty()) throw StructuralError("policy list must be nonempty");
  const auto allowed = policies_for(setting);
  for (const auto& p : policies)
    if (std::find(allowed.begin(), allowed.end(), p) == allowed.end())
      throw StructuralError("policy '" + p + "' is not available for setting " + to_string(setting));
}

PolicyContext make_context(const Instance& inst, bool need_table) {
  PolicyContext ctx;
  try {
    if (const auto* k = std::get_if<knapsack::KnapsackInstance>(&inst)) {
      ctx.knapsack_dp = knapsack::dp_online(*k);
      ctx.dp_value = ctx.knapsack_dp->value;
    } else if (const auto* p = std::get_if<pricing::PricingInstance>(&inst)) {
      ctx.pricing_dp = pricing::dp_pricing(*p);
      ctx.dp_value = ctx.pricing_dp->value;
    }
  } catch (const ScaleGuardError&) {
    if (need_table) throw;
  } catch (const PreconditionError&) {
    if (need_table) throw;
  }
  return ctx;
}

Trajectory coupled_regret(const Instance& inst, Stream& rng, const std::string& policy,
                          const SimOptions& opts, const PolicyContext* ctx) {
  return std::visit(
      overloaded{
          [&](const knapsack::KnapsackInstance& x) {
            if (policy == "rabbi") return knapsack::run_knapsack(x, rng, knapsack::Policy::rabbi, opts);
            if (policy == "dp_table") {
              if (!ctx || !ctx->knapsack_dp) throw PreconditionError("dp_table needs the DP oracle");
              return knapsack::run_knapsack(x, rng, knapsack::Policy::dp_table, opts, &*ctx->knapsack_dp);
            }
            throw StructuralError("unknown knapsack policy '" + policy + "'");
          },
          [&](const probing::ProbingInstance& x) {
            if (policy != "rabbi") throw StructuralError("unknown probing policy '" + policy + "'");
            return probing::run_probing(x, rng, opts);
          },
          [&](const pricing::PricingInstance& x) {
            if (policy == "rabbi") return pricing::run_pricing(x, rng, pricing::Policy::rabbi, opts);
            if (policy == "static")
              return pricing::run_pricing(x, rng, pricing::Policy::static_price, opts);
            if (policy == "dp_table") {
              if (!ctx || !ctx->pricing_dp) throw PreconditionError("dp_table needs the DP oracle");
              return pricing::run_pricing(x, rng, pricing::Policy::dp_table, opts, &*ctx->pricing_dp);
            }
            throw StructuralError("unknown pricing policy '" + policy + "'");
          },
          [&](const learning::LearningInstance& x) {
            if (policy != "rabbi") throw StructuralError("unknown learning policy '" + policy + "'");
            return learning::run_learning(x, rng, opts);
          },
      },
      inst);
}

SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

double ci90_halfwidth(double sd, std::size_t n) {
  if (n == 0) return 0.0;
  return 1.645 * sd / std::sqrt(static_cast<double>(n));
}

const RegretRow* RegretReport::find(const std::string& policy, int k) const {
  for (const auto& r : rows)
    if (r.policy == policy && r.k == k) return &r;
  return nullptr;
}

RegretReport run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const std::size_t K = config.scaling.size();
  const std::size_t P = config.policies.size();
  const std::size_t R = config.replications;
  const bool need_table =
      std::find(config.policies.begin(), config.policies.end(), "dp_table") != config.policies.end();

  std::vector<Instance> instances;
  std::vector<PolicyContext> contexts;
  for (int k : config.scaling) {
    instances.push_back(scale_instance(config.base, k));
    contexts.push_back(make_context(instances.back(), need_table));
  }

  const std::string tag = to_string(config.setting);
  const SimOptions opts{false, config.diagnostics};
  const std::size_t total = K * P * R;
  std::vector<TaskResult> results(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const std::size_t ki = i / (P * R);
      const std::size_t pi = (i / R) % P;
      const std::size_t r = i % R;
      const int k = config.scaling[ki];
      try {
        Stream rng = derive_stream(config.seed, static_cast<std::uint64_t>(k), r, tag);
        const Trajectory tr =
            coupled_regret(instances[ki], rng, config.policies[pi], opts, &contexts[ki]);
        results[i] = TaskResult{tr.regret(), tr.total_reward, tr.offline_benchmark_value,
                                static_cast<double>(tr.bellman_loss_count),
                                static_cast<double>(tr.info_loss_count)};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) {
          std::ostringstream os;
          os << "replication failed (k=" << k << ", policy=" << config.policies[pi]
             << ", rep=" << r << "): " << e.what();
          error_message = os.str();
        }
        return;
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed) throw Error(error_message);

  RegretReport report;
  std::vector<double> regret(R), reward(R), bench(R), bl(R), il(R);
  for (std::size_t ki = 0; ki < K; ++ki) {
    for (std::size_t pi = 0; pi < P; ++pi) {
      for (std::size_t r = 0; r < R; ++r) {
        const TaskResult& t = results[(ki * P + pi) * R + r];
        regret[r] = t.regret;
        reward[r] = t.reward;
        bench[r] = t.benchmark;
        bl[r] = t.bellman;
        il[r] = t.info;
      }
      RegretRow row;
      row.setting = tag;
      row.policy = config.policies[pi];
      row.k = config.scaling[ki];
      row.T = horizon_of(instances[ki]);
      row.B = budget_of(instances[ki]);
      row.replications = R;
      const SampleStats rs = sample_stats(regret);
      row.mean_regret = rs.mean;
      row.sd_regret = rs.sd;
      row.ci90_halfwidth = ci90_halfwidth(rs.sd, R);
      const SampleStats ws = sample_stats(reward);
      row.mean_reward = ws.mean;
      row.sd_reward = ws.sd;
      row.mean_benchmark = sample_stats(bench).mean;
      row.mean_bellman_loss_steps = sample_stats(bl).mean;
      row.mean_info_loss_steps = sample_stats(il).mean;
      row.dp_value = contexts[ki].dp_value;
      if (row.dp_value) row.mean_dp_gap = *row.dp_value - ws.mean;
      row.seed = config.seed;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("RABBI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rabbi
