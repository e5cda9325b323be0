#include "rabbi/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rabbi {

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class KeyValues {
 public:
  KeyValues(std::string_view text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail(number, "expected 'key = value'");
      const std::string key = trim(std::string_view(body).substr(0, eq));
      const std::string value = trim(std::string_view(body).substr(eq + 1));
      if (key.empty()) fail(number, "empty key");
      if (entries_.count(key)) fail(number, "duplicate key '" + key + "'");
      entries_[key] = Entry{value, number, false};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string str(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw StructuralError(origin_ + ": missing key '" + key + "'");
    it->second.used = true;
    return it->second.value;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    return has(key) ? str(key) : fallback;
  }

  double real(const std::string& key) { return to_real(key, str(key)); }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

  long long integer(const std::string& key) { return to_int(key, str(key)); }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : fallback;
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split(str(key), ',')) out.push_back(to_real(key, item));
    return out;
  }

  std::vector<int> ints(const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split(str(key), ',')) out.push_back(static_cast<int>(to_int(key, item)));
    return out;
  }

  std::vector<std::vector<double>> matrix(const std::string& key) {
    std::vector<std::vector<double>> out;
    for (const auto& row : split(str(key), ';')) {
      std::vector<double> r;
      for (const auto& item : split(row, ',')) r.push_back(to_real(key, item));
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<std::string> words(const std::string& key) { return split(str(key), ','); }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = str(key);
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    bad(key, v, "a boolean");
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!e.used) fail(e.line, "unknown key '" + key + "'");
  }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw StructuralError(origin_ + ":" + std::to_string(line) + ": " + what);
  }

  [[noreturn]] void bad(const std::string& key, const std::string& v, const char* kind) const {
    fail(entries_.at(key).line, "key '" + key + "': '" + v + "' is not " + kind);
  }

  double to_real(const std::string& key, const std::string& v) const {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    bad(key, v, "a number");
  }

  long long to_int(const std::string& key, const std::string& v) const {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "an integer");
    return out;
  }

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  KeyValues kv(text, std::string(origin));
  ExperimentConfig cfg;
  cfg.setting = parse_setting(kv.str("setting"));
  const int horizon = static_cast<int>(kv.integer("horizon"));

  switch (cfg.setting) {
    case Setting::knapsack: {
      knapsack::KnapsackInstance x;
      x.weights = kv.reals("weights");
      x.rewards = kv.reals("rewards");
      x.arrival_probs = {kv.reals("arrival_probs")};
      x.horizon = horizon;
      x.budget = kv.real("budget");
      cfg.base = x;
      break;
    }
    case Setting::probing: {
      probing::ProbingInstance x;
      x.rewards = kv.matrix("rewards");
      x.sub_probs = kv.matrix("sub_probs");
      x.arrival_probs = kv.reals("arrival_probs");
      if (kv.has("probe_cost")) x.probe_cost = kv.reals("probe_cost");
      x.horizon = horizon;
      x.hire_budget = static_cast<int>(kv.integer("budget"));
      x.probe_budget = static_cast<int>(kv.integer("probe_budget", 0));
      const std::string variant = kv.str("variant", "budgeted");
      if (variant == "budgeted")
        x.variant = probing::Variant::budgeted;
      else if (variant == "costed")
        x.variant = probing::Variant::costed;
      else
        throw StructuralError(std::string(origin) + ": variant must be budgeted or costed");
      cfg.base = x;
      break;
    }
    case Setting::pricing: {
      pricing::PricingInstance x;
      x.prices = kv.reals("prices");
      x.valuation.values = kv.reals("valuations");
      x.valuation.probs = kv.reals("valuation_probs");
      x.horizon = horizon;
      x.inventory = static_cast<int>(kv.integer("budget"));
      cfg.base = x;
      break;
    }
    case Setting::learning: {
      learning::LearningInstance x;
      x.weights = kv.reals("weights");
      x.arrival_probs = kv.reals("arrival_probs");
      const auto values = kv.matrix("reward_values");
      const auto probs = kv.matrix("reward_probs");
      if (values.size() != probs.size())
        throw StructuralError(std::string(origin) + ": reward_values and reward_probs differ in rows");
      for (std::size_t j = 0; j < values.size(); ++j)
        x.rewards.push_back(pricing::DiscreteDistribution{values[j], probs[j]});
      x.horizon = horizon;
      x.budget = kv.real("budget");
      const std::string fb = kv.str("feedback", "full");
      if (fb == "full")
        x.feedback = learning::Feedback::full;
      else if (fb == "censored")
        x.feedback = learning::Feedback::censored;
      else
        throw StructuralError(std::string(origin) + ": feedback must be full or censored");
      cfg.base = x;
      break;
    }
  }

  cfg.policies = kv.has("policies") ? kv.words("policies")
                                    : std::vector<std::string>{policies_for(cfg.setting).front()};
  if (kv.has("scaling")) cfg.scaling = kv.ints("scaling");
  const long long reps = kv.integer("replications", 1);
  if (reps < 1) throw StructuralError(std::string(origin) + ": replications must be >= 1");
  cfg.replications = static_cast<std::size_t>(reps);
  if (kv.has("seed")) {
    const std::string s = kv.str("seed");
    std::uint64_t seed = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw StructuralError(std::string(origin) + ": seed must be an unsigned 64-bit integer");
    cfg.seed = seed;
  }
  cfg.output = kv.str("output", "");
  cfg.diagnostics = kv.boolean("diagnostics", true);
  cfg.tolerance = kv.real("tolerance", 1e-9);
  kv.reject_unused();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path.string());
}

ExperimentConfig pricing_demo_config(int k_max, std::size_t replications, std::uint64_t seed) {
  pricing::PricingInstance x;
  x.prices = {3.0, 2.0, 1.0};
  x.valuation.values = {1.0, 2.0, 3.0};
  x.valuation.probs = {0.3, 0.4, 0.3};
  x.horizon = 20;
  x.inventory = 6;
  ExperimentConfig cfg;
  cfg.setting = Setting::pricing;
  cfg.base = x;
  cfg.scaling.clear();
  for (int k : kPricingDemoLadder)
    if (k <= k_max) cfg.scaling.push_back(k);
  if (cfg.scaling.empty()) throw StructuralError("--k-max must be at least 1");
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.policies = {"rabbi", "static"};
  cfg.output = "pricing-demo";
  return cfg;
}

}  // namespace rabbi
