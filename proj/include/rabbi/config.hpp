#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "rabbi/error.hpp"
#include "rabbi/experiment.hpp"

namespace rabbi {

/// Config file could not be opened; carries the offending path.
class ConfigFileError : public Error {
 public:
  using Error::Error;
};

/// Parses the flat `key = value` format: `#` starts a comment, arrays are
/// comma-separated, matrix rows are separated by `;`.
///
/// Common keys: setting, policies, scaling, replications, seed, output,
/// horizon, budget, diagnostics, tolerance.
///   knapsack: weights, rewards, arrival_probs
///   probing:  rewards (matrix), sub_probs (matrix), arrival_probs,
///             probe_budget, probe_cost, variant (budgeted|costed)
///   pricing:  prices, valuations, valuation_probs
///   learning: weights, arrival_probs, reward_values (matrix),
///             reward_probs (matrix), feedback (full|censored)
/// horizon and budget are the k = 1 values; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");

/// Reads and parses a file. Throws ConfigFileError when it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

inline constexpr int kPricingDemoLadder[] = {1, 5, 10, 20, 40};

/// Prices (3,2,1), valuations (1,2,3) with probabilities (0.3,0.4,0.3),
/// T0 = 20, B0 = 6, scaling {1,5,10,20,40} cut at k_max; policies rabbi and
/// static.
ExperimentConfig pricing_demo_config(int k_max, std::size_t replications, std::uint64_t seed);

}  // namespace rabbi
