#pragma once

#include <filesystem>
#include <string>

#include "rabbi/experiment.hpp"

namespace rabbi {

enum class OutputFormat { csv, json };

inline constexpr const char* kCsvHeader =
    "setting,policy,k,T,B,replications,mean_regret,sd_regret,ci90_halfwidth,mean_dp_gap,"
    "mean_bellman_loss_steps,mean_info_loss_steps,seed";

/// %.9g for reals; missing values are empty fields.
std::string format_real(double v);

std::string to_csv(const RegretReport& report);
std::string to_json(const RegretReport& report);

/// Writes `stem` + ".csv" or ".json" under `dir` (created if needed) and
/// returns the path. Throws Error naming the path on I/O failure.
std::filesystem::path write_report(const RegretReport& report, const std::filesystem::path& dir,
                                   const std::string& stem, OutputFormat format);

}  // namespace rabbi
