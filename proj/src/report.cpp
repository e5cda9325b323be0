#include "rabbi/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rabbi/error.hpp"

namespace rabbi {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string to_csv(const RegretReport& report) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << r.setting << ',' << r.policy << ',' << r.k << ',' << r.T << ',' << format_real(r.B) << ','
       << r.replications << ',' << format_real(r.mean_regret) << ',' << format_real(r.sd_regret)
       << ',' << format_real(r.ci90_halfwidth) << ','
       << (r.mean_dp_gap ? format_real(*r.mean_dp_gap) : std::string()) << ','
       << format_real(r.mean_bellman_loss_steps) << ',' << format_real(r.mean_info_loss_steps)
       << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string to_json(const RegretReport& report) {
  // Reals go through the same %.9g formatting as the CSV so both outputs agree.
  auto real = [](double v) {
    return std::isfinite(v) ? nlohmann::json::parse(format_real(v)) : nlohmann::json(nullptr);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json o = nlohmann::json::object();
    o["setting"] = r.setting;
    o["policy"] = r.policy;
    o["k"] = r.k;
    o["T"] = r.T;
    o["B"] = real(r.B);
    o["replications"] = r.replications;
    o["mean_regret"] = real(r.mean_regret);
    o["sd_regret"] = real(r.sd_regret);
    o["ci90_halfwidth"] = real(r.ci90_halfwidth);
    o["mean_dp_gap"] = r.mean_dp_gap ? real(*r.mean_dp_gap) : nlohmann::json(nullptr);
    o["mean_bellman_loss_steps"] = real(r.mean_bellman_loss_steps);
    o["mean_info_loss_steps"] = real(r.mean_info_loss_steps);
    o["seed"] = r.seed;
    rows.push_back(std::move(o));
  }
  return rows.dump(2) + "\n";
}

std::filesystem::path write_report(const RegretReport& report, const std::filesystem::path& dir,
                                   const std::string& stem, OutputFormat format) {
  std::error_code ec;
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / (stem + (format == OutputFormat::csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << (format == OutputFormat::csv ? to_csv(report) : to_json(report));
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
  return path;
}

}  // namespace rabbi
