#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rabbi/lp.hpp"
#include "rabbi/rng.hpp"
#include "rabbi/trajectory.hpp"

namespace rabbi::pricing {

struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probs;

  double mean() const;
  void validate() const;
};

struct PricingInstance {
  std::vector<double> prices;  // strictly decreasing
  DiscreteDistribution valuation;
  int horizon = 0;
  int inventory = 0;

  std::size_t m() const noexcept { return prices.size(); }
  /// q_i = Pr[V >= f_i], nondecreasing in i.
  std::vector<double> acceptance_probs() const;
  void validate() const;
};

struct PricingLpResult {
  std::vector<double> x;
  double value = 0.0;
};

/// max sum_i f_i q_i x_i  s.t.  q'x <= b,  1'x <= t,  x >= 0.
lp::StandardLp pricing_program(double t, double b, std::span<const double> q,
                               std::span<const double> f);

/// Closed-form optimum of the pricing program through the upper concave hull
/// of (0,0) and the points (q_i, f_i q_i), cut at its highest-revenue vertex.
/// With c = b/t and hull vertices h_1 < ... < h_L:
///   c <= q_{h_1}:                x_{h_1} = b / q_{h_1}
///   q_{h_l} < c <= q_{h_{l+1}}:  x_{h_l} = (t q_{h_{l+1}} - b)/(q_{h_{l+1}} - q_{h_l}),
///                                x_{h_{l+1}} = (b - t q_{h_l})/(q_{h_{l+1}} - q_{h_l})
///   c > q_{h_L}:                 x_{h_L} = t
/// When every point lies on the hull this is the familiar interpolation
/// between consecutive prices. Throws StructuralError unless q is
/// nondecreasing in [0,1].
PricingLpResult pricing_lp_closed_form(double t, double b, std::span<const double> q,
                                       std::span<const double> f);

/// Menu index to post, or nullopt (halt) when b = 0. Ties go to the highest
/// price.
std::optional<std::size_t> pricing_rabbi_step(int t, int b, std::span<const double> q_bar,
                                              std::span<const double> f);

/// Acceptance counts over the last t periods; Q = counts / t.
class AcceptanceMartingale {
 public:
  /// `y` is the m x T indicator matrix, column s for the period s+1 from the start.
  AcceptanceMartingale(const std::vector<std::vector<std::uint8_t>>& y);

  int t() const noexcept { return t_; }
  std::vector<double> q() const;
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  /// Removes the period with t periods to go; afterwards t() is t - 1.
  void step(std::span<const std::uint8_t> column);

 private:
  int t_ = 0;
  std::vector<std::int64_t> counts_;
};

/// Y_{i,s} = 1{V_s >= f_i}; one row per price.
std::vector<std::vector<std::uint8_t>> acceptance_matrix(std::span<const double> valuations,
                                                         std::span<const double> f);

/// P[T, B, Q(T)] from the realized indicator matrix.
double offline_pricing_benchmark(const PricingInstance& inst,
                                 const std::vector<std::vector<std::uint8_t>>& y);

struct PricingDp {
  double value = 0.0;
  int horizon = 0;
  int inventory = 0;
  std::vector<std::uint16_t> policy;  // [t][b] menu index, t = 1..T, b = 1..B

  std::size_t action(int t, int b) const {
    return policy[(static_cast<std::size_t>(t) - 1) * inventory + (b - 1)];
  }
};

/// Backward induction; guard T * B <= 1e8.
PricingDp dp_pricing(const PricingInstance& inst);
double dp_pricing_value(const PricingInstance& inst);

struct StaticPrice {
  std::size_t index = 0;
  double expected_value = 0.0;  // f_j * E[min(Bin(T, q_j), B)]
};

/// Best menu price by f_j T q_j among those with T q_j <= B; when none
/// qualifies, the better of the market-clearing and monopoly menu prices by
/// f * min(T q, B).
StaticPrice static_price_baseline(const PricingInstance& inst);

/// E[min(Bin(n, q), cap)].
double expected_capped_binomial(int n, double q, int cap);

/// Expected revenue with full knowledge of the valuations:
/// sum_i (f_i - f_{i+1}) E[min(B, Bin(T, q_i))], f_{m+1} = 0.
double full_information_value(const PricingInstance& inst);

/// max x_j  s.t.  (f o q)'x >= target,  q'x <= b,  1'x <= t,  x >= 0.
/// Throws StructuralError when the target is unattainable.
double selection_program(double t, double b, std::span<const double> q, std::span<const double> f,
                         double target, std::size_t j);

enum class Policy { rabbi, static_price, dp_table };

Trajectory run_pricing(const PricingInstance& inst, Stream& rng, Policy policy,
                       const SimOptions& opts, const PricingDp* table = nullptr);

/// Same episode from logged valuations (one per period).
Trajectory run_pricing_on(const PricingInstance& inst, std::span<const double> valuations,
                          Policy policy, const SimOptions& opts, const PricingDp* table = nullptr);

}  // namespace rabbi::pricing
