#pragma once

// Sample and resample statistics on the extended real line.
//
// Extended reals are plain doubles that may hold +inf or -inf (never NaN);
// IEEE ordering already puts -inf first and +inf last.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bootci/rng.hpp"
#include "bootci/weight_schemes.hpp"

namespace bootci {

using ExtendedReal = double;

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Divisor n.
  double sigma_hat_sq = 0.0;
  /// Divisor n - 1; present only for n >= 2.
  std::optional<double> s_sq;

  [[nodiscard]] bool degenerate() const noexcept { return sigma_hat_sq == 0.0; }
};

/// Throws std::domain_error on empty input.
SampleSummary sample_summary(std::span<const double> x);

struct WeightedMoments {
  double mean;
  double variance;
};

/// mu* = sum w_i x_i and sigma*^2 = sum w_i (x_i - mu*)^2 for normalized weights.
WeightedMoments weighted_moments(std::span<const double> w, std::span<const double> x);

/// Studentized resampled mean t* = sqrt(n) (mu* - xbar) / sigma*.
///
/// `weights` may be raw pseudo-counts or normalized weights; they are divided
/// by their sum. sigma* is zero exactly when every x_i with positive weight
/// shares one value c, and then t* is +inf, -inf or 0 as c is above, below or
/// equal to the sample mean.
ExtendedReal bootstrap_t_statistic(std::span<const double> weights, std::span<const double> x,
                                   const SampleSummary& summary);

/// B draws of t* under `scheme`, sorted ascending.
std::vector<ExtendedReal> t_star_sample(const WeightScheme& scheme, std::span<const double> x,
                                        std::size_t B, RandomStream& rng);

/// 1-based rank (from the bottom) of the order statistic used as the `level`
/// quantile of B values: ceil(B level) from the bottom when level <= 1/2,
/// ceil(B (1 - level)) from the top otherwise.
std::size_t quantile_rank(std::size_t B, double level);

/// Quantile of sorted values under the quantile_rank rule. Throws on empty input
/// or a level outside (0,1).
ExtendedReal quantile_extended(std::span<const ExtendedReal> sorted, double level);

/// Same rule on unsorted values, partially reordering them in place.
ExtendedReal select_quantile(std::span<ExtendedReal> values, double level);

}  // namespace bootci
