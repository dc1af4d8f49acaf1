#pragma once

// Scores for judging confidence intervals, plus Hall's O(1/n) coverage-error
// predictions for two-sided 95% intervals.

#include <cstddef>
#include <span>
#include <string_view>

#include "bootci/intervals.hpp"
#include "bootci/resample_stats.hpp"

namespace bootci {

/// (x - theta)(alpha - 1{x < theta}).
double pinball_score(double theta, double x, double alpha);

/// U - L + (L - mu)/alpha1 when mu < L, + (mu - U)/alpha1 when mu > U.
/// +inf whenever the interval is infinite.
ExtendedReal winkler_ci_score(ExtendedReal L, ExtendedReal U, double mu, double alpha1);

/// (beta^2 + 1) / (beta^2 / max(coverage, 0.95) + sqrt(n) sqrt(mean_sq_length) / sigma).
/// Returns 0 for an infinite mean squared length.
double f_tilde(double coverage, ExtendedReal mean_sq_length, std::size_t n, double sigma, double beta = 1.0);

/// Aggregate of many intervals against a known mean.
struct IntervalSummary {
  std::size_t count = 0;
  double coverage = 0.0;
  ExtendedReal mean_length = 0.0;
  ExtendedReal mean_sq_length = 0.0;
  ExtendedReal rmsl = 0.0;
  std::size_t infinite_count = 0;
  /// Over the finite intervals only; 0 when there are none.
  double finite_mean_length = 0.0;
  double finite_rmsl = 0.0;

  [[nodiscard]] double miss_rate() const noexcept { return 1.0 - coverage; }
};

IntervalSummary summarize_intervals(std::span<const ConfidenceInterval> cis, double mu);

/// Mean Winkler score over finite scores, with the number of infinite scores.
struct WinklerSummary {
  double mean_finite = 0.0;
  std::size_t infinite_count = 0;
};
WinklerSummary mean_winkler(std::span<const ConfidenceInterval> cis, double mu, double alpha1);

enum class RiskVariant { Plain, Abs95, Min95, ScaledLoss };

/// plain, abs95, min95 or scaled_loss; throws ConfigError otherwise.
RiskVariant parse_risk_variant(std::string_view name);

/// The four length/miss tradeoffs, written with Pr(mu not in [L, U]) exactly as
/// they are usually printed:
///   plain        lambda E(U - L) - Pr(miss)
///   abs95        lambda RMSL/(sigma sqrt n) - |Pr(miss) - 0.95|
///   min95        lambda RMSL/(sigma sqrt n) - min(0.95, Pr(miss))
///   scaled_loss  mean of lambda (U - L)/(sqrt(n) sigma) - 1{cover}
/// lambda = 0 drops the length term even when lengths are infinite.
double quasi_risk(RiskVariant variant, double lambda, const IntervalSummary& summary, double sigma,
                  std::size_t n);

enum class HallMethod { Normal, Student, Percentile, BootT, Bca };

HallMethod parse_hall_method(std::string_view name);

/// (1/n) phi(z) [c_kappa kappa + c_gamma gamma^2 + c_0] with z = 1.959964.
double hall_coverage_error(HallMethod method, double gamma, double kappa, std::size_t n);

}  // namespace bootci
