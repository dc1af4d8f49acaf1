#include "bootci/resample_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bootci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Products like 2000 * 0.025 land a few ulps above the integer they denote.
constexpr double kRankSlack = 1e-10;

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("quantile level must lie in (0,1)");
}
}  // namespace

SampleSummary sample_summary(std::span<const double> x) {
  if (x.empty()) throw std::domain_error("sample_summary: empty sample");
  SampleSummary s;
  s.n = x.size();
  double total = 0.0;
  for (double v : x) total += v;
  s.mean = total / static_cast<double>(s.n);
  bool all_equal = true;
  double ss = 0.0;
  for (double v : x) {
    all_equal = all_equal && v == x[0];
    ss += (v - s.mean) * (v - s.mean);
  }
  s.sigma_hat_sq = all_equal ? 0.0 : ss / static_cast<double>(s.n);
  if (s.n >= 2) s.s_sq = all_equal ? 0.0 : ss / static_cast<double>(s.n - 1);
  return s;
}

WeightedMoments weighted_moments(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) throw std::domain_error("weighted_moments: length mismatch");
  double mu = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mu += w[i] * x[i];
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) var += w[i] * (x[i] - mu) * (x[i] - mu);
  return {mu, var};
}

ExtendedReal bootstrap_t_statistic(std::span<const double> weights, std::span<const double> x,
                                   const SampleSummary& summary) {
  const std::size_t n = x.size();
  if (weights.size() != n) throw std::domain_error("bootstrap_t_statistic: length mismatch");
  double total = 0.0;
  double weighted_sum = 0.0;
  double first = 0.0;
  bool seen = false;
  bool single_value = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights[i];
    if (w > 0.0) {
      if (!seen) {
        first = x[i];
        seen = true;
      } else if (x[i] != first) {
        single_value = false;
      }
    }
    total += w;
    weighted_sum += w * x[i];
  }
  if (!seen) throw std::domain_error("bootstrap_t_statistic: weights must have a positive sum");

  if (!single_value) {
    const double mu = weighted_sum / total;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += weights[i] * (x[i] - mu) * (x[i] - mu);
    var /= total;
    if (var > 0.0) return std::sqrt(static_cast<double>(n)) * (mu - summary.mean) / std::sqrt(var);
    first = mu;
  }
  if (first > summary.mean) return kInf;
  if (first < summary.mean) return -kInf;
  return 0.0;
}

std::vector<ExtendedReal> t_star_sample(const WeightScheme& scheme, std::span<const double> x,
                                        std::size_t B, RandomStream& rng) {
  if (B < 1) throw std::domain_error("t_star_sample: B must be >= 1");
  const SampleSummary summary = sample_summary(x);
  std::vector<double> counts(x.size());
  std::vector<ExtendedReal> out(B);
  for (auto& t : out) {
    sample_pseudo_counts(scheme, counts, rng);
    t = bootstrap_t_statistic(counts, x, summary);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t quantile_rank(std::size_t B, double level) {
  check_level(level);
  if (B == 0) throw std::domain_error("quantile of an empty sample");
  const double tail = level <= 0.5 ? level : 1.0 - level;
  auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(B) * tail * (1.0 - kRankSlack)));
  k = std::clamp<std::size_t>(k, 1, B);
  return level <= 0.5 ? k : B - k + 1;
}

ExtendedReal quantile_extended(std::span<const ExtendedReal> sorted, double level) {
  if (sorted.empty()) throw std::domain_error("quantile_extended: empty input");
  return sorted[quantile_rank(sorted.size(), level) - 1];
}

ExtendedReal select_quantile(std::span<ExtendedReal> values, double level) {
  if (values.empty()) throw std::domain_error("select_quantile: empty input");
  const auto pos = values.begin() + static_cast<std::ptrdiff_t>(quantile_rank(values.size(), level) - 1);
  std::nth_element(values.begin(), pos, values.end());
  return *pos;
}

}  // namespace bootci
