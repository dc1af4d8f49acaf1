#pragma once

// The seven sampling laws used in the coverage study.

#include <string>
#include <string_view>
#include <vector>

#include "bootci/rng.hpp"

namespace bootci {

enum class DistributionId { Gaussian, Exponential, T4, Uniform01, Lognormal, Poisson1, Geometric };

struct DistributionMoments {
  double mean;
  double variance;
  double skewness;
  /// Excess kurtosis; +inf for T4.
  double excess_kurtosis;
};

class TestDistribution {
 public:
  explicit TestDistribution(DistributionId id) : id_(id) {}

  [[nodiscard]] DistributionId id() const noexcept { return id_; }
  /// gaussian, exponential, t4, uniform, lognormal, poisson, geometric.
  [[nodiscard]] std::string name() const;
  [[nodiscard]] DistributionMoments moments() const;
  [[nodiscard]] double mean() const { return moments().mean; }
  [[nodiscard]] double sigma() const;

  double sample(RandomStream& rng) const;

 private:
  DistributionId id_;
};

/// Throws ConfigError for unknown names.
TestDistribution parse_distribution(std::string_view name);
std::vector<TestDistribution> all_distributions();

inline DistributionMoments distribution_moments(const TestDistribution& d) { return d.moments(); }

}  // namespace bootci
