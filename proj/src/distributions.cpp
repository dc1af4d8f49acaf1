#include "bootci/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bootci/errors.hpp"

namespace bootci {

namespace {
// Geometric success probability p = 1 - e^{-1}, so Pr(X >= k) = e^{-k}.
const double kGeomP = 1.0 - std::exp(-1.0);

double poisson1(RandomStream& rng) {
  const double u = rng.uniform();
  double p = std::exp(-1.0);
  double cdf = p;
  int k = 0;
  while (u >= cdf && k < 40) {
    ++k;
    p /= k;
    cdf += p;
  }
  return k;
}
}  // namespace

std::string TestDistribution::name() const {
  switch (id_) {
    case DistributionId::Gaussian: return "gaussian";
    case DistributionId::Exponential: return "exponential";
    case DistributionId::T4: return "t4";
    case DistributionId::Uniform01: return "uniform";
    case DistributionId::Lognormal: return "lognormal";
    case DistributionId::Poisson1: return "poisson";
    case DistributionId::Geometric: return "geometric";
  }
  return "unknown";
}

DistributionMoments TestDistribution::moments() const {
  const double e = std::numbers::e;
  switch (id_) {
    case DistributionId::Gaussian: return {0.0, 1.0, 0.0, 0.0};
    case DistributionId::Exponential: return {1.0, 1.0, 2.0, 6.0};
    case DistributionId::T4: return {0.0, 2.0, 0.0, std::numeric_limits<double>::infinity()};
    case DistributionId::Uniform01: return {0.5, 1.0 / 12.0, 0.0, -1.2};
    case DistributionId::Lognormal:
      return {std::exp(0.5), (e - 1.0) * e, (e + 2.0) * std::sqrt(e - 1.0),
              std::exp(4.0) + 2.0 * std::exp(3.0) + 3.0 * std::exp(2.0) - 6.0};
    case DistributionId::Poisson1: return {1.0, 1.0, 1.0, 1.0};
    case DistributionId::Geometric: {
      const double p = kGeomP, q = 1.0 - p;
      return {q / p, q / (p * p), (2.0 - p) / std::sqrt(q), 6.0 + p * p / q};
    }
  }
  throw InternalError("unhandled distribution");
}

double TestDistribution::sigma() const { return std::sqrt(moments().variance); }

double TestDistribution::sample(RandomStream& rng) const {
  switch (id_) {
    case DistributionId::Gaussian: return rng.normal();
    case DistributionId::Exponential: return rng.exponential();
    case DistributionId::T4: {
      // Chi-square(4)/4 = (E1 + E2)/2.
      const double z = rng.normal();
      const double chi = 0.5 * (rng.exponential() + rng.exponential());
      return z / std::sqrt(chi);
    }
    case DistributionId::Uniform01: return rng.uniform();
    case DistributionId::Lognormal: return std::exp(rng.normal());
    case DistributionId::Poisson1: return poisson1(rng);
    case DistributionId::Geometric: return std::floor(rng.exponential());
  }
  throw InternalError("unhandled distribution");
}

TestDistribution parse_distribution(std::string_view name) {
  for (const auto& d : all_distributions())
    if (d.name() == name) return d;
  throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

std::vector<TestDistribution> all_distributions() {
  return {TestDistribution(DistributionId::Gaussian),  TestDistribution(DistributionId::Exponential),
          TestDistribution(DistributionId::T4),        TestDistribution(DistributionId::Uniform01),
          TestDistribution(DistributionId::Lognormal), TestDistribution(DistributionId::Poisson1),
          TestDistribution(DistributionId::Geometric)};
}

}  // namespace bootci
