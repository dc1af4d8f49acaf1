#pragma once

// Pseudo-count laws for weighted bootstraps.
//
// A scheme draws nonnegative counts v_1..v_n; the resample weights are
// w_i = v_i / sum(v). Every IID scheme here has E(v) = var(v) = 1. The
// scaled-beta family v = A * Beta(a, b) with b = (a^2 + a)/(1 - a) and
// A = 2/(1 - a) has skewness 2a; a = 1/2 is the "beta" scheme and
// a = sqrt(2) - 1 (where b = 1) is the "power" scheme.

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootci/rng.hpp"

namespace bootci {

enum class SchemeId {
  Multinomial,
  HalfSample,
  Exponential,
  Poisson,
  ScaledBeta,
  Power,
  Mammen,
  DoubleOrNothing,
  Lognormal,
};

inline constexpr double kPowerShape = std::numbers::sqrt2 - 1.0;

struct WeightScheme {
  SchemeId id = SchemeId::Multinomial;
  /// Beta shape for ScaledBeta; ignored otherwise.
  double a = 0.0;

  static WeightScheme multinomial() { return {SchemeId::Multinomial}; }
  static WeightScheme half_sample() { return {SchemeId::HalfSample}; }
  static WeightScheme exponential() { return {SchemeId::Exponential}; }
  static WeightScheme poisson() { return {SchemeId::Poisson}; }
  static WeightScheme scaled_beta(double a);
  static WeightScheme beta() { return scaled_beta(0.5); }
  static WeightScheme power() { return {SchemeId::Power, kPowerShape}; }
  static WeightScheme mammen() { return {SchemeId::Mammen}; }
  static WeightScheme double_or_nothing() { return {SchemeId::DoubleOrNothing}; }
  static WeightScheme lognormal() { return {SchemeId::Lognormal}; }

  /// Counts independent across observations (everything but Multinomial and HalfSample).
  [[nodiscard]] bool iid() const noexcept {
    return id != SchemeId::Multinomial && id != SchemeId::HalfSample;
  }
  /// Canonical CLI name: multinomial, halfsample, ..., beta, or beta(a=<real>).
  [[nodiscard]] std::string name() const;

  friend bool operator==(const WeightScheme&, const WeightScheme&) = default;
};

/// Parses a scheme name; throws ConfigError on unknown names or a bad beta shape.
WeightScheme parse_scheme(std::string_view name);

/// The nine named schemes, in the order used by reports.
std::vector<WeightScheme> all_named_schemes();

struct ScaledBetaParams {
  double b;
  double A;
  double skewness;
};

/// Requires 0 < a < 1; throws std::domain_error otherwise.
ScaledBetaParams scaled_beta_params(double a);

struct SchemeMoments {
  double mean;
  double variance;
  double skewness;
  double prob_zero;
};

/// Analytic moments of a single pseudo-count. `n` matters only for Multinomial
/// (n >= 2 required there).
SchemeMoments scheme_moments(const WeightScheme& scheme, std::size_t n = 0);

/// Raw moment E(v^order) of an IID scheme's pseudo-count.
double raw_moment(const WeightScheme& scheme, int order);

struct PseudoCountVector {
  std::vector<double> v;
  SchemeId scheme = SchemeId::Multinomial;
};

struct NormalizedWeights {
  std::vector<double> w;
};

/// Fills `counts` with one draw of the scheme's joint law. IID schemes with an
/// atom at zero reject all-zero vectors and redraw, so sum(counts) > 0 on return.
/// Throws InternalError if 10^6 consecutive draws were all zero.
void sample_pseudo_counts(const WeightScheme& scheme, std::span<double> counts, RandomStream& rng);

PseudoCountVector sample_pseudo_counts(const WeightScheme& scheme, std::size_t n, RandomStream& rng);

/// w_i = v_i / sum(v). Throws std::domain_error when sum(v) is not positive.
NormalizedWeights normalize(const PseudoCountVector& counts);

/// (sum v)^2 / sum v^2.
double effective_sample_size(std::span<const double> counts);
inline double effective_sample_size(const PseudoCountVector& counts) {
  return effective_sample_size(counts.v);
}

}  // namespace bootci
