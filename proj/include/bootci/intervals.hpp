#pragma once

// Approximate confidence intervals for a mean: weighted bootstrap-t, BCa,
// Student's t and the percentile method.
//
// Every method returns the point interval [x1, x1] for n = 1 and [xbar, xbar]
// when all observations are equal. Bootstrap endpoints use the order-statistic
// rule of quantile_extended, with no interpolation.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootci/resample_stats.hpp"
#include "bootci/rng.hpp"
#include "bootci/weight_schemes.hpp"

namespace bootci {

struct IntervalSpec {
  double alpha1 = 0.025;
  double alpha2 = 0.975;
  std::size_t B = 2000;
  /// Used by bootstrap-t only; BCa and percentile always resample multinomially.
  WeightScheme scheme = WeightScheme::multinomial();

  /// Symmetric two-sided spec: alpha1 = (1 - level)/2.
  static IntervalSpec two_sided(double level, std::size_t B = 2000,
                                WeightScheme scheme = WeightScheme::multinomial());
  [[nodiscard]] double level() const noexcept { return alpha2 - alpha1; }
  /// Throws ConfigError unless 0 < alpha1 < alpha2 < 1 and B >= 1.
  void validate() const;
};

enum class MethodKind { Student, Percentile, Bca, BootT };

struct Method {
  MethodKind kind = MethodKind::Student;
  WeightScheme scheme = WeightScheme::multinomial();

  static Method student() { return {MethodKind::Student}; }
  static Method percentile() { return {MethodKind::Percentile}; }
  static Method bca() { return {MethodKind::Bca}; }
  static Method boot_t(WeightScheme s) { return {MethodKind::BootT, s}; }

  /// student, percentile, bca or boott:<scheme>.
  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool resamples() const noexcept { return kind != MethodKind::Student; }

  friend bool operator==(const Method&, const Method&) = default;
};

/// Throws ConfigError for unknown names.
Method parse_method(std::string_view name);

/// The eleven methods of the n = 10 exponential comparison, in report order.
std::vector<Method> comparison_methods();

struct ConfidenceInterval {
  ExtendedReal L = 0.0;
  ExtendedReal U = 0.0;
  std::string method;
  double alpha1 = 0.025;
  double alpha2 = 0.975;

  [[nodiscard]] ExtendedReal length() const noexcept { return U - L; }
  [[nodiscard]] bool finite() const noexcept;
  [[nodiscard]] bool covers(double mu) const noexcept { return L <= mu && mu <= U; }
};

struct BcaDiagnostics {
  double z0 = 0.0;
  double a = 0.0;
  double alpha_tilde_1 = 0.025;
  double alpha_tilde_2 = 0.975;
  /// Set when 1 - a(z0 + z_j) <= 0 forced alpha_tilde_j to its clamp value.
  bool lower_singular = false;
  bool upper_singular = false;
};

struct BcaResult {
  ConfidenceInterval ci;
  BcaDiagnostics diagnostics;
};

/// Reusable buffers so repeated intervals on one thread do not allocate.
struct IntervalWorkspace {
  std::vector<double> counts;
  std::vector<ExtendedReal> draws;
};

/// xbar -/+ s t_{n-1} / sqrt(n) at alpha1 and alpha2.
ConfidenceInterval student_t_interval(std::span<const double> x, const IntervalSpec& spec);
/// Symmetric two-sided version at `level` (e.g. 0.95).
ConfidenceInterval student_t_interval(std::span<const double> x, double level);

ConfidenceInterval bootstrap_t_interval(std::span<const double> x, const IntervalSpec& spec,
                                        RandomStream& rng, IntervalWorkspace* ws = nullptr);

BcaResult bca_interval(std::span<const double> x, const IntervalSpec& spec, RandomStream& rng,
                       IntervalWorkspace* ws = nullptr);

ConfidenceInterval percentile_interval(std::span<const double> x, const IntervalSpec& spec,
                                       RandomStream& rng, IntervalWorkspace* ws = nullptr);

/// Dispatch on `method`; spec.scheme is replaced by the method's scheme.
ConfidenceInterval compute_interval(const Method& method, std::span<const double> x,
                                    const IntervalSpec& spec, RandomStream& rng,
                                    IntervalWorkspace* ws = nullptr);

/// Width of the n = 2 bootstrap-t interval divided by |x1 - x2|: the `level`
/// quantile of |w1 - 1/2| / sqrt(w1 (1 - w1)). Multinomial is computed from its
/// three-atom law; other schemes use `draws` Monte Carlo weight pairs.
ExtendedReal exact_n2_width_factor(const WeightScheme& scheme, double level, std::size_t draws,
                                   RandomStream& rng);

}  // namespace bootci
