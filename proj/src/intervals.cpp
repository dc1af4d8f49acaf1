#include "bootci/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bootci/errors.hpp"
#include "bootci/special_functions.hpp"

namespace bootci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConfidenceInterval make_ci(double L, double U, const std::string& method, const IntervalSpec& spec) {
  return {L, U, method, spec.alpha1, spec.alpha2};
}

IntervalWorkspace& workspace_or(IntervalWorkspace* ws, IntervalWorkspace& local) {
  return ws ? *ws : local;
}

// B multinomial bootstrap means sum(v_i x_i)/n into ws.draws. Rounding can push
// a mean one ulp past the data range, so it is clamped back.
void bootstrap_means(std::span<const double> x, std::size_t B, RandomStream& rng, IntervalWorkspace& ws) {
  const std::size_t n = x.size();
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  ws.counts.resize(n);
  ws.draws.resize(B);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto multinomial = WeightScheme::multinomial();
  for (auto& m : ws.draws) {
    sample_pseudo_counts(multinomial, ws.counts, rng);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ws.counts[i] * x[i];
    m = std::clamp(s * inv_n, *lo, *hi);
  }
}

}  // namespace

IntervalSpec IntervalSpec::two_sided(double level, std::size_t B, WeightScheme scheme) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0,1)");
  const double a1 = 0.5 * (1.0 - level);
  return {a1, 1.0 - a1, B, scheme};
}

void IntervalSpec::validate() const {
  if (!(alpha1 > 0.0 && alpha1 < alpha2 && alpha2 < 1.0))
    throw ConfigError("interval levels need 0 < alpha1 < alpha2 < 1");
  if (B < 1) throw ConfigError("B must be at least 1");
}

std::string Method::name() const {
  switch (kind) {
    case MethodKind::Student: return "student";
    case MethodKind::Percentile: return "percentile";
    case MethodKind::Bca: return "bca";
    case MethodKind::BootT: return "boott:" + scheme.name();
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "student") return Method::student();
  if (name == "percentile") return Method::percentile();
  if (name == "bca") return Method::bca();
  constexpr std::string_view prefix = "boott:";
  if (name.starts_with(prefix)) return Method::boot_t(parse_scheme(name.substr(prefix.size())));
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::vector<Method> comparison_methods() {
  return {Method::boot_t(WeightScheme::double_or_nothing()),
          Method::boot_t(WeightScheme::poisson()),
          Method::boot_t(WeightScheme::half_sample()),
          Method::boot_t(WeightScheme::multinomial()),
          Method::boot_t(WeightScheme::power()),
          Method::boot_t(WeightScheme::beta()),
          Method::student(),
          Method::boot_t(WeightScheme::exponential()),
          Method::bca(),
          Method::boot_t(WeightScheme::mammen()),
          Method::boot_t(WeightScheme::lognormal())};
}

bool ConfidenceInterval::finite() const noexcept { return std::isfinite(L) && std::isfinite(U); }

ConfidenceInterval student_t_interval(std::span<const double> x, const IntervalSpec& spec) {
  const auto s = sample_summary(x);
  if (s.n == 1 || s.degenerate()) return make_ci(s.mean, s.mean, "student", spec);
  const double se = std::sqrt(*s.s_sq / static_cast<double>(s.n));
  const auto df = s.n - 1;
  return make_ci(s.mean - se * t_quantile(df, spec.alpha2), s.mean - se * t_quantile(df, spec.alpha1),
                 "student", spec);
}

ConfidenceInterval student_t_interval(std::span<const double> x, double level) {
  return student_t_interval(x, IntervalSpec::two_sided(level));
}

ConfidenceInterval bootstrap_t_interval(std::span<const double> x, const IntervalSpec& spec,
                                        RandomStream& rng, IntervalWorkspace* ws) {
  spec.validate();
  const std::string name = Method::boot_t(spec.scheme).name();
  const auto s = sample_summary(x);
  if (s.degenerate()) return make_ci(s.mean, s.mean, name, spec);

  IntervalWorkspace local;
  auto& w = workspace_or(ws, local);
  w.counts.resize(s.n);
  w.draws.resize(spec.B);
  for (auto& t : w.draws) {
    sample_pseudo_counts(spec.scheme, w.counts, rng);
    t = bootstrap_t_statistic(w.counts, x, s);
  }
  const double q1 = select_quantile(w.draws, spec.alpha1);
  const double q2 = select_quantile(w.draws, spec.alpha2);
  const double scale = std::sqrt(s.sigma_hat_sq / static_cast<double>(s.n));
  // 0 * t never occurs here (scale > 0), so infinite quantiles map to infinite endpoints.
  return make_ci(s.mean - scale * q2, s.mean - scale * q1, name, spec);
}

BcaResult bca_interval(std::span<const double> x, const IntervalSpec& spec, RandomStream& rng,
                       IntervalWorkspace* ws) {
  spec.validate();
  const auto s = sample_summary(x);
  BcaResult out;
  out.diagnostics.alpha_tilde_1 = spec.alpha1;
  out.diagnostics.alpha_tilde_2 = spec.alpha2;
  if (s.degenerate()) {
    out.ci = make_ci(s.mean, s.mean, "bca", spec);
    return out;
  }

  IntervalWorkspace local;
  auto& w = workspace_or(ws, local);
  bootstrap_means(x, spec.B, rng, w);

  const double B = static_cast<double>(spec.B);
  const double floor_p = 0.5 / B;
  double below = 0.0;
  for (double m : w.draws) below += m < s.mean ? 1.0 : (m == s.mean ? 0.5 : 0.0);
  const double prop = std::clamp(below / B, floor_p, 1.0 - floor_p);
  const double z0 = normal_quantile(prop);

  double su2 = 0.0, su3 = 0.0;
  const double denom = static_cast<double>(s.n - 1);
  for (double v : x) {
    const double u = (v - s.mean) / denom;
    su2 += u * u;
    su3 += u * u * u;
  }
  const double a = su3 / (6.0 * std::pow(su2, 1.5));

  auto adjust = [&](double alpha, bool lower, bool& singular) {
    const double zz = z0 + normal_quantile(alpha);
    const double d = 1.0 - a * zz;
    if (d <= 0.0) {
      singular = true;
      return lower ? floor_p : 1.0 - floor_p;
    }
    return std::clamp(normal_cdf(z0 + zz / d), floor_p, 1.0 - floor_p);
  };
  auto& diag = out.diagnostics;
  diag.z0 = z0;
  diag.a = a;
  diag.alpha_tilde_1 = adjust(spec.alpha1, true, diag.lower_singular);
  diag.alpha_tilde_2 = adjust(spec.alpha2, false, diag.upper_singular);

  double L = select_quantile(w.draws, diag.alpha_tilde_1);
  double U = select_quantile(w.draws, diag.alpha_tilde_2);
  // A singular lower limit can push alpha_tilde_1 above alpha_tilde_2.
  if (L > U) std::swap(L, U);
  out.ci = make_ci(L, U, "bca", spec);
  return out;
}

ConfidenceInterval percentile_interval(std::span<const double> x, const IntervalSpec& spec,
                                       RandomStream& rng, IntervalWorkspace* ws) {
  spec.validate();
  const auto s = sample_summary(x);
  if (s.degenerate()) return make_ci(s.mean, s.mean, "percentile", spec);
  IntervalWorkspace local;
  auto& w = workspace_or(ws, local);
  bootstrap_means(x, spec.B, rng, w);
  const double L = select_quantile(w.draws, spec.alpha1);
  const double U = select_quantile(w.draws, spec.alpha2);
  return make_ci(L, U, "percentile", spec);
}

ConfidenceInterval compute_interval(const Method& method, std::span<const double> x,
                                    const IntervalSpec& spec, RandomStream& rng, IntervalWorkspace* ws) {
  switch (method.kind) {
    case MethodKind::Student: return student_t_interval(x, spec);
    case MethodKind::Percentile: return percentile_interval(x, spec, rng, ws);
    case MethodKind::Bca: return bca_interval(x, spec, rng, ws).ci;
    case MethodKind::BootT: {
      IntervalSpec s = spec;
      s.scheme = method.scheme;
      return bootstrap_t_interval(x, s, rng, ws);
    }
  }
  throw InternalError("unhandled method kind");
}

ExtendedReal exact_n2_width_factor(const WeightScheme& scheme, double level, std::size_t draws,
                                   RandomStream& rng) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("exact_n2_width_factor: level must lie in (0,1)");
  if (scheme.id == SchemeId::Multinomial) {
    // w1 in {0, 1/2, 1} with probabilities 1/4, 1/2, 1/4: the ratio is 0 or +inf, each with mass 1/2.
    return level <= 0.5 ? 0.0 : kInf;
  }
  if (draws < 1) throw std::domain_error("exact_n2_width_factor: draws must be >= 1");
  std::vector<double> v(2);
  std::vector<ExtendedReal> r(draws);
  for (auto& val : r) {
    sample_pseudo_counts(scheme, v, rng);
    const double w1 = v[0] / (v[0] + v[1]);
    const double spread = w1 * (1.0 - w1);
    val = spread > 0.0 ? std::abs(w1 - 0.5) / std::sqrt(spread) : kInf;
  }
  return select_quantile(r, level);
}

}  // namespace bootci
