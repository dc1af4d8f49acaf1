#include "bootci/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bootci/errors.hpp"
#include "bootci/special_functions.hpp"

namespace bootci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct HallCoefficients {
  double kappa, gamma_sq, intercept;
};

HallCoefficients hall_coefficients(HallMethod m) {
  switch (m) {
    case HallMethod::Normal: return {0.14, -2.12, -3.35};
    case HallMethod::Student: return {0.14, -2.12, 0.0};
    case HallMethod::Percentile: return {-0.72, -0.37, -3.35};
    case HallMethod::BootT: return {-2.84, 4.25, 0.0};
    case HallMethod::Bca: return {-2.63, 3.11, -3.35};
  }
  throw InternalError("unhandled Hall method");
}
}  // namespace

double pinball_score(double theta, double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("pinball_score: alpha must lie in (0,1)");
  return (x - theta) * (alpha - (x < theta ? 1.0 : 0.0));
}

ExtendedReal winkler_ci_score(ExtendedReal L, ExtendedReal U, double mu, double alpha1) {
  if (!(alpha1 > 0.0 && alpha1 < 0.5)) throw std::domain_error("winkler_ci_score: alpha1 must lie in (0,1/2)");
  if (!(L <= U)) throw std::domain_error("winkler_ci_score: need L <= U");
  if (!std::isfinite(L) || !std::isfinite(U)) return kInf;
  double score = U - L;
  if (mu < L) score += (L - mu) / alpha1;
  if (mu > U) score += (mu - U) / alpha1;
  return score;
}

double f_tilde(double coverage, ExtendedReal mean_sq_length, std::size_t n, double sigma, double beta) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) throw std::domain_error("f_tilde: coverage must lie in [0,1]");
  if (!(mean_sq_length >= 0.0)) throw std::domain_error("f_tilde: mean squared length must be >= 0");
  if (std::isinf(mean_sq_length)) return 0.0;
  const double b2 = beta * beta;
  const double precision_term = std::sqrt(static_cast<double>(n)) * std::sqrt(mean_sq_length) / sigma;
  return (b2 + 1.0) / (b2 / std::max(coverage, 0.95) + precision_term);
}

IntervalSummary summarize_intervals(std::span<const ConfidenceInterval> cis, double mu) {
  IntervalSummary s;
  s.count = cis.size();
  if (cis.empty()) return s;
  std::size_t covered = 0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& ci : cis) {
    covered += ci.covers(mu) ? 1 : 0;
    if (!ci.finite()) {
      ++s.infinite_count;
      continue;
    }
    const double len = ci.length();
    sum += len;
    sum_sq += len * len;
  }
  const double count = static_cast<double>(s.count);
  s.coverage = static_cast<double>(covered) / count;
  const std::size_t finite = s.count - s.infinite_count;
  if (finite > 0) {
    s.finite_mean_length = sum / static_cast<double>(finite);
    s.finite_rmsl = std::sqrt(sum_sq / static_cast<double>(finite));
  }
  if (s.infinite_count > 0) {
    s.mean_length = s.mean_sq_length = s.rmsl = kInf;
  } else {
    s.mean_length = sum / count;
    s.mean_sq_length = sum_sq / count;
    s.rmsl = std::sqrt(s.mean_sq_length);
  }
  return s;
}

WinklerSummary mean_winkler(std::span<const ConfidenceInterval> cis, double mu, double alpha1) {
  WinklerSummary w;
  double sum = 0.0;
  std::size_t finite = 0;
  for (const auto& ci : cis) {
    const double score = winkler_ci_score(ci.L, ci.U, mu, alpha1);
    if (std::isinf(score)) {
      ++w.infinite_count;
    } else {
      sum += score;
      ++finite;
    }
  }
  if (finite > 0) w.mean_finite = sum / static_cast<double>(finite);
  return w;
}

RiskVariant parse_risk_variant(std::string_view name) {
  if (name == "plain") return RiskVariant::Plain;
  if (name == "abs95") return RiskVariant::Abs95;
  if (name == "min95") return RiskVariant::Min95;
  if (name == "scaled_loss") return RiskVariant::ScaledLoss;
  throw ConfigError("unknown risk variant '" + std::string(name) + "'");
}

double quasi_risk(RiskVariant variant, double lambda, const IntervalSummary& summary, double sigma,
                  std::size_t n) {
  if (!(lambda >= 0.0)) throw std::domain_error("quasi_risk: lambda must be >= 0");
  if (!(sigma > 0.0)) throw std::domain_error("quasi_risk: sigma must be > 0");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double miss = summary.miss_rate();
  auto length_term = [lambda](double value) { return lambda == 0.0 ? 0.0 : lambda * value; };
  switch (variant) {
    case RiskVariant::Plain: return length_term(summary.mean_length) - miss;
    case RiskVariant::Abs95: return length_term(summary.rmsl / (sigma * root_n)) - std::abs(miss - 0.95);
    case RiskVariant::Min95: return length_term(summary.rmsl / (sigma * root_n)) - std::min(0.95, miss);
    case RiskVariant::ScaledLoss: return length_term(summary.mean_length / (root_n * sigma)) - summary.coverage;
  }
  throw InternalError("unhandled risk variant");
}

HallMethod parse_hall_method(std::string_view name) {
  if (name == "normal") return HallMethod::Normal;
  if (name == "student") return HallMethod::Student;
  if (name == "percentile") return HallMethod::Percentile;
  if (name == "boot_t") return HallMethod::BootT;
  if (name == "bca") return HallMethod::Bca;
  throw ConfigError("unknown Hall method '" + std::string(name) + "'");
}

double hall_coverage_error(HallMethod method, double gamma, double kappa, std::size_t n) {
  if (n < 1) throw std::domain_error("hall_coverage_error: n must be >= 1");
  const auto c = hall_coefficients(method);
  const double kappa_term = c.kappa == 0.0 ? 0.0 : c.kappa * kappa;
  return normal_pdf(kZ975) * (kappa_term + c.gamma_sq * gamma * gamma + c.intercept) / static_cast<double>(n);
}

}  // namespace bootci
