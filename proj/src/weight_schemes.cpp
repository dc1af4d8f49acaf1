#include "bootci/weight_schemes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bootci/errors.hpp"

namespace bootci {

namespace {

constexpr long kZeroRetryCap = 1'000'000;

const double kMammenLow = (3.0 - std::sqrt(5.0)) / 2.0;
const double kMammenHigh = (3.0 + std::sqrt(5.0)) / 2.0;
const double kMammenProbLow = 0.5 + 0.5 / std::sqrt(5.0);
const double kLogTwo = std::log(2.0);
const double kLognormalSigma = std::sqrt(kLogTwo);

double checked_shape(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::domain_error("scaled beta shape a must lie in (0,1)");
  return a;
}

// Beta(a, b) * A. Beta(1/2, 3/2) uses Gamma(1/2) = Z^2/2 and Gamma(3/2) = Z^2/2 + E.
double draw_scaled_beta(double a, double b, double A, RandomStream& rng) {
  double g1, g2;
  if (a == 0.5) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    g1 = 0.5 * z1 * z1;
    g2 = 0.5 * z2 * z2 + rng.exponential();
  } else {
    g1 = rng.gamma(a);
    g2 = rng.gamma(b);
  }
  return A * g1 / (g1 + g2);
}

double draw_poisson1(RandomStream& rng) {
  const double u = rng.uniform();
  double p = std::exp(-1.0);
  double cdf = p;
  int k = 0;
  while (u >= cdf && k < 40) {
    ++k;
    p /= k;
    cdf += p;
  }
  return static_cast<double>(k);
}

void draw_iid(const WeightScheme& s, std::span<double> v, RandomStream& rng) {
  switch (s.id) {
    case SchemeId::Exponential:
      for (double& x : v) x = rng.exponential();
      break;
    case SchemeId::Poisson:
      for (double& x : v) x = draw_poisson1(rng);
      break;
    case SchemeId::ScaledBeta: {
      const auto p = scaled_beta_params(s.a);
      for (double& x : v) x = draw_scaled_beta(s.a, p.b, p.A, rng);
      break;
    }
    case SchemeId::Power: {
      // Inverse CDF of the density (a / A^a) v^(a-1) on (0, A).
      const double A = 2.0 / (1.0 - kPowerShape);
      const double inv_a = 1.0 / kPowerShape;
      for (double& x : v) x = A * std::pow(rng.uniform_open(), inv_a);
      break;
    }
    case SchemeId::Mammen:
      for (double& x : v) x = rng.uniform() < kMammenProbLow ? kMammenLow : kMammenHigh;
      break;
    case SchemeId::DoubleOrNothing:
      for (double& x : v) x = (rng() >> 63) ? 2.0 : 0.0;
      break;
    case SchemeId::Lognormal:
      for (double& x : v) x = std::exp(-0.5 * kLogTwo + kLognormalSigma * rng.normal());
      break;
    default:
      throw InternalError("draw_iid called with a non-IID scheme");
  }
}

}  // namespace

WeightScheme WeightScheme::scaled_beta(double a) {
  return {SchemeId::ScaledBeta, checked_shape(a)};
}

std::string WeightScheme::name() const {
  switch (id) {
    case SchemeId::Multinomial: return "multinomial";
    case SchemeId::HalfSample: return "halfsample";
    case SchemeId::Exponential: return "exponential";
    case SchemeId::Poisson: return "poisson";
    case SchemeId::Power: return "power";
    case SchemeId::Mammen: return "mammen";
    case SchemeId::DoubleOrNothing: return "don";
    case SchemeId::Lognormal: return "lognormal";
    case SchemeId::ScaledBeta: {
      if (a == 0.5) return "beta";
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, a);
      (void)ec;
      return "beta(a=" + std::string(buf, end) + ")";
    }
  }
  return "unknown";
}

WeightScheme parse_scheme(std::string_view name) {
  if (name == "multinomial") return WeightScheme::multinomial();
  if (name == "halfsample") return WeightScheme::half_sample();
  if (name == "exponential") return WeightScheme::exponential();
  if (name == "poisson") return WeightScheme::poisson();
  if (name == "beta") return WeightScheme::beta();
  if (name == "power") return WeightScheme::power();
  if (name == "mammen") return WeightScheme::mammen();
  if (name == "don") return WeightScheme::double_or_nothing();
  if (name == "lognormal") return WeightScheme::lognormal();
  constexpr std::string_view prefix = "beta(a=";
  if (name.starts_with(prefix) && name.ends_with(")")) {
    const auto body = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    double a = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), a);
    if (ec != std::errc() || ptr != body.data() + body.size())
      throw ConfigError("bad beta shape in scheme name '" + std::string(name) + "'");
    if (!(a > 0.0 && a < 1.0))
      throw ConfigError("beta shape must lie in (0,1): '" + std::string(name) + "'");
    return WeightScheme::scaled_beta(a);
  }
  throw ConfigError("unknown weight scheme '" + std::string(name) + "'");
}

std::vector<WeightScheme> all_named_schemes() {
  return {WeightScheme::multinomial(), WeightScheme::half_sample(), WeightScheme::exponential(),
          WeightScheme::poisson(),     WeightScheme::beta(),        WeightScheme::power(),
          WeightScheme::mammen(),      WeightScheme::double_or_nothing(),
          WeightScheme::lognormal()};
}

ScaledBetaParams scaled_beta_params(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::domain_error("scaled_beta_params: a must lie in (0,1)");
  return {(a * a + a) / (1.0 - a), 2.0 / (1.0 - a), 2.0 * a};
}

SchemeMoments scheme_moments(const WeightScheme& s, std::size_t n) {
  switch (s.id) {
    case SchemeId::Multinomial: {
      if (n < 2) throw std::domain_error("multinomial moments need n >= 2");
      const double q = 1.0 - 1.0 / static_cast<double>(n);
      return {1.0, q, (1.0 - 2.0 / static_cast<double>(n)) / std::sqrt(q),
              std::pow(q, static_cast<double>(n))};
    }
    case SchemeId::HalfSample: return {1.0, 1.0, 0.0, 0.5};
    case SchemeId::Exponential: return {1.0, 1.0, 2.0, 0.0};
    case SchemeId::Poisson: return {1.0, 1.0, 1.0, std::exp(-1.0)};
    case SchemeId::ScaledBeta: return {1.0, 1.0, 2.0 * s.a, 0.0};
    case SchemeId::Power: return {1.0, 1.0, 2.0 * kPowerShape, 0.0};
    case SchemeId::Mammen: return {1.0, 1.0, 1.0, 0.0};
    case SchemeId::DoubleOrNothing: return {1.0, 1.0, 0.0, 0.5};
    case SchemeId::Lognormal: return {1.0, 1.0, 4.0, 0.0};
  }
  throw InternalError("unhandled scheme");
}

double raw_moment(const WeightScheme& s, int order) {
  if (order < 0) throw std::domain_error("raw_moment: order must be >= 0");
  const double l = order;
  switch (s.id) {
    case SchemeId::ScaledBeta:
    case SchemeId::Power: {
      const double a = s.id == SchemeId::Power ? kPowerShape : s.a;
      const double b = s.id == SchemeId::Power ? 1.0 : scaled_beta_params(a).b;
      const double A = 2.0 / (1.0 - a);
      double m = 1.0;
      for (int j = 0; j < order; ++j) m *= A * (a + j) / (a + b + j);
      return m;
    }
    case SchemeId::Exponential: return std::tgamma(l + 1.0);
    case SchemeId::Poisson: {
      // Bell numbers via the Bell triangle.
      std::vector<double> row{1.0};
      for (int k = 0; k < order; ++k) {
        std::vector<double> next{row.back()};
        for (double r : row) next.push_back(next.back() + r);
        row = std::move(next);
      }
      return row.front();
    }
    case SchemeId::Mammen:
      return kMammenProbLow * std::pow(kMammenLow, l) + (1.0 - kMammenProbLow) * std::pow(kMammenHigh, l);
    case SchemeId::DoubleOrNothing: return order == 0 ? 1.0 : 0.5 * std::pow(2.0, l);
    case SchemeId::Lognormal: return std::pow(2.0, 0.5 * (l * l - l));
    default: throw std::domain_error("raw_moment: scheme '" + s.name() + "' is not IID");
  }
}

void sample_pseudo_counts(const WeightScheme& s, std::span<double> v, RandomStream& rng) {
  const std::size_t n = v.size();
  if (n == 0) throw std::domain_error("sample_pseudo_counts: n must be >= 1");
  switch (s.id) {
    case SchemeId::Multinomial:
      std::fill(v.begin(), v.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) v[rng.index(n)] += 1.0;
      return;
    case SchemeId::HalfSample: {
      std::size_t k = n / 2;
      if (n % 2 == 1 && (rng() >> 63)) k += 1;
      // Selection sampling: each k-subset is equally likely.
      std::size_t chosen = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool take = rng.index(n - i) < k - chosen;
        v[i] = take ? 2.0 : 0.0;
        chosen += take ? 1 : 0;
      }
      return;
    }
    case SchemeId::Poisson:
    case SchemeId::DoubleOrNothing:
      for (long attempt = 0; attempt < kZeroRetryCap; ++attempt) {
        draw_iid(s, v, rng);
        if (std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; })) return;
      }
      throw InternalError("sample_pseudo_counts: all-zero retry cap exhausted");
    default:
      draw_iid(s, v, rng);
      return;
  }
}

PseudoCountVector sample_pseudo_counts(const WeightScheme& s, std::size_t n, RandomStream& rng) {
  PseudoCountVector out{std::vector<double>(n), s.id};
  sample_pseudo_counts(s, out.v, rng);
  return out;
}

NormalizedWeights normalize(const PseudoCountVector& counts) {
  const double total = std::accumulate(counts.v.begin(), counts.v.end(), 0.0);
  if (!(total > 0.0)) throw std::domain_error("normalize: counts must have a positive sum");
  NormalizedWeights out{std::vector<double>(counts.v.size())};
  std::transform(counts.v.begin(), counts.v.end(), out.w.begin(), [total](double x) { return x / total; });
  return out;
}

double effective_sample_size(std::span<const double> v) {
  double s = 0.0, s2 = 0.0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  if (!(s > 0.0)) throw std::domain_error("effective_sample_size: counts must have a positive sum");
  return s * s / s2;
}

}  // namespace bootci
