#include "bootci/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bootci/errors.hpp"

namespace bootci {

namespace {

// Pr(one-sided infinite t*) for distinct data, as a function of n.
double infinite_tail_probability(const WeightScheme& scheme, std::size_t n) {
  const double nn = static_cast<double>(n);
  switch (scheme.id) {
    case SchemeId::Multinomial: return (nn - 1.0) * std::exp(-nn * std::log(nn));
    case SchemeId::DoubleOrNothing: {
      const double p0 = std::ldexp(1.0, -static_cast<int>(n));
      return nn * p0 / (1.0 - p0);
    }
    case SchemeId::Poisson: {
      // Series truncated at x = 50, where terms are far below 1e-300.
      double series = 0.0;
      for (int x = 0; x <= 50; ++x) series += std::exp(nn * (-1.0 - std::lgamma(x + 1.0)));
      return nn * series / (1.0 - std::exp(-nn));
    }
    default:
      throw std::domain_error("finite_length_min_n: supported schemes are multinomial, don and poisson");
  }
}

struct Enumerator {
  std::span<const double> x;
  SampleSummary summary;
  std::vector<double> log_factorial;
  std::vector<double> counts;
  std::vector<std::pair<ExtendedReal, double>> out;
  double log_norm = 0.0;

  void run(std::size_t pos, std::size_t remaining, double log_denominator) {
    const std::size_t n = x.size();
    if (pos + 1 == n) {
      counts[pos] = static_cast<double>(remaining);
      const double lp = log_norm - log_denominator - log_factorial[remaining];
      out.emplace_back(bootstrap_t_statistic(counts, x, summary), std::exp(lp));
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[pos] = static_cast<double>(c);
      run(pos + 1, remaining - c, log_denominator + log_factorial[c]);
    }
  }
};

}  // namespace

double AtomicDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& [v, p] : atoms) s += p;
  return s;
}

double AtomicDistribution::mass_at(ExtendedReal value) const {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), value,
                             [](const auto& atom, ExtendedReal v) { return atom.first < v; });
  return it != atoms.end() && it->first == value ? it->second : 0.0;
}

AtomicDistribution merge_atoms(std::vector<std::pair<ExtendedReal, double>> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  AtomicDistribution d;
  for (const auto& [v, p] : atoms) {
    if (!d.atoms.empty() && d.atoms.back().first == v)
      d.atoms.back().second += p;
    else
      d.atoms.emplace_back(v, p);
  }
  return d;
}

AtomicDistribution empirical_distribution(std::span<const ExtendedReal> values) {
  if (values.empty()) throw std::domain_error("empirical_distribution: empty input");
  const double w = 1.0 / static_cast<double>(values.size());
  std::vector<std::pair<ExtendedReal, double>> atoms;
  atoms.reserve(values.size());
  for (double v : values) atoms.emplace_back(v, w);
  return merge_atoms(std::move(atoms));
}

double total_variation(const AtomicDistribution& p, const AtomicDistribution& q) {
  double d = 0.0;
  std::size_t i = 0, j = 0;
  const auto& a = p.atoms;
  const auto& b = q.atoms;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      d += std::abs(a[i++].second);
    } else if (i == a.size() || b[j].first < a[i].first) {
      d += std::abs(b[j++].second);
    } else {
      d += std::abs(a[i++].second - b[j++].second);
    }
  }
  return 0.5 * d;
}

double prob_sigma_star_zero(std::size_t n) {
  if (n < 1) throw std::domain_error("prob_sigma_star_zero: n must be >= 1");
  const double nn = static_cast<double>(n);
  return std::pow(nn, 1.0 - nn);
}

FisherHallProbs fisher_hall_probs(std::size_t n) {
  FisherHallProbs p;
  const double nn = static_cast<double>(n);
  const double q = 1.0 - 1.0 / nn;
  if (n >= 3) p.p_top1 = q * std::pow(nn, 3.0 - nn);
  if (n >= 4) p.p_top2_split = 0.5 * q * q * (1.0 - 2.0 / nn) * std::pow(nn, 5.0 - nn);
  if (n >= 5) p.p_top2_pair = 0.5 * q * q * std::pow(nn, 4.0 - nn);
  return p;
}

std::size_t finite_length_min_n(const WeightScheme& scheme, double alpha1) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) throw std::domain_error("finite_length_min_n: alpha1 must lie in (0,1)");
  for (std::size_t n = 2; n <= 100000; ++n)
    if (infinite_tail_probability(scheme, n) < alpha1) return n;
  throw std::domain_error("finite_length_min_n: no n found below 100000");
}

double binom_tail(std::size_t trials, double p, std::size_t k) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binom_tail: p must lie in [0,1]");
  if (k == 0) return 1.0;
  if (k > trials) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double N = static_cast<double>(trials);
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lgN = std::lgamma(N + 1.0);
  double s = 0.0;
  for (std::size_t j = k; j <= trials; ++j) {
    const double jj = static_cast<double>(j);
    const double term = std::exp(lgN - std::lgamma(jj + 1.0) - std::lgamma(N - jj + 1.0) + jj * lp + (N - jj) * lq);
    s += term;
    // Past the mode the terms only shrink.
    if (jj > N * p && term < s * 1e-18) break;
  }
  return std::min(s, 1.0);
}

AtomicDistribution exact_multinomial_t_distribution(std::span<const double> x, std::size_t* vectors_visited) {
  const std::size_t n = x.size();
  if (n < 1) throw std::domain_error("exact_multinomial_t_distribution: empty sample");
  if (n > kMaxExactN) throw std::domain_error("exact_multinomial_t_distribution: n must be <= 12");
  Enumerator e{x, sample_summary(x), std::vector<double>(n + 1), std::vector<double>(n), {}, 0.0};
  for (std::size_t k = 1; k <= n; ++k) e.log_factorial[k] = e.log_factorial[k - 1] + std::log(static_cast<double>(k));
  const double nn = static_cast<double>(n);
  e.log_norm = e.log_factorial[n] - nn * std::log(nn);
  e.run(0, n, 0.0);
  if (vectors_visited) *vectors_visited = e.out.size();
  return merge_atoms(std::move(e.out));
}

SecondOrderCheck second_order_check(const WeightScheme& scheme, std::size_t n, std::size_t draws,
                                    RandomStream& rng) {
  if (!scheme.iid()) throw std::domain_error("second_order_check: needs an IID scheme");
  if (scheme_moments(scheme).prob_zero > 0.0)
    throw std::domain_error("second_order_check: scheme has an atom at zero");
  if (n < 1 || draws < 2) throw std::domain_error("second_order_check: need n >= 1 and draws >= 2");
  const double nn = static_cast<double>(n);
  const double mu3 = raw_moment(scheme, 3);
  const double mu4 = raw_moment(scheme, 4);

  std::vector<double> v(n);
  // Welford accumulators for the per-draw averages.
  double mean2 = 0.0, m2acc = 0.0, mean3 = 0.0, m3acc = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    sample_pseudo_counts(scheme, v, rng);
    double total = 0.0;
    for (double c : v) total += c;
    const double scale = nn / total;
    double s2 = 0.0, s3 = 0.0;
    for (double c : v) {
      const double W = c * scale;
      s2 += W * W;
      s3 += W * W * W;
    }
    s2 /= nn;
    s3 /= nn;
    const double k = static_cast<double>(d + 1);
    const double d2 = s2 - mean2;
    mean2 += d2 / k;
    m2acc += d2 * (s2 - mean2);
    const double d3 = s3 - mean3;
    mean3 += d3 / k;
    m3acc += d3 * (s3 - mean3);
  }
  const double D = static_cast<double>(draws);
  return {mean2,
          2.0 + (10.0 - 2.0 * mu3) / nn,
          std::sqrt(m2acc / (D - 1.0) / D),
          mean3,
          mu3 + (9.0 * mu3 - 3.0 * mu4) / nn,
          std::sqrt(m3acc / (D - 1.0) / D)};
}

double scaled_beta_inverse_moment(double a, double s) {
  const auto params = scaled_beta_params(a);
  if (s == 0.0) return 1.0;
  const double c = a - s;
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  // With t = y^(1/c), int_0^1 t^(c-1) (1-t)^(b-1) dt = (1/c) int_0^1 (1 - y^(1/c))^(b-1) dy,
  // which removes the singularity at 0. The same map normalizes by B(a, b).
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto kernel = [b = params.b](double shape) {
    return [b, shape](double y) { return std::pow(-std::expm1(std::log(y) / shape), b - 1.0); };
  };
  const double numerator = integrator.integrate(kernel(c), 0.0, 1.0) / c;
  const double beta_ab = integrator.integrate(kernel(a), 0.0, 1.0) / a;
  return std::pow(params.A, -s) * numerator / beta_ab;
}

double two_value_finiteness_bound(std::size_t n1, std::size_t n, double a) {
  if (n1 < 1 || n1 >= n) throw std::domain_error("two_value_finiteness_bound: need 1 <= n1 < n");
  (void)scaled_beta_params(a);
  const std::size_t n2 = n - n1;
  if (static_cast<double>(std::min(n1, n2)) <= 1.0 / a) return std::numeric_limits<double>::infinity();
  // AM-GM: u_j >= n_j (prod v)^(1/n_j), so E(1/u_j) <= (1/n_j) (E v^(-1/n_j))^n_j.
  auto inverse_total = [a](std::size_t nj) {
    const double k = static_cast<double>(nj);
    return std::pow(scaled_beta_inverse_moment(a, 1.0 / k), k) / k;
  };
  const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
  return static_cast<double>(n) * (2.0 + d1 * inverse_total(n2) + d2 * inverse_total(n1));
}

}  // namespace bootci
