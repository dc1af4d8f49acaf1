#include "bootci/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace bootci {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double t_quantile(std::size_t df, double p) {
  if (df < 1) throw std::domain_error("t_quantile: df must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t_quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  if (df == 1) return std::tan(std::numbers::pi * (p - 0.5));
  return boost::math::quantile(boost::math::students_t_distribution<double>(static_cast<double>(df)), p);
}

}  // namespace bootci
