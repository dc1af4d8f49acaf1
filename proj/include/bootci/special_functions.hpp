#pragma once

#include <cstddef>

namespace bootci {

double normal_pdf(double z);
double normal_cdf(double z);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Inverse CDF of Student's t with `df` degrees of freedom.
double t_quantile(std::size_t df, double p);

/// The upper 0.975 standard normal point, rounded to six places.
inline constexpr double kZ975 = 1.959964;

}  // namespace bootci
