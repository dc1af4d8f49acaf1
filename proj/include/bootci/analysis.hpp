#pragma once

// Exact small-n results and numeric checks of the moment expansions.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bootci/resample_stats.hpp"
#include "bootci/rng.hpp"
#include "bootci/weight_schemes.hpp"

namespace bootci {

/// Finitely many (value, probability) atoms, values ascending and distinct.
struct AtomicDistribution {
  std::vector<std::pair<ExtendedReal, double>> atoms;

  [[nodiscard]] double total_probability() const;
  /// Probability of exactly `value`; 0 when absent.
  [[nodiscard]] double mass_at(ExtendedReal value) const;
};

/// Sorts and merges exactly equal values. Probabilities are kept as given.
AtomicDistribution merge_atoms(std::vector<std::pair<ExtendedReal, double>> atoms);

/// Empirical law of a sample (each value weight 1/size).
AtomicDistribution empirical_distribution(std::span<const ExtendedReal> values);

/// Half the L1 distance, matching atoms by exact value (infinities included).
double total_variation(const AtomicDistribution& p, const AtomicDistribution& q);

/// Pr(sigma* = 0) under multinomial resampling of distinct data: n^(1-n).
double prob_sigma_star_zero(std::size_t n);

struct FisherHallProbs {
  /// Pr(largest count = n-1), n >= 3.
  std::optional<double> p_top1;
  /// Pr(largest = n-2, next two = 1), n >= 4.
  std::optional<double> p_top2_split;
  /// Pr(largest = n-2, next = 2), n >= 5.
  std::optional<double> p_top2_pair;
};
FisherHallProbs fisher_hall_probs(std::size_t n);

/// Smallest n >= 2 at which a one-sided infinite-t* tail has probability below
/// alpha1 for distinct data. Multinomial, DoubleOrNothing and Poisson only.
std::size_t finite_length_min_n(const WeightScheme& scheme, double alpha1 = 0.025);

/// Pr(Bin(trials, p) >= k).
double binom_tail(std::size_t trials, double p, std::size_t k);

inline constexpr std::size_t kMaxExactN = 12;

/// Exact law of t* over all C(2n-1, n) multinomial count vectors, each with
/// probability n!/(v_1! ... v_n!) n^-n. `vectors_visited`, when given, receives
/// the number of count vectors enumerated. Throws std::domain_error for n > 12.
AtomicDistribution exact_multinomial_t_distribution(std::span<const double> x,
                                                    std::size_t* vectors_visited = nullptr);

struct SecondOrderCheck {
  double e_w2_hat;
  double e_w2_pred;
  double se_w2;
  double e_w3_hat;
  double e_w3_pred;
  double se_w3;
};

/// Monte Carlo E(W^2), E(W^3) for W_i = n v_i / sum(v) against
/// 2 + (10 - 2 mu3)/n and mu3 + (9 mu3 - 3 mu4)/n (mu_l = E v^l). Each draw
/// contributes the average of W_i^k over i. Requires an IID scheme with no
/// atom at zero; throws std::domain_error otherwise.
SecondOrderCheck second_order_check(const WeightScheme& scheme, std::size_t n, std::size_t draws,
                                    RandomStream& rng);

/// E(v^-s) for a scaled-beta pseudo-count, by 1-D quadrature; +inf when s >= a.
double scaled_beta_inverse_moment(double a, double s);

/// Upper bound on E(t*^2) for data taking two values n1 and n - n1 times under
/// scaled-beta(a) weights:
///   n (2 + E(u1) E(1/u2) + E(u2) E(1/u1)),
/// with u_j the total count of group j and E(1/u_j) <= (1/n_j)(E v^(-1/n_j))^n_j.
/// Returns +inf when min(n1, n - n1) <= 1/a, where the bound is unavailable.
double two_value_finiteness_bound(std::size_t n1, std::size_t n, double a);

}  // namespace bootci
