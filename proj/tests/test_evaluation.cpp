#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "bootci/errors.hpp"
#include "bootci/evaluation.hpp"

using namespace bootci;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

ConfidenceInterval ci(double L, double U) { return {L, U, "test"}; }
}  // namespace

TEST_CASE("pinball score") {
  CHECK(pinball_score(0, 1, 0.5) == 0.5);
  CHECK(pinball_score(2.5, 2.5, 0.3) == 0.0);
  CHECK_THAT(pinball_score(1, 0, 0.9), WithinAbs(0.1, 1e-15));
  CHECK_THAT(pinball_score(0, 2, 0.1), WithinAbs(0.2, 1e-15));
}

TEST_CASE("Winkler score examples") {
  CHECK(winkler_ci_score(0, 2, 1, 0.025) == 2.0);
  CHECK_THAT(winkler_ci_score(0, 2, 3, 0.025), WithinAbs(42.0, 1e-12));
  CHECK_THAT(winkler_ci_score(0, 2, -0.5, 0.025), WithinAbs(22.0, 1e-12));
  CHECK(winkler_ci_score(-kInf, kInf, 0, 0.025) == kInf);
  CHECK(winkler_ci_score(0, kInf, -1, 0.025) == kInf);
}

TEST_CASE("Winkler score is continuous and piecewise linear") {
  const double L = -0.7, U = 1.9, a = 0.05, h = 1e-3;
  for (int k = 0; k <= 900; ++k) {
    const double mu = -4.0 + 0.01 * k;
    const double s = winkler_ci_score(L, U, mu, a);
    CHECK(s >= U - L);
    if (std::abs(mu - L) > 1e-9 && std::abs(mu - U) > 1e-9) CHECK((s == U - L) == (L <= mu && mu <= U));
    const double slope = (winkler_ci_score(L, U, mu + h, a) - s) / h;
    if (mu + h < L) CHECK_THAT(slope, WithinAbs(-1 / a, 1e-6));
    else if (mu > L && mu + h < U) CHECK_THAT(slope, WithinAbs(0.0, 1e-9));
    else if (mu > U) CHECK_THAT(slope, WithinAbs(1 / a, 1e-6));
  }
  // No jumps at the endpoints.
  CHECK_THAT(winkler_ci_score(L, U, L - 1e-12, a), WithinAbs(U - L, 1e-9));
  CHECK_THAT(winkler_ci_score(L, U, U + 1e-12, a), WithinAbs(U - L, 1e-9));
}

TEST_CASE("f tilde") {
  CHECK_THAT(f_tilde(0.9415, 5.40, 10, 1), WithinAbs(0.238, 0.001));
  CHECK_THAT(f_tilde(0.9311, 2.90, 10, 1), WithinAbs(0.311, 0.001));
  CHECK_THAT(f_tilde(0.95, 0.0, 7, 2.0), WithinAbs(1.9, 1e-12));
  CHECK(f_tilde(0.99, kInf, 10, 1) == 0.0);

  // Nonincreasing in length, constant in coverage up to 0.95, then nondecreasing.
  double prev = f_tilde(0.95, 0.0, 10, 1);
  for (double m = 0.1; m < 10; m += 0.1) {
    const double f = f_tilde(0.95, m, 10, 1);
    CHECK(f <= prev);
    prev = f;
  }
  CHECK(f_tilde(0.5, 2.0, 10, 1) == f_tilde(0.95, 2.0, 10, 1));
  CHECK(f_tilde(0.97, 2.0, 10, 1) >= f_tilde(0.96, 2.0, 10, 1));
}

TEST_CASE("interval summaries") {
  std::vector<ConfidenceInterval> cis{ci(0, 2), ci(1, 2), ci(-1, 3), ci(-kInf, kInf)};
  auto s = summarize_intervals(cis, 0.5);
  CHECK(s.count == 4);
  CHECK(s.coverage == 0.75);
  CHECK(s.mean_length == kInf);
  CHECK(s.rmsl == kInf);
  CHECK(s.infinite_count == 1);
  CHECK_THAT(s.finite_mean_length, WithinAbs(7.0 / 3.0, 1e-12));
  CHECK_THAT(s.finite_rmsl, WithinAbs(std::sqrt(21.0 / 3.0), 1e-12));

  std::vector<ConfidenceInterval> fin{ci(0, 1), ci(0, 3)};
  auto f = summarize_intervals(fin, 2.0);
  CHECK(f.mean_length == 2.0);
  CHECK(f.mean_sq_length == 5.0);
  CHECK(f.rmsl >= f.mean_length);
  CHECK_THAT(f.miss_rate(), WithinAbs(0.5, 1e-15));

  auto w = mean_winkler(cis, 0.5, 0.025);
  CHECK(w.infinite_count == 1);
  CHECK_THAT(w.mean_finite, WithinAbs((2.0 + (1 + 0.5 / 0.025) + 4.0) / 3.0, 1e-12));
}

TEST_CASE("quasi risks") {
  IntervalSummary s;
  s.count = 100;
  s.coverage = 0.95;
  s.mean_length = kInf;
  s.mean_sq_length = kInf;
  s.rmsl = kInf;
  CHECK_THAT(quasi_risk(RiskVariant::Plain, 0.0, s, 1.0, 10), WithinAbs(-0.05, 1e-12));

  IntervalSummary t;
  t.count = 100;
  t.coverage = 0.05;
  t.rmsl = 2.0;  // sigma sqrt(n) with sigma = 1, n = 4
  t.mean_length = 1.5;
  t.mean_sq_length = 4.0;
  CHECK_THAT(quasi_risk(RiskVariant::Abs95, 1.0, t, 1.0, 4), WithinAbs(1.0, 1e-12));
  t.coverage = 0.98;
  CHECK_THAT(quasi_risk(RiskVariant::Min95, 1.0, t, 1.0, 4), WithinAbs(0.98, 1e-12));
  CHECK_THAT(quasi_risk(RiskVariant::ScaledLoss, 2.0, t, 1.0, 4), WithinAbs(2.0 * 1.5 / 2.0 - 0.98, 1e-12));
  CHECK_THAT(quasi_risk(RiskVariant::Plain, 0.5, t, 1.0, 4), WithinAbs(0.75 - 0.02, 1e-12));

  CHECK(parse_risk_variant("min95") == RiskVariant::Min95);
  CHECK_THROWS_AS(parse_risk_variant("max95"), ConfigError);
}

TEST_CASE("Hall coverage errors") {
  CHECK(hall_coverage_error(HallMethod::BootT, 0, 0, 10) == 0.0);
  CHECK(hall_coverage_error(HallMethod::Student, 0, 0, 3) == 0.0);
  CHECK_THAT(hall_coverage_error(HallMethod::BootT, 2, 6, 18), WithinAbs(-1.30e-4, 0.005e-4));
  CHECK(hall_coverage_error(HallMethod::Normal, 0, 0, 10) < 0.0);
  for (auto m : {HallMethod::Normal, HallMethod::Student, HallMethod::Percentile, HallMethod::BootT, HallMethod::Bca}) {
    const double base = hall_coverage_error(m, 1.3, 2.1, 1);
    for (std::size_t n : {2u, 7u, 20u, 1000u}) CHECK_THAT(hall_coverage_error(m, 1.3, 2.1, n) * n, WithinRel(base, 1e-12));
  }
  CHECK(parse_hall_method("boot_t") == HallMethod::BootT);
  CHECK_THROWS_AS(parse_hall_method("jackknife"), ConfigError);
}
