#pragma once

// Coverage and length study over nested panels of simulated data.
//
// Replicate r draws one sequence of n_max points from hash(seed, "data", r);
// its size-n dataset is the first n points, and every method sees that same
// dataset. Bootstrap streams come from hash(seed, "boot", method, r, n).
// Replicates run on worker threads but are reduced in replicate order, so
// the result does not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bootci/distributions.hpp"
#include "bootci/intervals.hpp"

namespace bootci {

struct StudyConfig {
  TestDistribution distribution{DistributionId::Gaussian};
  std::size_t n_min = 2;
  std::size_t n_max = 20;
  std::size_t R = 10000;
  std::size_t B = 2000;
  double alpha1 = 0.025;
  double alpha2 = 0.975;
  std::vector<Method> methods;
  std::uint64_t master_seed = 20240601;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
};

struct CellResult {
  std::string distribution;
  std::size_t n = 0;
  std::string method;
  double coverage = 0.0;
  ExtendedReal mean_length = 0.0;
  ExtendedReal rmsl = 0.0;
  /// rmsl / (sqrt(n) sigma).
  ExtendedReal scaled_rmsl = 0.0;
  std::size_t infinite_count = 0;
  double finite_mean_length = 0.0;
  double finite_rmsl = 0.0;
  /// Mean Winkler score over finite intervals at alpha1 and at 0.005.
  double winkler_a1 = 0.0;
  double winkler_005 = 0.0;
  double f_tilde_1 = 0.0;

  friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct StudyResult {
  std::vector<CellResult> cells;

  /// nullptr when absent.
  [[nodiscard]] const CellResult* find(const std::string& method, std::size_t n) const;
  friend bool operator==(const StudyResult&, const StudyResult&) = default;
};

/// R sequences of length n_max; row r is seeded by hash(master_seed, "data", r).
std::vector<std::vector<double>> sample_nested_panel(const TestDistribution& dist, std::size_t n_max,
                                                     std::size_t R, std::uint64_t master_seed);

/// Seed of the bootstrap stream for one (method, replicate, n).
std::uint64_t bootstrap_seed(std::uint64_t master_seed, const Method& method, std::size_t r, std::size_t n);

StudyResult run_study(const StudyConfig& config);

inline constexpr const char* kResultsHeader =
    "distribution,n,method,coverage,mean_length,rmsl,scaled_rmsl,infinite_count,"
    "finite_mean_length,finite_rmsl,winkler_a1,winkler_005,f_tilde_1";
inline constexpr const char* kTrajectoryHeader = "distribution,method,n,coverage,scaled_rmsl,is_infinite,panel";

std::string format_results(const StudyResult& result);
StudyResult parse_results(const std::vector<std::string>& lines);
void emit_results(const StudyResult& result, const std::filesystem::path& path);
StudyResult read_results(const std::filesystem::path& path);

/// Per method, (coverage, scaled_rmsl) by n in two panels, n in [2,10] ("small")
/// and [10,20] ("large"), each with one reference row at (0.95, 0).
std::string format_trajectories(const StudyResult& result);
void emit_trajectories(const StudyResult& result, const std::filesystem::path& path);

}  // namespace bootci
