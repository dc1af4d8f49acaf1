#include "bootci/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "bootci/csv.hpp"
#include "bootci/errors.hpp"
#include "bootci/evaluation.hpp"

namespace bootci {

namespace {

struct Panel {
  const char* name;
  std::size_t lo, hi;
};
constexpr Panel kPanels[] = {{"small", 2, 10}, {"large", 10, 20}};

unsigned worker_count(unsigned requested, std::size_t R) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, R));
}

}  // namespace

void StudyConfig::validate() const {
  if (n_min < 1 || n_min > n_max) throw ConfigError("need 1 <= n_min <= n_max");
  if (R < 1) throw ConfigError("reps must be at least 1");
  if (B < 1) throw ConfigError("B must be at least 1");
  if (!(alpha1 > 0.0 && alpha1 < 0.5 && alpha1 < alpha2 && alpha2 < 1.0))
    throw ConfigError("need 0 < alpha1 < 1/2 and alpha1 < alpha2 < 1");
  for (const auto& m : methods)
    if (m.kind == MethodKind::BootT && m.scheme.id == SchemeId::ScaledBeta)
      (void)scaled_beta_params(m.scheme.a);
}

const CellResult* StudyResult::find(const std::string& method, std::size_t n) const {
  for (const auto& c : cells)
    if (c.n == n && c.method == method) return &c;
  return nullptr;
}

std::vector<std::vector<double>> sample_nested_panel(const TestDistribution& dist, std::size_t n_max,
                                                     std::size_t R, std::uint64_t master_seed) {
  if (R < 1 || n_max < 1) throw std::domain_error("sample_nested_panel: need R >= 1 and n_max >= 1");
  std::vector<std::vector<double>> panel(R, std::vector<double>(n_max));
  for (std::size_t r = 0; r < R; ++r) {
    RandomStream rng(derive_seed(master_seed, "data", {r}));
    for (double& x : panel[r]) x = dist.sample(rng);
  }
  return panel;
}

std::uint64_t bootstrap_seed(std::uint64_t master_seed, const Method& method, std::size_t r, std::size_t n) {
  return derive_seed(master_seed, "boot", {fnv1a64(method.name()), r, n});
}

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  const auto& dist = config.distribution;
  const std::size_t n_count = config.n_max - config.n_min + 1;
  const std::size_t M = config.methods.size();
  const std::size_t R = config.R;
  const auto panel = sample_nested_panel(dist, config.n_max, R, config.master_seed);

  const IntervalSpec spec{config.alpha1, config.alpha2, config.B, WeightScheme::multinomial()};
  std::vector<std::uint64_t> method_ids(M);
  for (std::size_t m = 0; m < M; ++m) method_ids[m] = fnv1a64(config.methods[m].name());

  // Endpoints per (n, method, replicate).
  auto slot = [&](std::size_t ni, std::size_t m, std::size_t r) { return (ni * M + m) * R + r; };
  std::vector<double> lower(n_count * M * R), upper(n_count * M * R);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    IntervalWorkspace ws;
    RandomStream rng;
    try {
      for (std::size_t r = next++; r < R; r = next++) {
        for (std::size_t ni = 0; ni < n_count; ++ni) {
          const std::size_t n = config.n_min + ni;
          const std::span<const double> x(panel[r].data(), n);
          for (std::size_t m = 0; m < M; ++m) {
            rng.reseed(derive_seed(config.master_seed, "boot", {method_ids[m], r, n}));
            const auto ci = compute_interval(config.methods[m], x, spec, rng, &ws);
            lower[slot(ni, m, r)] = ci.L;
            upper[slot(ni, m, r)] = ci.U;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = R;
    }
  };
  const unsigned T = worker_count(config.threads, R);
  if (T <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  StudyResult result;
  const double mu = dist.mean();
  const double sigma = dist.sigma();
  std::vector<ConfidenceInterval> cis(R);
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    const std::size_t n = config.n_min + ni;
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t r = 0; r < R; ++r) {
        cis[r].L = lower[slot(ni, m, r)];
        cis[r].U = upper[slot(ni, m, r)];
      }
      const auto s = summarize_intervals(cis, mu);
      CellResult c;
      c.distribution = dist.name();
      c.n = n;
      c.method = config.methods[m].name();
      c.coverage = s.coverage;
      c.mean_length = s.mean_length;
      c.rmsl = s.rmsl;
      c.scaled_rmsl = s.rmsl / (std::sqrt(static_cast<double>(n)) * sigma);
      c.infinite_count = s.infinite_count;
      c.finite_mean_length = s.finite_mean_length;
      c.finite_rmsl = s.finite_rmsl;
      c.winkler_a1 = mean_winkler(cis, mu, config.alpha1).mean_finite;
      c.winkler_005 = mean_winkler(cis, mu, 0.005).mean_finite;
      c.f_tilde_1 = f_tilde(s.coverage, s.mean_sq_length, n, sigma, 1.0);
      result.cells.push_back(std::move(c));
    }
  }
  return result;
}

std::string format_results(const StudyResult& result) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& c : result.cells) {
    out += join_csv({c.distribution, std::to_string(c.n), c.method, format_number(c.coverage),
                     format_number(c.mean_length), format_number(c.rmsl), format_number(c.scaled_rmsl),
                     std::to_string(c.infinite_count), format_number(c.finite_mean_length),
                     format_number(c.finite_rmsl), format_number(c.winkler_a1), format_number(c.winkler_005),
                     format_number(c.f_tilde_1)});
    out += '\n';
  }
  return out;
}

StudyResult parse_results(const std::vector<std::string>& lines) {
  if (lines.empty() || lines.front() != kResultsHeader) throw DataError("results file: missing or wrong header");
  StudyResult result;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 13) throw DataError("results file line " + std::to_string(i + 1) + ": expected 13 fields");
    CellResult c;
    c.distribution = f[0];
    c.n = static_cast<std::size_t>(parse_number(f[1]));
    c.method = f[2];
    c.coverage = parse_number(f[3]);
    c.mean_length = parse_number(f[4]);
    c.rmsl = parse_number(f[5]);
    c.scaled_rmsl = parse_number(f[6]);
    c.infinite_count = static_cast<std::size_t>(parse_number(f[7]));
    c.finite_mean_length = parse_number(f[8]);
    c.finite_rmsl = parse_number(f[9]);
    c.winkler_a1 = parse_number(f[10]);
    c.winkler_005 = parse_number(f[11]);
    c.f_tilde_1 = parse_number(f[12]);
    result.cells.push_back(std::move(c));
  }
  return result;
}

void emit_results(const StudyResult& result, const std::filesystem::path& path) {
  write_file_atomic(path, format_results(result));
}

StudyResult read_results(const std::filesystem::path& path) { return parse_results(read_lines(path)); }

std::string format_trajectories(const StudyResult& result) {
  std::vector<std::string> dists, methods;
  for (const auto& c : result.cells) {
    if (std::find(dists.begin(), dists.end(), c.distribution) == dists.end()) dists.push_back(c.distribution);
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
  }
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const auto& d : dists) {
    for (const auto& p : kPanels) {
      for (const auto& m : methods) {
        std::vector<const CellResult*> rows;
        for (const auto& c : result.cells)
          if (c.distribution == d && c.method == m && c.n >= p.lo && c.n <= p.hi) rows.push_back(&c);
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->n < b->n; });
        for (const auto* c : rows) {
          out += join_csv({d, m, std::to_string(c->n), format_number(c->coverage), format_number(c->scaled_rmsl),
                           std::isinf(c->scaled_rmsl) ? "1" : "0", p.name});
          out += '\n';
        }
      }
      out += join_csv({d, "reference", "", format_number(0.95), format_number(0.0), "0", p.name});
      out += '\n';
    }
  }
  return out;
}

void emit_trajectories(const StudyResult& result, const std::filesystem::path& path) {
  write_file_atomic(path, format_trajectories(result));
}

}  // namespace bootci
