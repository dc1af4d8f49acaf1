#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "bootci/csv.hpp"
#include "bootci/errors.hpp"
#include "bootci/simulation.hpp"

using namespace bootci;
using Catch::Matchers::WithinAbs;

namespace {

StudyConfig small_config(unsigned threads) {
  StudyConfig c;
  c.distribution = parse_distribution("exponential");
  c.n_min = 2;
  c.n_max = 6;
  c.R = 60;
  c.B = 199;
  c.methods = {Method::student(), Method::bca(), Method::percentile(), Method::boot_t(WeightScheme::beta()),
               Method::boot_t(WeightScheme::multinomial())};
  c.threads = threads;
  return c;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bootci_test_" + name);
}

}  // namespace

TEST_CASE("nested panels are deterministic prefixes") {
  auto d = parse_distribution("t4");
  auto a = sample_nested_panel(d, 12, 30, 7);
  auto b = sample_nested_panel(d, 12, 30, 7);
  auto c = sample_nested_panel(d, 20, 30, 7);
  auto other = sample_nested_panel(d, 12, 30, 8);
  CHECK(a == b);
  CHECK(a != other);
  REQUIRE(a.size() == 30);
  for (std::size_t r = 0; r < a.size(); ++r) {
    REQUIRE(a[r].size() == 12);
    // A longer panel extends the same sequence.
    CHECK(std::equal(a[r].begin(), a[r].end(), c[r].begin()));
  }
}

TEST_CASE("bootstrap seeds differ across method, replicate and n") {
  std::set<std::uint64_t> seen;
  for (const auto& m : {Method::bca(), Method::boot_t(WeightScheme::beta()), Method::boot_t(WeightScheme::power())})
    for (std::size_t r = 0; r < 20; ++r)
      for (std::size_t n = 2; n < 8; ++n) seen.insert(bootstrap_seed(1, m, r, n));
  CHECK(seen.size() == 3 * 20 * 6);
}

TEST_CASE("results do not depend on the thread count") {
  auto one = run_study(small_config(1));
  auto three = run_study(small_config(3));
  CHECK(one == three);
  CHECK(one.cells.size() == 5 * 5);
}

TEST_CASE("result cells are sane") {
  auto res = run_study(small_config(2));
  for (const auto& c : res.cells) {
    CAPTURE(c.method, c.n);
    CHECK(c.coverage >= 0.0);
    CHECK(c.coverage <= 1.0);
    if (c.infinite_count > 0) {
      CHECK(c.rmsl == std::numeric_limits<double>::infinity());
    } else {
      CHECK(c.rmsl >= c.mean_length);
      CHECK(c.mean_length >= 0.0);
      CHECK(c.finite_mean_length == c.mean_length);
    }
    CHECK_THAT(c.scaled_rmsl * std::sqrt(double(c.n)), WithinAbs(c.rmsl, 1e-9 * std::max(1.0, c.rmsl)));
  }
  auto t = res.find("boott:multinomial", 2);
  REQUIRE(t != nullptr);
  // At n = 2 the multinomial bootstrap-t is always infinite.
  CHECK(t->infinite_count == 60);
  CHECK(res.find("boott:mammen", 2) == nullptr);
}

TEST_CASE("results CSV round-trips") {
  auto res = run_study(small_config(1));
  const auto text = format_results(res);
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  CHECK(lines.front() == kResultsHeader);
  CHECK(lines.size() == res.cells.size() + 1);
  CHECK(parse_results(lines) == res);

  const auto path = temp_path("results.csv");
  emit_results(res, path);
  CHECK(read_results(path) == res);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_results({"bad,header"}), DataError);
}

TEST_CASE("an empty method list gives a header-only file") {
  auto c = small_config(1);
  c.methods.clear();
  auto res = run_study(c);
  CHECK(res.cells.empty());
  CHECK(format_results(res) == std::string(kResultsHeader) + "\n");
}

TEST_CASE("trajectories") {
  auto c = small_config(1);
  c.n_max = 12;
  c.R = 30;
  auto res = run_study(c);
  const auto text = format_trajectories(res);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == kTrajectoryHeader);
  std::size_t refs = 0, rows = 0, flagged = 0;
  std::set<std::string> panels;
  while (std::getline(in, line)) {
    auto f = split_csv_line(line);
    REQUIRE(f.size() == 7);
    panels.insert(f[6]);
    if (f[1] == "reference") {
      ++refs;
      CHECK(f[3] == "0.94999999999999996");
      CHECK(parse_number(f[4]) == 0.0);
      continue;
    }
    ++rows;
    const std::size_t n = std::stoul(f[2]);
    CHECK((f[6] == "small" ? (n >= 2 && n <= 10) : (n >= 10 && n <= 20)));
    if (f[5] == "1") {
      ++flagged;
      CHECK(parse_number(f[4]) == std::numeric_limits<double>::infinity());
    }
  }
  CHECK(refs == 2);
  CHECK(panels == std::set<std::string>{"small", "large"});
  // n = 2..10 in the small panel and 10..12 in the large one.
  CHECK(rows == 5 * (9 + 3));
  CHECK(flagged > 0);
}

TEST_CASE("Student coverage is exact for Gaussian data") {
  StudyConfig c;
  c.distribution = parse_distribution("gaussian");
  c.n_min = 2;
  c.n_max = 20;
  c.R = 10000;
  c.methods = {Method::student()};
  auto res = run_study(c);
  REQUIRE(res.cells.size() == 19);
  // Four binomial standard errors at R = 10^4.
  for (const auto& cell : res.cells) {
    CAPTURE(cell.n);
    CHECK_THAT(cell.coverage, WithinAbs(0.95, 0.0088));
  }
}

TEST_CASE("Poisson data sometimes have fewer than three distinct values at n = 19") {
  auto panel = sample_nested_panel(parse_distribution("poisson"), 20, 10000, 20240601);
  std::size_t few = 0;
  for (const auto& row : panel) {
    std::set<double> distinct(row.begin(), row.begin() + 19);
    if (distinct.size() < 3) ++few;
  }
  CHECK(few > 0);
  CHECK(few < 500);
}

TEST_CASE("config validation") {
  auto c = small_config(1);
  c.n_min = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1);
  c.n_min = 8;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1);
  c.R = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1);
  c.alpha1 = 0.9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
