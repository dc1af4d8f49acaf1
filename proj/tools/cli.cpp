#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bootci/analysis.hpp"
#include "bootci/csv.hpp"
#include "bootci/distributions.hpp"
#include "bootci/errors.hpp"
#include "bootci/evaluation.hpp"
#include "bootci/intervals.hpp"
#include "bootci/simulation.hpp"
#include "bootci/special_functions.hpp"

#ifndef BOOTCI_VERSION
#define BOOTCI_VERSION "dev"
#endif

namespace bootci::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct CiOptions {
  std::string data;
  std::string method = "boott:beta";
  double level = 0.95;
  std::size_t boot = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

struct SimulateOptions {
  std::string dist = "exponential";
  std::size_t n_min = 2, n_max = 20, reps = 10000, boot = 2000;
  double level = 0.95;
  std::string methods = "comparison";
  std::uint64_t seed = 20240601;
  std::string out;
  std::string trajectories;
  unsigned threads = 0;
};

struct ScoreOptions {
  std::string file;
  double mu = 0.0;
  double alpha1 = 0.025;
  double sigma = 1.0;
  std::size_t n = 1;
  double beta = 1.0;
  double lambda = 1.0;
  std::string out;
};

struct ExactOptions {
  bool n2_widths = false;
  std::string schemes = "all";
  double level = 0.95;
  std::size_t draws = 10'000'000;
  std::uint64_t seed = 1;
  std::string tstar;
  std::string out;
};

struct AnalyzeOptions {
  bool thresholds = false;
  double alpha1 = 0.025;
  std::vector<double> binom;
  std::size_t sigma_zero = 0;
  std::size_t fisher_hall = 0;
  std::string second_order;
  std::size_t n = 20;
  std::size_t draws = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<double> two_value;
  std::string hall;
  bool moments = false;
};

struct Options {
  std::string config;
  CiOptions ci;
  SimulateOptions sim;
  ScoreOptions score;
  ExactOptions exact;
  AnalyzeOptions analyze;
};

void add_config_option(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "flat key=value file; flags given on the command line win");
}

void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto* ci = app.add_subcommand("ci", "confidence interval for the mean of a data file");
  ci->option_defaults()->always_capture_default();
  ci->add_option("data", o.ci.data, "text file, one value per line")->required();
  ci->add_option("--method", o.ci.method, "student, percentile, bca or boott:<scheme>");
  ci->add_option("--level", o.ci.level, "two-sided confidence level");
  ci->add_option("--boot", o.ci.boot, "bootstrap resamples B");
  ci->add_option("--seed", o.ci.seed, "master seed");
  ci->add_option("--out", o.ci.out, "also write the interval as CSV");
  add_config_option(ci, o);

  auto* sim = app.add_subcommand("simulate", "coverage and length study");
  sim->option_defaults()->always_capture_default();
  sim->add_option("--dist", o.sim.dist, "gaussian, exponential, t4, uniform, lognormal, poisson, geometric");
  sim->add_option("--n-min", o.sim.n_min);
  sim->add_option("--n-max", o.sim.n_max);
  sim->add_option("--reps", o.sim.reps, "replicate datasets R");
  sim->add_option("--boot", o.sim.boot, "bootstrap resamples B");
  sim->add_option("--alpha,--level", o.sim.level, "two-sided confidence level");
  sim->add_option("--methods", o.sim.methods, "comma list, 'comparison' (the 11-method set) or 'all'");
  sim->add_option("--seed", o.sim.seed, "master seed");
  sim->add_option("--out", o.sim.out, "results CSV")->required();
  sim->add_option("--trajectories", o.sim.trajectories, "trajectory CSV");
  sim->add_option("--threads", o.sim.threads, "worker cap; 0 = all cores");
  add_config_option(sim, o);

  auto* score = app.add_subcommand("score", "score intervals (CSV rows L,U) against a known mean");
  score->option_defaults()->always_capture_default();
  score->add_option("--file", o.score.file, "CSV with columns L,U")->required();
  score->add_option("--mu", o.score.mu, "true mean")->required();
  score->add_option("--alpha1", o.score.alpha1, "Winkler tail level");
  score->add_option("--sigma", o.score.sigma, "true standard deviation");
  score->add_option("--n", o.score.n, "sample size behind each interval");
  score->add_option("--beta", o.score.beta, "F-tilde exponent");
  score->add_option("--lambda", o.score.lambda, "length weight in the risks");
  score->add_option("--out", o.score.out, "per-interval CSV instead of stdout");
  add_config_option(score, o);

  auto* exact = app.add_subcommand("exact", "n = 2 width factors and exact multinomial t* laws");
  exact->option_defaults()->always_capture_default();
  exact->add_flag("--n2-widths", o.exact.n2_widths, "width / |x1 - x2| for n = 2");
  exact->add_option("--schemes", o.exact.schemes, "comma list of schemes or 'all'");
  exact->add_option("--level", o.exact.level);
  exact->add_option("--draws", o.exact.draws, "Monte Carlo weight pairs per scheme");
  exact->add_option("--seed", o.exact.seed);
  exact->add_option("--tstar", o.exact.tstar, "data file; prints the exact multinomial t* law");
  exact->add_option("--out", o.exact.out, "write the table to this CSV");
  add_config_option(exact, o);

  auto* an = app.add_subcommand("analyze", "thresholds, exact probabilities and moment checks");
  an->option_defaults()->always_capture_default();
  an->add_flag("--thresholds", o.analyze.thresholds, "smallest n with finite-length intervals");
  an->add_option("--alpha1", o.analyze.alpha1);
  an->add_option("--binom-tail", o.analyze.binom, "TRIALS P K")->expected(3);
  an->add_option("--sigma-zero", o.analyze.sigma_zero, "Pr(sigma* = 0) at n");
  an->add_option("--fisher-hall", o.analyze.fisher_hall, "largest-count probabilities at n");
  an->add_option("--second-order", o.analyze.second_order, "scheme for the W moment check");
  an->add_option("--n", o.analyze.n, "n for --second-order");
  an->add_option("--draws", o.analyze.draws, "draws for --second-order");
  an->add_option("--seed", o.analyze.seed);
  an->add_option("--two-value", o.analyze.two_value, "N1 N A: bound on E(t*^2) for two-value data")->expected(3);
  an->add_option("--hall", o.analyze.hall, "distribution name or 'gamma,kappa,n'");
  an->add_flag("--moments", o.analyze.moments, "analytic moments of the test distributions");
  add_config_option(an, o);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

// Appends config-file values for options the command line left unset.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
  CLI::App* sub = nullptr;
  for (auto* s : app.get_subcommands()) sub = s;
  if (!sub) return args;
  auto* cfg = sub->get_option_no_throw("--config");
  if (!cfg || cfg->count() == 0) return args;
  const auto values = read_config_file(cfg->as<std::string>());
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : values) {
    auto* opt = sub->get_option_no_throw("--" + key);
    if (!opt || key == "config") throw ConfigError("config key '" + key + "' is not an option of " + sub->get_name());
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      if (truthy(value)) merged.push_back("--" + key);
      continue;
    }
    merged.push_back("--" + key);
    std::stringstream ss(value);
    std::string tok;
    while (ss >> tok) merged.push_back(tok);
  }
  return merged;
}

std::string manifest_text(const CLI::App& sub, double wall_seconds, const std::vector<std::string>& outputs) {
  std::ostringstream m;
  m << "command=" << sub.get_name() << '\n';
  m << "version=" << BOOTCI_VERSION << '\n';
  for (const auto* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
    }
    m << name << '=' << value << '\n';
  }
  for (const auto& o : outputs) m << "output=" << o << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", wall_seconds);
  m << "wall_time_s=" << buf << '\n';
  return m.str();
}

void write_manifest(const CLI::App& sub, Clock::time_point start, const std::string& out_path,
                    const std::vector<std::string>& outputs, std::ostream& out) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const auto text = manifest_text(sub, secs, outputs);
  write_file_atomic(out_path + ".manifest", text);
  out << text;
}

std::vector<Method> resolve_methods(const std::string& spec) {
  if (spec == "comparison") return comparison_methods();
  if (spec == "all") {
    auto m = comparison_methods();
    m.push_back(Method::percentile());
    return m;
  }
  std::vector<Method> methods;
  for (const auto& name : split(spec, ',')) methods.push_back(parse_method(name));
  if (methods.empty()) throw ConfigError("--methods is empty");
  return methods;
}

std::vector<WeightScheme> resolve_schemes(const std::string& spec) {
  if (spec == "all") return all_named_schemes();
  std::vector<WeightScheme> schemes;
  for (const auto& name : split(spec, ',')) schemes.push_back(parse_scheme(name));
  return schemes;
}

int cmd_ci(const CiOptions& o, const CLI::App& sub, std::ostream& out) {
  const auto start = Clock::now();
  const Method method = parse_method(o.method);
  const IntervalSpec spec = IntervalSpec::two_sided(o.level, o.boot, method.scheme);
  spec.validate();
  const auto x = read_data_file(o.data);
  RandomStream rng(derive_seed(o.seed, "ci", {fnv1a64(method.name())}));

  ConfidenceInterval ci;
  std::optional<BcaDiagnostics> diag;
  if (method.kind == MethodKind::Bca) {
    auto r = bca_interval(x, spec, rng);
    ci = r.ci;
    diag = r.diagnostics;
  } else {
    ci = compute_interval(method, x, spec, rng);
  }
  out << "method=" << method.name() << '\n'
      << "n=" << x.size() << '\n'
      << "L=" << format_number(ci.L) << '\n'
      << "U=" << format_number(ci.U) << '\n'
      << "length=" << format_number(ci.length()) << '\n';
  if (method.resamples())
    out << "lower_infinite=" << std::isinf(ci.L) << '\n' << "upper_infinite=" << std::isinf(ci.U) << '\n';
  if (diag) {
    out << "z0=" << format_number(diag->z0) << '\n'
        << "a=" << format_number(diag->a) << '\n'
        << "alpha_tilde_1=" << format_number(diag->alpha_tilde_1) << '\n'
        << "alpha_tilde_2=" << format_number(diag->alpha_tilde_2) << '\n';
  }
  if (!o.out.empty()) {
    std::string csv = "method,L,U,length\n";
    csv += join_csv({method.name(), format_number(ci.L), format_number(ci.U), format_number(ci.length())}) + "\n";
    write_file_atomic(o.out, csv);
    write_manifest(sub, start, o.out, {o.out}, out);
  }
  return kOk;
}

int cmd_simulate(const SimulateOptions& o, const CLI::App& sub, std::ostream& out) {
  const auto start = Clock::now();
  StudyConfig cfg;
  cfg.distribution = parse_distribution(o.dist);
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.R = o.reps;
  cfg.B = o.boot;
  const auto spec = IntervalSpec::two_sided(o.level);
  cfg.alpha1 = spec.alpha1;
  cfg.alpha2 = spec.alpha2;
  cfg.methods = resolve_methods(o.methods);
  cfg.master_seed = o.seed;
  cfg.threads = o.threads;
  cfg.validate();

  const auto result = run_study(cfg);
  emit_results(result, o.out);
  std::vector<std::string> outputs{o.out};
  if (!o.trajectories.empty()) {
    emit_trajectories(result, o.trajectories);
    outputs.push_back(o.trajectories);
  }
  write_manifest(sub, start, o.out, outputs, out);
  return kOk;
}

int cmd_score(const ScoreOptions& o, std::ostream& out) {
  if (!(o.alpha1 > 0.0 && o.alpha1 < 0.5)) throw ConfigError("--alpha1 must lie in (0, 1/2)");
  if (!(o.sigma > 0.0)) throw ConfigError("--sigma must be positive");
  if (o.n < 1) throw ConfigError("--n must be at least 1");
  const auto lines = read_lines(o.file);
  std::vector<ConfidenceInterval> cis;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() < 2) throw DataError(o.file + " line " + std::to_string(i + 1) + ": need L,U");
    double L, U;
    try {
      L = parse_number(f[0]);
      U = parse_number(f[1]);
    } catch (const DataError&) {
      if (cis.empty() && i == 0) continue;  // header
      throw DataError(o.file + " line " + std::to_string(i + 1) + ": non-numeric L,U");
    }
    if (!(L <= U)) throw DataError(o.file + " line " + std::to_string(i + 1) + ": L > U");
    ConfidenceInterval ci;
    ci.L = L;
    ci.U = U;
    cis.push_back(ci);
  }
  if (cis.empty()) throw DataError(o.file + ": no intervals");

  std::string rows = "L,U,length,covered,winkler\n";
  for (const auto& ci : cis)
    rows += join_csv({format_number(ci.L), format_number(ci.U), format_number(ci.length()),
                      ci.covers(o.mu) ? "1" : "0", format_number(winkler_ci_score(ci.L, ci.U, o.mu, o.alpha1))}) +
            "\n";
  if (o.out.empty())
    out << rows << '\n';
  else
    write_file_atomic(o.out, rows);

  const auto s = summarize_intervals(cis, o.mu);
  const auto w = mean_winkler(cis, o.mu, o.alpha1);
  out << "count=" << s.count << '\n'
      << "coverage=" << format_number(s.coverage) << '\n'
      << "mean_length=" << format_number(s.mean_length) << '\n'
      << "rmsl=" << format_number(s.rmsl) << '\n'
      << "infinite_count=" << s.infinite_count << '\n'
      << "winkler_mean_finite=" << format_number(w.mean_finite) << '\n'
      << "f_tilde=" << format_number(f_tilde(s.coverage, s.mean_sq_length, o.n, o.sigma, o.beta)) << '\n';
  for (const char* v : {"plain", "abs95", "min95", "scaled_loss"})
    out << "risk_" << v << '=' << format_number(quasi_risk(parse_risk_variant(v), o.lambda, s, o.sigma, o.n)) << '\n';
  return kOk;
}

int cmd_exact(const ExactOptions& o, const CLI::App& sub, std::ostream& out) {
  const auto start = Clock::now();
  if (!o.n2_widths && o.tstar.empty()) throw ConfigError("exact: give --n2-widths and/or --tstar FILE");
  if (!(o.level > 0.0 && o.level < 1.0)) throw ConfigError("--level must lie in (0,1)");
  std::string table;
  if (o.n2_widths) {
    const auto schemes = resolve_schemes(o.schemes);
    if (o.draws < 1) throw ConfigError("--draws must be at least 1");
    table += "method,width_factor\n";
    for (const auto& s : schemes) {
      RandomStream rng(derive_seed(o.seed, "n2", {fnv1a64(s.name())}));
      table += join_csv({"boott:" + s.name(), format_number(exact_n2_width_factor(s, o.level, o.draws, rng))}) + "\n";
    }
    const double t = t_quantile(1, 0.5 + 0.5 * o.level);
    table += join_csv({"student", format_number(t)}) + "\n";
    const std::vector<double> two{0.0, 1.0};
    RandomStream rng(derive_seed(o.seed, "n2", {fnv1a64("bca")}));
    const auto bca = bca_interval(two, IntervalSpec::two_sided(o.level, std::min<std::size_t>(o.draws, 200000)), rng);
    table += join_csv({"bca", format_number(bca.ci.length())}) + "\n";
  }
  if (!o.tstar.empty()) {
    const auto x = read_data_file(o.tstar);
    std::size_t visited = 0;
    const auto law = exact_multinomial_t_distribution(x, &visited);
    if (!table.empty()) table += "\n";
    table += "value,probability\n";
    for (const auto& [v, p] : law.atoms) table += join_csv({format_number(v), format_number(p)}) + "\n";
  }
  out << table;
  if (!o.out.empty()) {
    write_file_atomic(o.out, table);
    write_manifest(sub, start, o.out, {o.out}, out);
  }
  return kOk;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  bool any = false;
  if (o.thresholds) {
    any = true;
    out << "scheme,min_n\n";
    for (const auto& s : {WeightScheme::multinomial(), WeightScheme::double_or_nothing(), WeightScheme::poisson()})
      out << s.name() << ',' << finite_length_min_n(s, o.alpha1) << '\n';
  }
  if (!o.binom.empty()) {
    any = true;
    const auto trials = static_cast<std::size_t>(o.binom[0]);
    const auto k = static_cast<std::size_t>(o.binom[2]);
    out << "binom_tail=" << format_number(binom_tail(trials, o.binom[1], k)) << '\n';
  }
  if (o.sigma_zero > 0) {
    any = true;
    out << "prob_sigma_star_zero=" << format_number(prob_sigma_star_zero(o.sigma_zero)) << '\n';
  }
  if (o.fisher_hall > 0) {
    any = true;
    const auto p = fisher_hall_probs(o.fisher_hall);
    auto show = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("na"); };
    out << "p_top1=" << show(p.p_top1) << '\n'
        << "p_top2_split=" << show(p.p_top2_split) << '\n'
        << "p_top2_pair=" << show(p.p_top2_pair) << '\n';
  }
  if (!o.second_order.empty()) {
    any = true;
    const auto scheme = parse_scheme(o.second_order);
    RandomStream rng(derive_seed(o.seed, "second-order", {fnv1a64(scheme.name()), o.n}));
    const auto c = second_order_check(scheme, o.n, o.draws, rng);
    out << "e_w2_hat=" << format_number(c.e_w2_hat) << '\n'
        << "e_w2_pred=" << format_number(c.e_w2_pred) << '\n'
        << "se_w2=" << format_number(c.se_w2) << '\n'
        << "e_w3_hat=" << format_number(c.e_w3_hat) << '\n'
        << "e_w3_pred=" << format_number(c.e_w3_pred) << '\n'
        << "se_w3=" << format_number(c.se_w3) << '\n';
  }
  if (!o.two_value.empty()) {
    any = true;
    const auto n1 = static_cast<std::size_t>(o.two_value[0]);
    const auto n = static_cast<std::size_t>(o.two_value[1]);
    out << "two_value_bound=" << format_number(two_value_finiteness_bound(n1, n, o.two_value[2])) << '\n';
  }
  if (!o.hall.empty()) {
    any = true;
    double gamma, kappa;
    std::size_t n;
    const auto parts = split(o.hall, ',');
    if (parts.size() == 3) {
      gamma = parse_number(parts[0]);
      kappa = parse_number(parts[1]);
      n = static_cast<std::size_t>(parse_number(parts[2]));
    } else {
      const auto m = parse_distribution(o.hall).moments();
      gamma = m.skewness;
      kappa = m.excess_kurtosis;
      n = o.n;
    }
    out << "method,coverage_error\n";
    for (const char* name : {"normal", "student", "percentile", "boot_t", "bca"})
      out << name << ',' << format_number(hall_coverage_error(parse_hall_method(name), gamma, kappa, n)) << '\n';
  }
  if (o.moments) {
    any = true;
    out << "distribution,mean,variance,skewness,excess_kurtosis\n";
    for (const auto& d : all_distributions()) {
      const auto m = d.moments();
      out << join_csv({d.name(), format_number(m.mean), format_number(m.variance), format_number(m.skewness),
                       format_number(m.excess_kurtosis)})
          << '\n';
    }
  }
  if (!any) throw ConfigError("analyze: nothing requested (see --help)");
  return kOk;
}

// Throws CLI::ParseError on bad arguments.
void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::map<std::string, std::string> values;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

std::vector<double> read_data_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read data file '" + path.string() + "'");
  std::vector<double> x;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    double v;
    try {
      v = parse_number(line);
    } catch (const DataError&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + line + "'");
    }
    if (!std::isfinite(v)) throw DataError(path.string() + ":" + std::to_string(lineno) + ": value must be finite");
    x.push_back(v);
  }
  if (x.empty()) throw DataError(path.string() + ": no data values");
  return x;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Bootstrap confidence intervals for a mean", "bootci"};
  build_app(app, o);
  try {
    parse_into(app, args);
    auto merged = merge_config(args, app);
    if (merged.size() != args.size()) {
      o = Options{};
      app.clear();
      parse_into(app, merged);
    }
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "ci") return cmd_ci(o.ci, *sub, out);
    if (name == "simulate") return cmd_simulate(o.sim, *sub, out);
    if (name == "score") return cmd_score(o.score, out);
    if (name == "exact") return cmd_exact(o.exact, *sub, out);
    if (name == "analyze") return cmd_analyze(o.analyze, out);
    throw InternalError("unhandled subcommand " + name);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::domain_error& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace bootci::cli
