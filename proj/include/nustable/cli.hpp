#ifndef NUSTABLE_CLI_HPP
#define NUSTABLE_CLI_HPP

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nustable/distributions.hpp"
#include "nustable/families.hpp"
#include "nustable/harness.hpp"
#include "nustable/series.hpp"
#include "nustable/statistics.hpp"
#include "nustable/tolerances.hpp"

namespace nustable::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitUsage = 2;

/// Every flag of every subcommand; unset optionals fall back to
/// per-command defaults, which are then written into the output header.
struct CliConfig {
  std::string subcommand;
  std::string experiment;  // verify
  std::string dist = "sech";  // sample
  std::string family = "chebyshev";
  std::optional<int> n;
  std::optional<std::string> p;
  int m = 1;
  double alpha = 2.0;
  double a = 1.0;
  std::vector<double> x;
  std::optional<std::size_t> K;
  std::optional<std::size_t> N;
  int n_min = 2;
  int n_max = 50;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string format = "csv";
  std::string out;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// "0.25", "1/9" or "1e-3".
inline double parse_probability(const std::string& text) {
  const auto slash = text.find('/');
  auto number = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("cannot parse number '" + s + "'");
    return v;
  };
  if (slash == std::string::npos) return number(text);
  const double den = number(text.substr(slash + 1));
  if (den == 0.0) throw UsageError("zero denominator in '" + text + "'");
  return number(text.substr(0, slash)) / den;
}

inline NuFamily family_of(const CliConfig& c) {
  const auto kind = parse_family_kind(c.family);
  if (!kind) throw UsageError("unknown family '" + c.family + "'");
  if (c.m < 1) throw UsageError("--m must be >= 1");
  return NuFamily(*kind, c.m);
}

/// Parameter p from --p, or from --n as 1/n (deterministic) or 1/n^2
/// (Chebyshev kinds).
inline std::optional<double> parameter_of(const NuFamily& fam, const CliConfig& c) {
  if (c.p && c.n) throw UsageError("give either --n or --p, not both");
  if (c.p) {
    const double p = parse_probability(*c.p);
    if (!fam.admissible(p)) throw UsageError("p=" + *c.p + " is not admissible for " + fam.name());
    return p;
  }
  if (c.n) {
    if (!fam.lattice_parameter()) throw UsageError("--n only applies to deterministic and Chebyshev families");
    if (*c.n < 1) throw UsageError("--n must be >= 1");
    return fam.parameter_for_index(*c.n);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Output.

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Comment lines carrying the resolved configuration, then data.
class Table {
public:
  void config(const std::string& key, const Json& value) { config_[key] = value; }
  void columns(std::vector<std::string> names) { columns_ = std::move(names); }
  void row(std::vector<Json> values) { rows_.push_back(std::move(values)); }
  void note(const std::string& key, const Json& value) { notes_[key] = value; }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      Json j;
      j["config"] = config_;
      j["columns"] = columns_;
      j["rows"] = rows_;
      if (!notes_.empty()) j["checks"] = notes_;
      os << j.dump(2) << "\n";
      return;
    }
    for (const auto& [k, v] : config_.items()) os << "# " << k << "=" << scalar(v) << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << scalar(r[i]);
      os << "\n";
    }
    for (const auto& [k, v] : notes_.items()) os << "# " << k << "=" << scalar(v) << "\n";
  }

private:
  static std::string scalar(const Json& v) {
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  Json config_ = Json::object();
  Json notes_ = Json::object();
  std::vector<std::string> columns_;
  std::vector<std::vector<Json>> rows_;
};

inline void common_config(Table& t, const CliConfig& c) {
  t.config("subcommand", c.subcommand);
  t.config("format", c.format);
  t.config("seed", c.seed);
  t.config("workers", c.workers);
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns an exit code and writes to `os`.

inline int cmd_coeffs(const CliConfig& c, std::ostream& os) {
  const NuFamily fam = family_of(c);
  std::optional<double> p = parameter_of(fam, c);
  if (!p) {
    if (fam.lattice_parameter()) throw UsageError("coeffs needs --n or --p");
    throw UsageError("coeffs needs --p for " + fam.name());
  }
  const Pmf pmf = expand_pgf(fam, *p, c.K);
  const PmfCheck chk = check_pmf(pmf);
  Table t;
  common_config(t, c);
  t.config("family", fam.name());
  if (fam.lattice_parameter()) t.config("n", *fam.index_of(*p));
  t.config("p", *p);
  t.config("K", pmf.order());
  t.config("tail_bound", pmf.tail_bound.value_or(pmf.tail_mass));
  t.config("table_sum", chk.table_sum);
  t.config("sum_with_tail_bound", chk.mass_with_bound);
  t.config("mean_relative_error", chk.mean_relative_error);
  t.columns({"k", "p_k", "sum"});
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
    acc += pmf.probs[i];
    if (pmf.probs[i] != 0.0) t.row({pmf.offset + i, pmf.probs[i], acc});
  }
  t.write(os, c.format);
  return chk.nonnegative && chk.normalized && chk.mean_ok ? kExitPass : kExitToleranceFailure;
}

inline int cmd_figure1(const CliConfig& c, std::ostream& os) {
  if (c.n_min >= c.n_max) throw UsageError("figure1 needs n_min < n_max");
  Theorem41Options o;
  o.x = c.x.empty() ? 1.0 : c.x.front();
  o.n_min = c.n_min;
  o.n_max = c.n_max;
  o.mc_draws = c.N.value_or(0);
  o.seed = c.seed;
  o.workers = c.workers;
  const ExperimentReport r = run_theorem41(o);
  Table t;
  common_config(t, c);
  t.config("x", o.x);
  t.config("n_min", o.n_min);
  t.config("n_max", o.n_max);
  t.config("mc_draws", o.mc_draws);
  t.config("A", r.metric("A"));
  t.columns(r.table_header);
  for (const auto& row : r.table_rows) t.row({static_cast<int>(row[0]), row[1], row[2]});
  for (const auto& ch : r.checks) t.note(ch.name, ch.value);
  t.note("verdict", r.passed() ? "pass" : "fail");
  t.write(os, c.format);
  return r.passed() ? kExitPass : kExitToleranceFailure;
}

inline int cmd_xi(const CliConfig& c, std::ostream& os) {
  if (c.m < 1 || c.m > kMaxXiM) throw UsageError("--m must lie in [1, 8] for xi");
  const std::vector<double> xs = c.x.empty() ? std::vector<double>{0.5, 1.0, 2.0} : c.x;
  for (double x : xs)
    if (!(x > 0.0)) throw UsageError("xi needs positive --x values");
  const XiDist xi(c.m);
  const std::size_t N = c.N.value_or(0);
  Table t;
  common_config(t, c);
  t.config("m", c.m);
  t.config("N", N);
  t.config("stehfest_order", kDefaultStehfestOrder);
  t.config("kl_terms", xi.kl_terms());
  t.columns({"x", "A", "method"});
  std::vector<double> inv;
  for (double x : xs) {
    inv.push_back(xi.cdf(x));
    t.row({x, inv.back(), "inversion"});
  }
  int code = kExitPass;
  if (N > 0) {
    const EmpiricalSample s(parallel_draws(N, c.seed, c.workers, [&](RngStream& g) { return xi.sample(g); }));
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double mc = s.ecdf(xs[i]);
      worst = std::max(worst, std::abs(mc - inv[i]));
      t.row({xs[i], mc, "monte-carlo"});
    }
    // 3 sigma of a binomial proportion at its worst case p = 1/2.
    const double band = tol::kSigmas * 0.5 / std::sqrt(static_cast<double>(N));
    t.note("max_inversion_vs_monte_carlo", worst);
    t.note("band", band);
    if (!(worst <= band)) code = kExitToleranceFailure;
  }
  t.write(os, c.format);
  return code;
}

inline int cmd_sample(const CliConfig& c, std::ostream& os) {
  const std::size_t N = c.N.value_or(1000);
  Table t;
  common_config(t, c);
  t.config("dist", c.dist);
  t.config("N", N);
  std::function<double(RngStream&)> draw;
  std::function<double(double)> cdf;
  const std::string& d = c.dist;
  if (!(c.a > 0.0)) throw UsageError("--a must be positive");
  if (d == "sech") {
    const SechDist s(c.a);
    t.config("a", c.a);
    draw = [s](RngStream& g) { return sech_sample(s, g); };
    cdf = [s](double x) { return sech_cdf(s, x); };
  } else if (d == "laplace") {
    const LaplaceDist l(c.a);
    t.config("a", c.a);
    draw = [l](RngStream& g) { return laplace_sample(l, g); };
    cdf = [l](double x) { return laplace_cdf(l, x); };
  } else if (d == "xi") {
    if (c.m < 1 || c.m > kMaxXiM) throw UsageError("--m must lie in [1, 8] for xi");
    const XiDist xi(c.m);
    t.config("m", c.m);
    draw = [xi](RngStream& g) { return xi.sample(g); };
    cdf = [xi](double x) { return xi.tabulated_cdf(x); };
  } else if (d == "geometric-analogue") {
    draw = [](RngStream& g) { return geometric_analogue_sample(g); };
    cdf = geometric_analogue_cdf;
  } else if (d == "stable") {
    if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw UsageError("--alpha must lie in (0, 2]");
    t.config("alpha", c.alpha);
    t.config("a", c.a);
    const double alpha = c.alpha, scale = c.a;
    draw = [alpha, scale](RngStream& g) { return stable_sample(alpha, scale, g); };
    if (alpha == 2.0) cdf = [scale](double x) { return normal_cdf(x / std::sqrt(2.0 * scale)); };
    if (alpha == 1.0) cdf = [scale](double x) { return 0.5 + std::atan(x / scale) / std::numbers::pi; };
  } else if (d == "nu") {
    const NuFamily fam = family_of(c);
    const auto p = parameter_of(fam, c);
    if (!p) throw UsageError("sample nu needs --n or --p");
    t.config("family", fam.name());
    t.config("p", *p);
    const auto sampler = nu_sampler(fam, *p);
    draw = [sampler](RngStream& g) { return static_cast<double>((*sampler)(g)); };
  } else if (d == "nu-normal" || d == "nu-stable") {
    const NuFamily fam = family_of(c);
    const MixingLaw law(fam);
    const bool normal = d == "nu-normal";
    if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw UsageError("--alpha must lie in (0, 2]");
    t.config("family", fam.name());
    t.config("a", c.a);
    if (!normal) t.config("alpha", c.alpha);
    const double alpha = normal ? 2.0 : c.alpha, scale = c.a;
    draw = [law, alpha, scale](RngStream& g) { return nu_stable_sample(law, alpha, scale, g); };
    if (alpha == 2.0 && fam.kind == FamilyKind::chebyshev) {
      const SechDist s(std::sqrt(2.0 * scale));
      cdf = [s](double x) { return sech_cdf(s, x); };
    } else if (alpha == 2.0 && fam.kind == FamilyKind::geometric) {
      const LaplaceDist l(scale);
      cdf = [l](double x) { return laplace_cdf(l, x); };
    }
  } else {
    throw UsageError("unknown distribution '" + d + "'");
  }
  const auto values = parallel_draws(N, c.seed, c.workers, draw);
  t.columns({"value"});
  for (double v : values) t.row({v});
  int code = kExitPass;
  if (cdf && N > 0) {
    const double ks = ks_statistic(EmpiricalSample(values), cdf);
    const double band = tol::ks_band(N);
    t.note("ks", ks);
    t.note("ks_band", band);
    t.note("ks_pass", ks < band);
    if (!(ks < band)) code = kExitToleranceFailure;
  }
  t.write(os, c.format);
  return code;
}

namespace detail {

inline std::vector<double> lattice_ps(const NuFamily& fam, std::initializer_list<int> ns) {
  std::vector<double> out;
  for (int n : ns) out.push_back(fam.parameter_for_index(n));
  return out;
}

inline std::vector<double> default_ps(const NuFamily& fam) {
  if (fam.lattice_parameter()) return lattice_ps(fam, {2, 3, 5});
  return {0.25, 0.5, 0.75};
}

} // namespace detail

inline ExperimentReport verify_report(const CliConfig& c) {
  const std::string& e = c.experiment;
  if (e == "functional-equation") {
    const NuFamily fam = family_of(c);
    const auto p = parameter_of(fam, c);
    return run_functional_equation(fam, p ? std::vector<double>{*p} : detail::default_ps(fam),
                                   linspace(0.0, 10.0, 101));
  }
  if (e == "commutativity") {
    const NuFamily fam = family_of(c);
    std::vector<std::pair<double, double>> pairs;
    if (fam.lattice_parameter()) {
      for (int a = 2; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b) pairs.emplace_back(fam.parameter_for_index(a), fam.parameter_for_index(b));
    } else {
      pairs = {{0.3, 0.6}};
    }
    return run_commutativity(fam, pairs, c.K.value_or(200));
  }
  if (e == "theorem41") {
    if (c.n_min >= c.n_max) throw UsageError("theorem41 needs n_min < n_max");
    Theorem41Options o;
    o.x = c.x.empty() ? 1.0 : c.x.front();
    o.n_min = c.n_min;
    o.n_max = c.n_max;
    o.mc_draws = c.N.value_or(0);
    o.seed = c.seed;
    o.workers = c.workers;
    return run_theorem41(o);
  }
  if (e == "stability") {
    StabilityOptions o;
    o.family = family_of(c);
    const auto p = parameter_of(o.family, c);
    o.p = p ? *p : (o.family.lattice_parameter() ? o.family.parameter_for_index(3) : 0.25);
    o.alpha = c.alpha;
    o.N = c.N.value_or(100000);
    o.seed = c.seed;
    o.workers = c.workers;
    return run_stability(o);
  }
  if (e == "lln") {
    LlnOptions o;
    o.family = family_of(c);
    if (o.family.kind == FamilyKind::deterministic) o.ps = detail::lattice_ps(o.family, {2, 10, 100});
    else if (o.family.lattice_parameter()) o.ps = detail::lattice_ps(o.family, {2, 3, 5, 10, 50});
    else o.ps = {0.5, 0.1, 0.01, 1e-4};
    // --n or --p replaces the end of the sequence.
    if (const auto last = parameter_of(o.family, c)) {
      std::erase_if(o.ps, [&](double q) { return q <= *last; });
      o.ps.push_back(*last);
      if (o.ps.size() < 2) throw UsageError("lln needs a final parameter below the first default");
    }
    o.N = c.N.value_or(100000);
    o.seed = c.seed;
    o.workers = c.workers;
    return run_lln(o);
  }
  if (e == "characterization") {
    CharacterizationOptions o;
    const NuFamily fam = NuFamily::chebyshev();
    const auto p = parameter_of(fam, c);
    o.p = p.value_or(0.25);
    o.N = c.N.value_or(100000);
    o.seed = c.seed;
    o.workers = c.workers;
    return run_characterization(o);
  }
  throw UsageError("unknown experiment '" + e + "'");
}

inline int cmd_verify(const CliConfig& c, std::ostream& os) {
  ExperimentReport r = verify_report(c);
  if (c.format == "text") {
    os << r.to_text();
  } else {
    Json j = r.to_json();
    j["config"] = {{"subcommand", c.subcommand}, {"experiment", c.experiment}, {"family", c.family},
                   {"m", c.m},                   {"seed", c.seed},             {"workers", c.workers}};
    os << j.dump(2) << "\n";
  }
  return r.passed() ? kExitPass : kExitToleranceFailure;
}

// ---------------------------------------------------------------------------

inline void add_common(CLI::App* sub, CliConfig& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output file (default stdout)");
}

inline void add_family(CLI::App* sub, CliConfig& c) {
  sub->add_option("--family", c.family, "deterministic|geometric|chebyshev|melamed|chebyshev-m")->capture_default_str();
  sub->add_option("--n", c.n, "lattice index: p = 1/n or 1/n^2");
  sub->add_option("--p", c.p, "parameter p, e.g. 0.25 or 1/9");
  sub->add_option("--m", c.m, "family parameter m")->capture_default_str();
}

/// Parses `args` (without the program name) and runs the subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"nu-stable random summation: coefficients, distributions, samplers and experiments", "nustable"};
  app.require_subcommand(1);

  auto* coeffs = app.add_subcommand("coeffs", "pmf of nu_p from the generating function");
  add_family(coeffs, c);
  coeffs->add_option("--K", c.K, "truncation order (default: smallest with tail bound < 1e-10)");
  coeffs->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(coeffs, c);

  auto* figure1 = app.add_subcommand("figure1", "partial sums S(n, x) against A(x)");
  figure1->add_option("--x", c.x, "point x (default 1)")->expected(1);
  figure1->add_option("--n-min", c.n_min)->capture_default_str();
  figure1->add_option("--n-max", c.n_max)->capture_default_str();
  figure1->add_option("--N", c.N, "Monte Carlo draws for an A(x) cross-check (default 0)");
  figure1->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(figure1, c);

  auto* xi = app.add_subcommand("xi", "A(x) by Laplace inversion, optionally against Monte Carlo");
  xi->add_option("--x", c.x, "points, comma separated")->delimiter(',');
  xi->add_option("--m", c.m, "law xi_m")->capture_default_str();
  xi->add_option("--N", c.N, "Monte Carlo draws (default 0)");
  xi->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(xi, c);

  auto* sample = app.add_subcommand("sample", "sample dump with a KS self-check where a cdf is known");
  sample->add_option("--dist", c.dist, "sech|laplace|xi|geometric-analogue|stable|nu|nu-normal|nu-stable")
      ->capture_default_str();
  add_family(sample, c);
  sample->add_option("--alpha", c.alpha)->capture_default_str();
  sample->add_option("--a", c.a, "scale")->capture_default_str();
  sample->add_option("--N", c.N, "sample size (default 1000)");
  sample->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(sample, c);

  auto* verify = app.add_subcommand("verify", "run a named experiment; exit 0 iff it passes");
  verify->add_option("experiment", c.experiment,
                     "functional-equation|commutativity|theorem41|stability|lln|characterization")
      ->required();
  add_family(verify, c);
  verify->add_option("--alpha", c.alpha)->capture_default_str();
  verify->add_option("--x", c.x)->expected(1);
  verify->add_option("--K", c.K);
  verify->add_option("--N", c.N);
  verify->add_option("--n-min", c.n_min)->capture_default_str();
  verify->add_option("--n-max", c.n_max)->capture_default_str();
  verify->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));
  add_common(verify, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  if (c.subcommand == "verify" && !verify->count("--format")) c.format = "json";

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) {
      err << "cannot open " << c.out << " for writing\n";
      return kExitUsage;
    }
  }
  std::ostream& os = c.out.empty() ? out : file;
  try {
    if (c.subcommand == "coeffs") return cmd_coeffs(c, os);
    if (c.subcommand == "figure1") return cmd_figure1(c, os);
    if (c.subcommand == "xi") return cmd_xi(c, os);
    if (c.subcommand == "sample") return cmd_sample(c, os);
    return cmd_verify(c, os);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TailBoundTooLarge& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegreeTooLarge& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

} // namespace nustable::cli

#endif // NUSTABLE_CLI_HPP
