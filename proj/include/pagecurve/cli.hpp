#ifndef PAGECURVE_CLI_HPP
#define PAGECURVE_CLI_HPP

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pagecurve/analytic.hpp"
#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/haar.hpp"
#include "pagecurve/monte_carlo.hpp"
#include "pagecurve/output.hpp"
#include "pagecurve/permutation.hpp"
#include "pagecurve/verify.hpp"
#include "pagecurve/weingarten.hpp"

namespace pagecurve::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2, kVerificationFailed = 3 };

/// Comma-separated integers, e.g. "8,16,32".
inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InputError("expected an integer list, got '" + text + "'");
    }
    if (used != item.size()) throw InputError("expected an integer list, got '" + text + "'");
    out.push_back(value);
  }
  if (out.empty()) throw InputError("expected a nonempty integer list");
  return out;
}

/// "p/q", an integer, or a plain decimal such as "0.25", converted exactly.
inline ExactRational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const BigInt num(text.substr(0, slash));
      const BigInt den(text.substr(slash + 1));
      if (den == 0) throw InputError("zero denominator in '" + text + "'");
      return ExactRational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return ExactRational(BigInt(text));
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
    return ExactRational(BigInt(digits.empty() || digits == "-" ? "0" : digits), scale);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("expected a rational number, got '" + text + "'");
  }
}

/// A scalar gives equal squeezing on every mode; a comma list must have `modes` entries.
inline SqueezingConfig parse_squeezing(const std::string& text, int modes) {
  if (modes < 1) throw InputError("--modes must be >= 1");
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("--squeeze: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw InputError("--squeeze: cannot parse '" + item + "'");
    values.push_back(value);
  }
  if (values.size() == 1) return SqueezingConfig::equal(modes, values.front());
  if (static_cast<int>(values.size()) != modes) {
    throw InputError("--squeeze lists " + std::to_string(values.size()) + " values but --modes is " +
                     std::to_string(modes));
  }
  return SqueezingConfig(values);
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;
  std::string format = "csv";
  double tol = 1e-10;
};

namespace detail {

/// Arguments minus the output destination and format, which do not affect values.
inline std::vector<std::string> replay_arguments(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--format") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--format=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

inline void emit(const OutputRecord& record, const GlobalOptions& global, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (global.format == "json") {
      write_json(record, os);
    } else {
      write_csv(record, os);
    }
  };
  if (global.out.empty()) {
    write(out);
    return;
  }
  std::ofstream file(global.out);
  if (!file) throw InputError("cannot open output file '" + global.out + "'");
  write(file);
}

inline std::string squeeze_text(const SqueezingConfig& config) {
  if (config.is_equal()) return format_double(config[0]);
  std::string text;
  for (std::size_t i = 0; i < config.values().size(); ++i) {
    if (i) text += ",";
    text += format_double(config[i]);
  }
  return text;
}

struct Context {
  GlobalOptions global;
  std::vector<std::string> args;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  OutputRecord record(const std::string& command, bool stochastic) const {
    OutputRecord r;
    r.command = command;
    r.config["argv"] = replay_arguments(args);
    r.config["seed"] = global.seed;
    r.config["tol"] = global.tol;
    r.metadata["seed"] = std::to_string(global.seed);
    if (stochastic) r.metadata["rng"] = std::string(kRngAlgorithm);
    r.metadata["tolerance"] = format_double(global.tol);
    r.metadata["workers"] = std::to_string(global.workers);
    return r;
  }

  void finish(OutputRecord& r, std::ostream& out) const {
    r.metadata["wall_time_seconds"] =
        format_double(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    emit(r, global, out);
  }

  SeriesTolerance tolerance() const {
    SeriesTolerance t;
    t.abs_tol = global.tol;
    t.validate();
    return t;
  }
};

}  // namespace detail

struct PageCurveOptions {
  int modes = 0;
  std::string squeeze = "0";
  long samples = 1000;
  bool analytic_only = false;
  double grid_step = 0.0;  ///< 0 selects every k
};

inline int cmd_page_curve(const PageCurveOptions& o, const detail::Context& ctx, std::ostream& out) {
  const SqueezingConfig squeezing = parse_squeezing(o.squeeze, o.modes);
  const int n = o.modes;
  const double step = o.grid_step > 0.0 ? o.grid_step : 1.0 / n;
  if (step > 1.0) throw InputError("--grid-step must lie in (0, 1]");
  std::vector<int> ks;
  const auto points = static_cast<long>(std::floor(1.0 / step + 1e-9));
  for (long i = 0; i <= points; ++i) {
    const int k = static_cast<int>(std::lround(std::min(1.0, i * step) * n));
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  if (ks.back() != n) ks.push_back(n);

  OutputRecord record = ctx.record("page-curve", !o.analytic_only);
  record.config["modes"] = n;
  record.config["squeeze"] = detail::squeeze_text(squeezing);
  record.config["grid_step"] = step;
  record.config["analytic_only"] = o.analytic_only;
  record.columns = {"r", "k", "analytic_density", "analytic_total", "max_entropy"};
  if (!o.analytic_only) {
    record.config["samples"] = o.samples;
    for (const char* c : {"mc_mean", "mc_stderr", "mc_variance", "samples"}) record.columns.emplace_back(c);
  }
  record.columns.emplace_back("provenance");

  CurveEstimate estimate;
  if (!o.analytic_only) {
    RunConfig config;
    config.n = n;
    config.squeezing = squeezing;
    config.subsystem_sizes = ks;
    config.samples = o.samples;
    config.master_seed = ctx.global.seed;
    config.workers = ctx.global.workers;
    config.compute_von_neumann = false;
    estimate = estimate_entropy_statistics(config);
  }
  const SeriesTolerance tol = ctx.tolerance();
  const bool equal = squeezing.is_equal();
  const double s = squeezing[0];
  for (const int k : ks) {
    const double r = static_cast<double>(k) / n;
    double density = 0.0;
    double total = 0.0;
    double maximum = std::numeric_limits<double>::quiet_NaN();
    if (equal) {
      density = page_curve_density(s, r, tol).value;
      total = page_curve_prediction(n, s, k, tol);
      maximum = max_subsystem_entropy(n, k, s, 2);
    } else {
      total = unequal_small_s_prediction(squeezing, r);
      density = total / n;
    }
    std::vector<Cell> row = {r, std::int64_t{k}, density, total, maximum};
    if (!o.analytic_only) {
      const SubsystemEstimate& e = estimate.at(k);
      row.insert(row.end(), {e.mean_s2, e.stderr_s2, e.variance_s2, std::int64_t{e.samples}});
    }
    row.emplace_back(std::string(o.analytic_only ? "analytic" : "mc"));
    record.add_row(std::move(row));
  }
  ctx.finish(record, out);
  return kSuccess;
}

struct VarianceOptions {
  std::string modes = "20,40,80";
  double squeeze = 0.75;
  std::string ratio = "1/2";
  long samples = 10000;
};

inline int cmd_variance(const VarianceOptions& o, const detail::Context& ctx, std::ostream& out) {
  const std::vector<int> ladder = parse_int_list(o.modes);
  const ExactRational ratio = parse_rational(o.ratio);
  OutputRecord record = ctx.record("variance", true);
  record.config["modes"] = o.modes;
  record.config["squeeze"] = o.squeeze;
  record.config["ratio"] = to_fraction_string(ratio);
  record.config["samples"] = o.samples;
  record.columns = {"n", "k", "r", "mc_variance", "mc_variance_stderr", "leading_order_variance", "samples", "provenance"};
  const double r = to_double(ratio);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const int n = ladder[i];
    RunConfig config;
    config.n = n;
    config.squeezing = SqueezingConfig::equal(n, o.squeeze);
    config.subsystem_sizes = {SubsystemRule::fixed_ratio(ratio).size_for(n)};
    config.samples = o.samples;
    config.master_seed = ctx.global.seed;
    config.workers = ctx.global.workers;
    config.base_stream = i + 1;
    config.compute_von_neumann = false;
    const SubsystemEstimate e = estimate_entropy_statistics(config).entries.front();
    record.add_row({std::int64_t{n}, std::int64_t{e.k}, r, e.variance_s2, e.variance_stderr_s2,
                    variance_series(o.squeeze, r), std::int64_t{e.samples}, std::string("mc")});
  }
  ctx.finish(record, out);
  return kSuccess;
}

struct TypicalityOptions {
  std::string modes = "25,100,400";
  std::string k_rule = "sqrt";
  double squeeze = 0.75;
  double epsilon = 0.1;
  long samples = 1000;
};

inline SubsystemRule parse_rule(const std::string& text) {
  if (text == "sqrt") return SubsystemRule::square_root();
  if (text.rfind("ratio:", 0) == 0) return SubsystemRule::fixed_ratio(parse_rational(text.substr(6)));
  throw InputError("--k-rule must be 'sqrt' or 'ratio:p/q'");
}

inline int cmd_typicality(const TypicalityOptions& o, const detail::Context& ctx, std::ostream& out) {
  const SubsystemRule rule = parse_rule(o.k_rule);
  OutputRecord record = ctx.record("typicality", true);
  record.config["modes"] = o.modes;
  record.config["k_rule"] = rule.describe();
  record.config["squeeze"] = o.squeeze;
  record.config["epsilon"] = o.epsilon;
  record.config["samples"] = o.samples;
  record.columns = {"n", "k", "mc_mean", "strong_frequency", "weak_frequency", "samples", "provenance"};
  for (const auto& p : typicality_probe(parse_int_list(o.modes), rule, o.squeeze, o.epsilon, o.samples,
                                        ctx.global.seed, ctx.global.workers)) {
    record.add_row({std::int64_t{p.n}, std::int64_t{p.k}, p.mean_s2, p.strong_frequency, p.weak_frequency,
                    std::int64_t{p.samples}, std::string("mc")});
  }
  ctx.finish(record, out);
  return kSuccess;
}

struct ConjectureOptions {
  int modes = 10;
  std::string squeeze = "0.5";
  int mode_index = 0;
  int k = 0;  ///< 0 selects n / 2
  double delta = 1e-3;
  long samples = 1000;
};

inline int cmd_conjecture_probe(const ConjectureOptions& o, const detail::Context& ctx, std::ostream& out) {
  const SqueezingConfig squeezing = parse_squeezing(o.squeeze, o.modes);
  const int k = o.k > 0 ? o.k : o.modes / 2;
  const ConjectureProbe probe =
      conjecture_probe(squeezing, o.mode_index, k, o.delta, o.samples, ctx.global.seed, ctx.global.workers);
  OutputRecord record = ctx.record("conjecture-probe", true);
  record.config["modes"] = o.modes;
  record.config["squeeze"] = detail::squeeze_text(squeezing);
  record.config["mode_index"] = o.mode_index;
  record.config["k"] = k;
  record.config["delta"] = o.delta;
  record.config["samples"] = o.samples;
  record.columns = {"mode_index", "k", "derivative", "stderr", "negative_fraction", "scheme", "samples",
                    "provenance"};
  record.add_row({std::int64_t{o.mode_index}, std::int64_t{k}, probe.derivative, probe.standard_error,
                  probe.negative_fraction, std::string(probe.central ? "central" : "forward"),
                  std::int64_t{probe.samples}, std::string("mc")});
  ctx.finish(record, out);
  return kSuccess;
}

struct WeingartenOptions {
  std::string subop;
  int max_ell = 4;
  bool extended = false;
  int q = 2;
  int n = 0;
  std::string cycle_type;
  std::string powers = "1";
  int k = 0;
  std::string ladder = "8,16,32,64";
  std::string ratio = "1/2";
  int order = 2;
};

inline int cmd_weingarten(const WeingartenOptions& o, const detail::Context& ctx, std::ostream& out) {
  OutputRecord record = ctx.record("weingarten " + o.subop, false);
  record.config["subcommand"] = o.subop;
  if (o.subop == "a-ell") {
    record.config["max"] = o.max_ell;
    record.config["extended"] = o.extended;
    record.columns = {"ell", "a_ell", "a_ell_value", "alpha_top", "alpha_top_value", "provenance"};
    EnumerationOptions options;
    options.allow_extended = o.extended;
    options.workers = ctx.global.workers;
    for (int l = 1; l <= o.max_ell; ++l) {
      const ExactRational a = a_ell_enumeration(l, options);
      const ExactRational top = alpha_top_enumeration(l, options);
      record.add_row({std::int64_t{l}, to_fraction_string(a), to_double(a), to_fraction_string(top),
                      to_double(top), std::string("exact")});
    }
  } else if (o.subop == "wg") {
    if (o.n < 1) throw InputError("weingarten wg: --n is required");
    std::vector<std::vector<int>> classes;
    int q = o.q;
    if (!o.cycle_type.empty()) {
      auto parts = parse_int_list(o.cycle_type);
      std::sort(parts.begin(), parts.end(), std::greater<>());
      q = 0;
      for (const int p : parts) {
        if (p < 1) throw InputError("--cycle-type parts must be >= 1");
        q += p;
      }
      classes.push_back(parts);
    } else {
      if (q < 1) throw InputError("--q must be >= 1");
      pagecurve::detail::require_q_capacity(q, "weingarten wg");
      classes = integer_partitions(q);
    }
    record.config["n"] = o.n;
    record.config["q"] = q;
    record.columns = {"cycle_type", "n", "wg", "wg_value", "wg_asymptotic", "provenance"};
    for (const auto& parts : classes) {
      std::vector<std::vector<int>> cycles;
      std::string label;
      int next = 1;
      for (const int part : parts) {
        std::vector<int> cycle;
        for (int i = 0; i < part; ++i) cycle.push_back(next++);
        cycles.push_back(std::move(cycle));
        label += (label.empty() ? "" : " ") + std::to_string(part);
      }
      const Permutation p = Permutation::from_cycles(q, cycles);
      const ExactRational value = wg_exact(p, o.n);
      record.add_row({label, std::int64_t{o.n}, to_fraction_string(value), to_double(value), wg_asymptotic(p, o.n),
                      std::string("exact")});
    }
  } else if (o.subop == "moment") {
    const std::vector<int> powers = parse_int_list(o.powers);
    record.config["powers"] = o.powers;
    record.config["n"] = o.n;
    record.config["k"] = o.k;
    record.columns = {"powers", "n", "k", "moment", "moment_value", "provenance"};
    const ExactRational value = haar_moment_trace_product(powers, o.n, o.k);
    record.add_row({o.powers, std::int64_t{o.n}, std::int64_t{o.k}, to_fraction_string(value), to_double(value),
                    std::string("exact")});
  } else if (o.subop == "omega2") {
    const std::vector<int> ladder = parse_int_list(o.ladder);
    const ExactRational ratio = parse_rational(o.ratio);
    record.config["ladder"] = o.ladder;
    record.config["ratio"] = to_fraction_string(ratio);
    record.config["order"] = o.order;
    record.columns = {"n", "k", "omega", "omega_value", "provenance"};
    const OmegaExtrapolation result = omega_extrapolation(o.order, ladder, ratio);
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const int k = static_cast<int>(numerator_of(ExactRational(ratio * ladder[i])));
      record.add_row({std::to_string(ladder[i]), std::int64_t{k}, to_fraction_string(result.finite_n[i]),
                      to_double(result.finite_n[i]), std::string("exact")});
    }
    record.add_row({std::string("extrapolated"), std::string(""), to_fraction_string(result.extrapolated),
                    to_double(result.extrapolated), std::string("exact")});
  } else {
    throw InputError("unknown weingarten subcommand '" + o.subop + "'");
  }
  ctx.finish(record, out);
  return kSuccess;
}

struct VerifyCommandOptions {
  std::string suite = "all";
  long samples = 500;
};

inline int cmd_verify(const VerifyCommandOptions& o, const detail::Context& ctx, std::ostream& out) {
  VerifyOptions options;
  options.seed = ctx.global.seed;
  options.workers = ctx.global.workers;
  options.samples = o.samples;
  const std::vector<CheckResult> results = run_verification_suite(o.suite, options);
  bool all_passed = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    checks.push_back(r.to_json());
  }
  nlohmann::json report = {{"schema_version", kSchemaVersion},
                           {"command", "verify"},
                           {"suite", o.suite},
                           {"seed", ctx.global.seed},
                           {"rng", std::string(kRngAlgorithm)},
                           {"samples", o.samples},
                           {"passed", all_passed},
                           {"checks", checks}};
  const bool json_to_stdout = ctx.global.format == "json" && ctx.global.out.empty();
  if (!json_to_stdout) {
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << '[' << r.suite << "] " << r.name << ": observed " << r.observed
          << ", expected " << r.expected << " (tolerance " << r.tolerance << ")\n";
    }
    out << (all_passed ? "all checks passed" : "some checks failed") << " (" << results.size() << " checks)\n";
  } else {
    out << report.dump(2) << '\n';
  }
  if (!ctx.global.out.empty()) {
    std::ofstream file(ctx.global.out);
    if (!file) throw InputError("cannot open output file '" + ctx.global.out + "'");
    file << report.dump(2) << '\n';
  }
  return all_passed ? kSuccess : kVerificationFailed;
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Renyi-2 Page curves of squeezed states under Haar-random linear optics"};
  app.require_subcommand(1);
  app.fallthrough();

  detail::Context ctx;
  ctx.args = args;
  auto& g = ctx.global;
  app.add_option("--seed", g.seed, "master seed (u64)");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", g.tol, "absolute series tolerance")->check(CLI::PositiveNumber);

  PageCurveOptions page;
  auto* page_cmd = app.add_subcommand("page-curve", "analytic and sampled Renyi-2 Page curve");
  page_cmd->add_option("--modes", page.modes, "number of modes n")->required();
  page_cmd->add_option("--squeeze", page.squeeze, "squeezing: scalar or comma list of n values");
  page_cmd->add_option("--samples", page.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  page_cmd->add_flag("--analytic-only", page.analytic_only, "skip sampling");
  page_cmd->add_option("--grid-step", page.grid_step, "spacing in r = k/n (default 1/n)");

  VarianceOptions variance;
  auto* variance_cmd = app.add_subcommand("variance", "sample variance of S_2 against the series");
  variance_cmd->add_option("--modes", variance.modes, "comma list of n");
  variance_cmd->add_option("--squeeze", variance.squeeze, "equal squeezing s");
  variance_cmd->add_option("--ratio", variance.ratio, "subsystem fraction r as p/q");
  variance_cmd->add_option("--samples", variance.samples)->check(CLI::PositiveNumber);

  TypicalityOptions typicality;
  auto* typicality_cmd = app.add_subcommand("typicality", "deviation frequencies of S_2");
  typicality_cmd->add_option("--modes", typicality.modes, "comma list of n");
  typicality_cmd->add_option("--k-rule", typicality.k_rule, "'sqrt' or 'ratio:p/q'");
  typicality_cmd->add_option("--squeeze", typicality.squeeze);
  typicality_cmd->add_option("--epsilon", typicality.epsilon)->check(CLI::PositiveNumber);
  typicality_cmd->add_option("--samples", typicality.samples)->check(CLI::PositiveNumber);

  ConjectureOptions conjecture;
  auto* conjecture_cmd = app.add_subcommand("conjecture-probe", "finite difference of E S_2 in s_i^2");
  conjecture_cmd->add_option("--modes", conjecture.modes);
  conjecture_cmd->add_option("--squeeze", conjecture.squeeze, "scalar or comma list");
  conjecture_cmd->add_option("--mode-index", conjecture.mode_index, "0-based mode whose s_i^2 is varied");
  conjecture_cmd->add_option("--k", conjecture.k, "subsystem size (default n/2)");
  conjecture_cmd->add_option("--delta", conjecture.delta, "step in s_i^2")->check(CLI::PositiveNumber);
  conjecture_cmd->add_option("--samples", conjecture.samples)->check(CLI::Range(2L, 1L << 40));

  WeingartenOptions weingarten;
  auto* weingarten_cmd = app.add_subcommand("weingarten", "exact Weingarten calculus");
  weingarten_cmd->require_subcommand(1);
  auto* a_ell_cmd = weingarten_cmd->add_subcommand("a-ell", "constant-term sums over S_2l");
  a_ell_cmd->add_option("--max", weingarten.max_ell, "largest l")->check(CLI::PositiveNumber);
  a_ell_cmd->add_flag("--extended", weingarten.extended, "allow l = 6 (long runtime)");
  auto* wg_cmd = weingarten_cmd->add_subcommand("wg", "exact Weingarten function");
  wg_cmd->add_option("--q", weingarten.q, "symmetric group size (all classes)");
  wg_cmd->add_option("--cycle-type", weingarten.cycle_type, "single class as comma list, e.g. 2,1");
  wg_cmd->add_option("--n", weingarten.n, "dimension")->required();
  auto* moment_cmd = weingarten_cmd->add_subcommand("moment", "E prod Tr W^l");
  moment_cmd->add_option("--powers", weingarten.powers, "comma list of l");
  moment_cmd->add_option("--n", weingarten.n)->required();
  moment_cmd->add_option("--k", weingarten.k)->required();
  auto* omega_cmd = weingarten_cmd->add_subcommand("omega2", "variance coefficient by extrapolation");
  omega_cmd->add_option("--ladder", weingarten.ladder, "comma list of n");
  omega_cmd->add_option("--ratio", weingarten.ratio, "subsystem fraction r as p/q");
  omega_cmd->add_option("--order", weingarten.order, "series order d (d >= 3 exploratory)");

  VerifyCommandOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", verify.suite)->check(CLI::IsMember({"coefficients", "weingarten", "montecarlo", "all"}));
  verify_cmd->add_option("--samples", verify.samples, "samples per Monte Carlo check")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (page_cmd->parsed()) return cmd_page_curve(page, ctx, out);
    if (variance_cmd->parsed()) return cmd_variance(variance, ctx, out);
    if (typicality_cmd->parsed()) return cmd_typicality(typicality, ctx, out);
    if (conjecture_cmd->parsed()) return cmd_conjecture_probe(conjecture, ctx, out);
    if (weingarten_cmd->parsed()) {
      for (auto* sub : {a_ell_cmd, wg_cmd, moment_cmd, omega_cmd}) {
        if (sub->parsed()) weingarten.subop = sub->get_name();
      }
      return cmd_weingarten(weingarten, ctx, out);
    }
    if (verify_cmd->parsed()) return cmd_verify(verify, ctx, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace pagecurve::cli

#endif  // PAGECURVE_CLI_HPP
