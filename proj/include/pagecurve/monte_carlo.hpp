#ifndef PAGECURVE_MONTE_CARLO_HPP
#define PAGECURVE_MONTE_CARLO_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pagecurve/analytic.hpp"
#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/haar.hpp"
#include "pagecurve/rational.hpp"

namespace pagecurve {

/// Configuration of one Monte Carlo run. Sample j always draws its unitary from
/// derive_substream({master_seed, base_stream}, j), so results do not depend on
/// the number of workers.
struct RunConfig {
  int n = 1;
  SqueezingConfig squeezing = SqueezingConfig::equal(1, 0.0);
  std::vector<int> subsystem_sizes;
  long samples = 1;
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::uint64_t base_stream = 0;
  bool compute_von_neumann = true;

  void validate() const {
    if (n < 1) throw InputError("RunConfig: n must be >= 1");
    if (squeezing.modes() != n) throw InputError("RunConfig: squeezing length must equal n");
    if (subsystem_sizes.empty()) throw InputError("RunConfig: subsystem_sizes must be nonempty");
    for (const int k : subsystem_sizes) {
      if (k < 0 || k > n) throw InputError("RunConfig: subsystem sizes must lie in [0, n]");
    }
    if (samples < 1) throw InputError("RunConfig: samples must be >= 1");
    if (workers < 1) throw InputError("RunConfig: workers must be >= 1");
  }
};

/// Summary statistics of one scalar sample set.
struct SampleSummary {
  double mean = 0.0;
  double variance = 0.0;           ///< unbiased sample variance
  double standard_error = 0.0;     ///< sqrt(variance / count)
  double variance_error = 0.0;     ///< standard error of the sample variance
  long count = 0;
};

/// Two-pass summary in index order (deterministic for a given sample vector).
inline SampleSummary summarize(const std::vector<double>& values) {
  SampleSummary out;
  out.count = static_cast<long>(values.size());
  if (values.empty()) return out;
  double mean = 0.0;
  long seen = 0;
  for (const double v : values) mean += (v - mean) / static_cast<double>(++seen);
  double m2 = 0.0;
  double m4 = 0.0;
  for (const double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const auto count = static_cast<double>(values.size());
  out.mean = mean;
  if (values.size() > 1) {
    out.variance = m2 / (count - 1.0);
    out.standard_error = std::sqrt(out.variance / count);
    const double mu2 = m2 / count;
    const double mu4 = m4 / count;
    const double var_of_var = (mu4 - mu2 * mu2 * (count - 3.0) / (count - 1.0)) / count;
    out.variance_error = std::sqrt(std::max(0.0, var_of_var));
  }
  return out;
}

/// Statistics for one subsystem size.
struct SubsystemEstimate {
  int k = 0;
  double mean_s2 = 0.0;
  double mean_s1 = std::numeric_limits<double>::quiet_NaN();  ///< NaN when not computed
  double variance_s2 = 0.0;
  double stderr_s2 = 0.0;
  double variance_stderr_s2 = 0.0;
  long samples = 0;
};

struct CurveEstimate {
  int n = 0;
  std::uint64_t master_seed = 0;
  std::vector<SubsystemEstimate> entries;
  /// Per-sample S_2 values, [entry][sample], kept for derived statistics.
  std::vector<std::vector<double>> s2_samples;

  const SubsystemEstimate& at(int k) const {
    for (const auto& e : entries) {
      if (e.k == k) return e;
    }
    throw InputError("CurveEstimate: subsystem size not present");
  }
  const std::vector<double>& samples_for(int k) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].k == k) return s2_samples[i];
    }
    throw InputError("CurveEstimate: subsystem size not present");
  }
};

namespace detail {

/// Runs body(j) for j in [0, count) on `workers` threads (strided assignment).
/// The first failure by sample index is rethrown as a NumericalError naming it.
inline void parallel_samples(long count, int workers, const std::function<void(long)>& body) {
  std::mutex mutex;
  long failed_index = -1;
  std::string failure;
  auto run = [&](long start, long stride) {
    for (long j = start; j < count; j += stride) {
      try {
        body(j);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(mutex);
        if (failed_index < 0 || j < failed_index) {
          failed_index = j;
          failure = e.what();
        }
        return;
      }
    }
  };
  const long stride = std::max(1, workers);
  if (stride == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (long w = 0; w < stride; ++w) threads.emplace_back(run, w, stride);
    for (auto& t : threads) t.join();
  }
  if (failed_index >= 0) {
    throw NumericalError("sample " + std::to_string(failed_index) + " failed: " + failure);
  }
}

inline SeededStream sample_stream(std::uint64_t seed, std::uint64_t base, long j) {
  return derive_substream(SeededStream{seed, base}, static_cast<std::uint64_t>(j));
}

}  // namespace detail

/// Samples U, evolves the squeezed input and records S_2 (and optionally S_1) at
/// every requested subsystem size. With a single interior size only the needed
/// rows of U are drawn; otherwise the full covariance matrix is evolved and all
/// S_2 values come from one Cholesky factorization.
inline CurveEstimate estimate_entropy_statistics(const RunConfig& config) {
  config.validate();
  const int n = config.n;
  const auto& sizes = config.subsystem_sizes;
  const std::size_t entries = sizes.size();
  const auto count = static_cast<std::size_t>(config.samples);
  std::vector<std::vector<double>> s2(entries, std::vector<double>(count, 0.0));
  std::vector<std::vector<double>> s1(entries, std::vector<double>(count, 0.0));
  const bool rows_path = entries == 1 && sizes[0] > 0 && sizes[0] < n;
  const bool vacuum = std::all_of(config.squeezing.values().begin(), config.squeezing.values().end(),
                                  [](double s) { return s == 0.0; });
  const CovarianceMatrix sigma0 = build_initial_covariance(config.squeezing);

  if (!vacuum) {
    detail::parallel_samples(config.samples, config.workers, [&](long j) {
      const auto idx = static_cast<std::size_t>(j);
      const SeededStream stream = detail::sample_stream(config.master_seed, config.base_stream, j);
      if (rows_path) {
        const CovarianceMatrix reduced =
            reduced_covariance_from_rows(sample_haar_rows(n, sizes[0], stream), config.squeezing);
        s2[0][idx] = renyi2_entropy(reduced);
        if (config.compute_von_neumann) s1[0][idx] = von_neumann_entropy(symplectic_eigenvalues(reduced));
        return;
      }
      const CovarianceMatrix sigma = evolve(sigma0, sample_haar_unitary(n, stream));
      const std::vector<double> profile = renyi2_profile(sigma);
      for (std::size_t e = 0; e < entries; ++e) {
        const int k = sizes[e];
        s2[e][idx] = profile[static_cast<std::size_t>(k)];
        if (config.compute_von_neumann && k > 0 && k < n) {
          s1[e][idx] = von_neumann_entropy(symplectic_eigenvalues(reduce_subsystem(sigma, k)));
        }
      }
    });
  }

  CurveEstimate out;
  out.n = n;
  out.master_seed = config.master_seed;
  for (std::size_t e = 0; e < entries; ++e) {
    const SampleSummary summary = summarize(s2[e]);
    SubsystemEstimate est;
    est.k = sizes[e];
    est.mean_s2 = summary.mean;
    est.variance_s2 = summary.variance;
    est.stderr_s2 = summary.standard_error;
    est.variance_stderr_s2 = summary.variance_error;
    est.samples = summary.count;
    if (config.compute_von_neumann) est.mean_s1 = summarize(s1[e]).mean;
    out.entries.push_back(est);
  }
  out.s2_samples = std::move(s2);
  return out;
}

/// Describes how the subsystem size follows from n.
struct SubsystemRule {
  enum class Kind { FixedRatio, SquareRoot };
  Kind kind = Kind::FixedRatio;
  ExactRational ratio = ExactRational(1, 2);

  static SubsystemRule fixed_ratio(const ExactRational& r) { return {Kind::FixedRatio, r}; }
  static SubsystemRule square_root() { return {Kind::SquareRoot, ExactRational(0)}; }

  /// r n (which must be an integer) or ceil(sqrt(n)).
  int size_for(int n) const {
    if (kind == Kind::SquareRoot) {
      int k = static_cast<int>(std::sqrt(static_cast<double>(n)));
      while (k * k < n) ++k;
      while (k > 0 && (k - 1) * (k - 1) >= n) --k;
      return k;
    }
    const ExactRational kr = ratio * n;
    if (denominator_of(kr) != 1) throw InputError("SubsystemRule: r * n must be an integer");
    return static_cast<int>(numerator_of(kr));
  }

  std::string describe() const {
    return kind == Kind::SquareRoot ? "ceil(sqrt(n))" : "ratio:" + to_fraction_string(ratio);
  }
};

/// One ladder point of the constant-term estimate.
struct LadderPoint {
  int n = 0;
  int k = 0;
  double mean_s2 = 0.0;
  double stderr_s2 = 0.0;
  double deficit = 0.0;  ///< n alpha(s, r) - mean S_2
};

struct ConstantTermEstimate {
  std::vector<LadderPoint> points;
  double lambda = 0.0;        ///< intercept of the least-squares fit deficit = lambda + c / n
  double slope = 0.0;
  double uncertainty = 0.0;   ///< bootstrap standard deviation of lambda
  int bootstrap_resamples = 0;
};

namespace detail {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace detail

/// Estimates lambda(s, r) as the 1/n -> 0 intercept of n alpha(s, r) - mean S_2
/// over the ladder, with a bootstrap over samples for the uncertainty.
inline ConstantTermEstimate estimate_constant_term(const std::vector<int>& n_ladder, double s,
                                                   const ExactRational& r, long samples,
                                                   std::uint64_t seed, int workers = 1,
                                                   int bootstrap_resamples = 1000) {
  if (n_ladder.size() < 3) throw InputError("estimate_constant_term: ladder needs >= 3 points");
  if (r <= 0 || r >= 1) throw InputError("estimate_constant_term: r must lie in (0, 1)");
  if (bootstrap_resamples < 1) throw InputError("estimate_constant_term: bootstrap_resamples must be >= 1");
  const double r_value = to_double(r);
  const double density = page_curve_density(s, r_value).value;

  ConstantTermEstimate out;
  out.bootstrap_resamples = bootstrap_resamples;
  std::vector<std::vector<double>> per_point;
  std::vector<double> inv_n;
  for (std::size_t i = 0; i < n_ladder.size(); ++i) {
    const int n = n_ladder[i];
    const int k = SubsystemRule::fixed_ratio(r).size_for(n);
    RunConfig config;
    config.n = n;
    config.squeezing = SqueezingConfig::equal(n, s);
    config.subsystem_sizes = {k};
    config.samples = samples;
    config.master_seed = seed;
    config.workers = workers;
    config.base_stream = i + 1;
    config.compute_von_neumann = false;
    CurveEstimate estimate = estimate_entropy_statistics(config);
    const auto& e = estimate.entries.front();
    out.points.push_back({n, k, e.mean_s2, e.stderr_s2, n * density - e.mean_s2});
    per_point.push_back(std::move(estimate.s2_samples.front()));
    inv_n.push_back(1.0 / n);
  }

  std::vector<double> deficits;
  for (const auto& p : out.points) deficits.push_back(p.deficit);
  const detail::LineFit fit = detail::fit_line(inv_n, deficits);
  out.lambda = fit.intercept;
  out.slope = fit.slope;

  StreamEngine engine(SeededStream{seed, splitmix64_mix(0x626f6f74ULL)});  // "boot"
  std::vector<double> lambdas;
  lambdas.reserve(static_cast<std::size_t>(bootstrap_resamples));
  std::vector<double> resampled(n_ladder.size());
  for (int b = 0; b < bootstrap_resamples; ++b) {
    for (std::size_t i = 0; i < per_point.size(); ++i) {
      const auto& values = per_point[i];
      const auto size = values.size();
      double sum = 0.0;
      for (std::size_t draw = 0; draw < size; ++draw) {
        auto index = static_cast<std::size_t>(engine.uniform() * static_cast<double>(size));
        sum += values[std::min(index, size - 1)];
      }
      resampled[i] = out.points[i].n * density - sum / static_cast<double>(size);
    }
    lambdas.push_back(detail::fit_line(inv_n, resampled).intercept);
  }
  out.uncertainty = std::sqrt(summarize(lambdas).variance);
  return out;
}

/// Deviation frequencies at one n.
struct TypicalityPoint {
  int n = 0;
  int k = 0;
  double mean_s2 = 0.0;
  double strong_frequency = 0.0;  ///< fraction with |S_2 - mean| >= epsilon
  double weak_frequency = 0.0;    ///< fraction with |S_2 / mean - 1| >= epsilon
  long samples = 0;
};

inline std::vector<TypicalityPoint> typicality_probe(const std::vector<int>& n_list, const SubsystemRule& rule,
                                                     double s, double epsilon, long samples,
                                                     std::uint64_t seed, int workers = 1) {
  if (!(epsilon > 0.0)) throw InputError("typicality_probe: epsilon must be positive");
  std::vector<TypicalityPoint> out;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const int n = n_list[i];
    const int k = rule.size_for(n);
    RunConfig config;
    config.n = n;
    config.squeezing = SqueezingConfig::equal(n, s);
    config.subsystem_sizes = {k};
    config.samples = samples;
    config.master_seed = seed;
    config.workers = workers;
    config.base_stream = i + 1;
    config.compute_von_neumann = false;
    const CurveEstimate estimate = estimate_entropy_statistics(config);
    const auto& values = estimate.s2_samples.front();
    const double mean = estimate.entries.front().mean_s2;
    long strong = 0;
    long weak = 0;
    for (const double v : values) {
      if (std::abs(v - mean) >= epsilon) ++strong;
      if (mean > 0.0 && std::abs(v / mean - 1.0) >= epsilon) ++weak;
    }
    const auto total = static_cast<double>(values.size());
    out.push_back({n, k, mean, strong / total, weak / total, static_cast<long>(values.size())});
  }
  return out;
}

/// Finite-difference estimate of d E S_2 / d(s_i^2).
struct ConjectureProbe {
  double derivative = 0.0;
  double standard_error = 0.0;
  double negative_fraction = 0.0;  ///< fraction of unitaries with a negative per-U difference
  bool central = true;             ///< false when s_i^2 < delta forces a forward difference
  long samples = 0;
};

/// Uses common random numbers: both sides of the difference see the same unitary.
/// The difference is central in s_i^2 unless s_i^2 < delta, where it is forward.
inline ConjectureProbe conjecture_probe(const SqueezingConfig& config, int mode_index, int k, double delta,
                                        long samples, std::uint64_t seed, int workers = 1) {
  const int n = config.modes();
  if (mode_index < 0 || mode_index >= n) throw InputError("conjecture_probe: mode_index out of range");
  if (k < 1 || k >= n) throw InputError("conjecture_probe: k must lie in [1, n-1]");
  if (!(delta > 0.0)) throw InputError("conjecture_probe: delta must be positive");
  if (samples < 2) throw InputError("conjecture_probe: samples must be >= 2");

  const double s = config[static_cast<std::size_t>(mode_index)];
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double s_sq = s * s;
  const bool central = s_sq >= delta;
  std::vector<double> plus_values = config.values();
  std::vector<double> minus_values = config.values();
  plus_values[static_cast<std::size_t>(mode_index)] = sign * std::sqrt(s_sq + delta);
  minus_values[static_cast<std::size_t>(mode_index)] = central ? sign * std::sqrt(s_sq - delta) : s;
  const SqueezingConfig plus(plus_values);
  const SqueezingConfig minus(minus_values);
  const double step = central ? 2.0 * delta : delta;

  std::vector<double> differences(static_cast<std::size_t>(samples));
  detail::parallel_samples(samples, workers, [&](long j) {
    const Eigen::MatrixXcd rows = sample_haar_rows(n, k, detail::sample_stream(seed, 0, j));
    const double hi = renyi2_entropy(reduced_covariance_from_rows(rows, plus));
    const double lo = renyi2_entropy(reduced_covariance_from_rows(rows, minus));
    differences[static_cast<std::size_t>(j)] = (hi - lo) / step;
  });
  const SampleSummary summary = summarize(differences);
  const auto negative = std::count_if(differences.begin(), differences.end(), [](double d) { return d < 0.0; });
  return {summary.mean, summary.standard_error, static_cast<double>(negative) / static_cast<double>(samples),
          central, summary.count};
}

/// Empirical mean of the reduced covariance matrix against (Tr B / n) I.
struct CovarianceCheck {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd standard_error;
  double target = 0.0;          ///< (1/n) sum_i cosh 2 s_i
  double max_deviation = 0.0;   ///< max_ab |mean_ab - target delta_ab|
  double envelope = 0.0;        ///< 3 max_ab standard_error_ab
  double max_z = 0.0;           ///< max_ab |deviation_ab| / standard_error_ab
};

inline CovarianceCheck mean_covariance_check(const SqueezingConfig& config, int k, long samples,
                                             std::uint64_t seed, int workers = 1) {
  const int n = config.modes();
  if (k < 1 || k > n) throw InputError("mean_covariance_check: k must lie in [1, n]");
  if (samples < 2) throw InputError("mean_covariance_check: samples must be >= 2");
  const Eigen::Index dim = 2 * k;
  std::vector<Eigen::MatrixXd> draws(static_cast<std::size_t>(samples));
  detail::parallel_samples(samples, workers, [&](long j) {
    const Eigen::MatrixXcd rows = sample_haar_rows(n, k, detail::sample_stream(seed, 0, j));
    draws[static_cast<std::size_t>(j)] = reduced_covariance_from_rows(rows, config).matrix();
  });
  CovarianceCheck out;
  out.mean = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& d : draws) out.mean += d;
  out.mean /= static_cast<double>(samples);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& d : draws) second += (d - out.mean).cwiseAbs2();
  out.standard_error = (second / static_cast<double>(samples - 1) / static_cast<double>(samples)).cwiseSqrt();
  double trace_b = 0.0;
  for (const double s : config.values()) trace_b += std::cosh(2.0 * s);
  out.target = trace_b / n;
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double deviation = std::abs(out.mean(a, b) - (a == b ? out.target : 0.0));
      const double se = out.standard_error(a, b);
      out.max_deviation = std::max(out.max_deviation, deviation);
      out.envelope = std::max(out.envelope, 3.0 * se);
      if (se > 0.0) out.max_z = std::max(out.max_z, deviation / se);
    }
  }
  return out;
}

}  // namespace pagecurve

#endif  // PAGECURVE_MONTE_CARLO_HPP
