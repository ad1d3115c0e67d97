#ifndef PAGECURVE_VERIFY_HPP
#define PAGECURVE_VERIFY_HPP

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <numeric>
#include <vector>

#include "pagecurve/analytic.hpp"
#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/haar.hpp"
#include "pagecurve/monte_carlo.hpp"
#include "pagecurve/output.hpp"
#include "pagecurve/permutation.hpp"
#include "pagecurve/polynomial.hpp"
#include "pagecurve/weingarten.hpp"

namespace pagecurve {

struct CheckResult {
  std::string suite;
  std::string name;
  std::string observed;
  std::string expected;
  std::string tolerance;
  bool passed = false;

  nlohmann::json to_json() const {
    return {{"suite", suite}, {"name", name},         {"observed", observed},
            {"expected", expected}, {"tolerance", tolerance}, {"passed", passed}};
  }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  long samples = 500;       ///< per Monte Carlo check in the montecarlo suite
  double sigma_band = 5.0;  ///< statistical band in standard errors
};

/// Reference coefficient lists of f_1..f_8, lowest degree first, starting at r^(l+1).
inline const std::vector<std::vector<long>>& reference_f_coefficients() {
  static const std::vector<std::vector<long>> table = {
      {1},
      {2, -1},
      {5, -6, 2},
      {14, -28, 20, -5},
      {42, -120, 135, -70, 14},
      {132, -495, 770, -616, 252, -42},
      {429, -2002, 4004, -4368, 2730, -924, 132},
      {1430, -8008, 19656, -27300, 23100, -11880, 3432, -429},
  };
  return table;
}

namespace detail {

class CheckList {
 public:
  explicit CheckList(std::string suite) : suite_(std::move(suite)) {}

  void exact(const std::string& name, const ExactRational& observed, const ExactRational& expected) {
    results_.push_back({suite_, name, to_fraction_string(observed), to_fraction_string(expected), "exact",
                        observed == expected});
  }

  void close(const std::string& name, double observed, double expected, double tolerance) {
    results_.push_back({suite_, name, format_double(observed), format_double(expected),
                        format_double(tolerance), std::abs(observed - expected) <= tolerance});
  }

  void flag(const std::string& name, bool passed, const std::string& observed, const std::string& expected) {
    results_.push_back({suite_, name, observed, expected, "-", passed});
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string suite_;
  std::vector<CheckResult> results_;
};

inline std::vector<CheckResult> verify_coefficients() {
  CheckList checks("coefficients");
  const auto& reference = reference_f_coefficients();
  for (unsigned l = 1; l <= reference.size(); ++l) {
    RationalPolynomial expected;
    for (std::size_t i = 0; i < reference[l - 1].size(); ++i) {
      expected.add_term(l + 1 + static_cast<unsigned>(i), ExactRational(reference[l - 1][i]));
    }
    const RationalPolynomial observed = f_polynomial(l);
    checks.flag("f_" + std::to_string(l) + " polynomial", observed == expected, observed.to_string(),
                expected.to_string());
  }
  for (int l = 1; l <= 4; ++l) {
    ExactRational expected = boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(l - 1));
    if (l % 2 == 1) expected = -expected;
    checks.exact("a^(" + std::to_string(l) + ") enumeration", a_ell_enumeration(l), expected);
  }
  for (unsigned l = 1; l <= 10; ++l) {
    const ExactRational half(1, 2);
    const ExactRational expected =
        half * (1 - ExactRational(binomial(2 * l, l), boost::multiprecision::pow(BigInt(4), l)));
    checks.exact("G_" + std::to_string(l) + "(1/2)", g_polynomial(l).evaluate(half), expected);
  }
  for (const double s : {0.25, 0.75, 1.5}) {
    const HalfSystemValues half = page_half_values(s);
    checks.close("density at r=1/2, s=" + format_double(s), page_curve_density(s, 0.5).value, half.density, 1e-10);
    checks.close("density + correction, s=" + format_double(s), half.density + half.correction,
                 0.5 * std::log(std::cosh(2.0 * s)), 1e-12);
  }
  return checks.take();
}

inline std::vector<CheckResult> verify_weingarten(const VerifyOptions& options) {
  CheckList checks("weingarten");
  for (const int n : {5, 9}) {
    for (int q = 1; q <= 4; ++q) {
      bool ok = true;
      Permutation sigma = Permutation::identity(q);
      do {
        ExactRational sum = 0;
        Permutation tau = Permutation::identity(q);
        do {
          sum += wg_exact(sigma * tau.inverse(), n) * detail::power_of(n, tau.cycle_count());
        } while (tau.next());
        ok = ok && sum == (sigma == Permutation::identity(q) ? 1 : 0);
      } while (sigma.next());
      checks.flag("orthogonality q=" + std::to_string(q) + " n=" + std::to_string(n), ok, ok ? "holds" : "violated",
                  "holds");
    }
  }
  const Permutation swap = Permutation::one_based({2, 1});
  const double exact = to_double(wg_exact(swap, 50));
  checks.close("asymptotic/exact Wg ratio, transposition n=50", wg_asymptotic(swap, 50) / exact, 1.0, 5e-4);

  const ExactRational moment = haar_moment_trace_product({1}, 6, 3);
  checks.exact("E Tr W (n=6, k=3)", moment, ExactRational(12, 7));
  const long samples = std::max(options.samples, 20000L);
  std::vector<double> traces(static_cast<std::size_t>(samples));
  detail::parallel_samples(samples, options.workers, [&](long j) {
    const Eigen::MatrixXcd rows = sample_haar_rows(6, 3, detail::sample_stream(options.seed, 0, j));
    const Eigen::MatrixXcd x = rows * rows.transpose();
    traces[static_cast<std::size_t>(j)] = (x * x.conjugate()).trace().real();
  });
  const SampleSummary summary = summarize(traces);
  checks.close("Monte Carlo E Tr W (n=6, k=3)", summary.mean, to_double(moment), 3.0 * summary.standard_error);

  const OmegaExtrapolation omega = omega2_extrapolation({8, 16, 32, 64}, ExactRational(1, 2));
  checks.close("omega^(2) extrapolation", to_double(omega.extrapolated), 0.5, 1e-3);
  return checks.take();
}

inline std::vector<CheckResult> verify_montecarlo(const VerifyOptions& options) {
  CheckList checks("montecarlo");
  const double band = options.sigma_band;

  RunConfig vacuum;
  vacuum.n = 10;
  vacuum.squeezing = SqueezingConfig::equal(10, 0.0);
  vacuum.subsystem_sizes = {0, 3, 5, 10};
  vacuum.samples = 20;
  vacuum.master_seed = options.seed;
  vacuum.workers = options.workers;
  double largest = 0.0;
  for (const auto& e : estimate_entropy_statistics(vacuum).entries) largest = std::max(largest, std::abs(e.mean_s2));
  checks.close("vacuum S_2", largest, 0.0, 1e-10);

  RunConfig curve;
  curve.n = 50;
  curve.squeezing = SqueezingConfig::equal(50, 0.75);
  curve.subsystem_sizes = {25};
  curve.samples = options.samples;
  curve.master_seed = options.seed;
  curve.workers = options.workers;
  curve.compute_von_neumann = false;
  const SubsystemEstimate half = estimate_entropy_statistics(curve).entries.front();
  checks.close("mean S_2 (n=50, s=0.75, k=25)", half.mean_s2, page_curve_prediction(50, 0.75, 25),
               band * half.stderr_s2 + 2.0 / 50);

  bool complement_ok = true;
  double worst = 0.0;
  for (long j = 0; j < 20; ++j) {
    const CovarianceMatrix sigma =
        evolve(build_initial_covariance(SqueezingConfig::equal(12, 0.5)),
               sample_haar_unitary(12, detail::sample_stream(options.seed, 0, j)));
    const auto profile = renyi2_profile(sigma);
    // The complement of the leading k modes is the trailing 12 - k modes.
    for (int k = 1; k < 12; ++k) {
      std::vector<int> trailing(static_cast<std::size_t>(12 - k));
      std::iota(trailing.begin(), trailing.end(), k);
      const double gap =
          std::abs(profile[static_cast<std::size_t>(k)] - renyi2_entropy(reduce_modes(sigma, trailing)));
      worst = std::max(worst, gap);
      complement_ok = complement_ok && gap <= 1e-9;
    }
  }
  checks.flag("complement symmetry S_2(k) = S_2(n-k)", complement_ok, format_double(worst), "<= 1e-9");

  std::vector<double> weights(static_cast<std::size_t>(options.samples));
  detail::parallel_samples(options.samples, options.workers, [&](long j) {
    const PassiveUnitary u = sample_haar_unitary(4, detail::sample_stream(options.seed, 0, j));
    weights[static_cast<std::size_t>(j)] = std::norm(u.matrix()(0, 0));
  });
  const SampleSummary weight = summarize(weights);
  checks.close("E |U_11|^2 (n=4)", weight.mean, 0.25, band * weight.standard_error);

  const CovarianceCheck cov =
      mean_covariance_check(SqueezingConfig::equal(8, 0.75), 3, options.samples, options.seed, options.workers);
  checks.flag("mean reduced covariance (n=8, k=3)", cov.max_z <= band, "max z = " + format_double(cov.max_z),
              "<= " + format_double(band));

  RunConfig one = curve;
  one.n = 12;
  one.squeezing = SqueezingConfig::equal(12, 0.4);
  one.subsystem_sizes = {0, 4, 6, 12};
  one.samples = 40;
  one.workers = 1;
  RunConfig many = one;
  many.workers = 3;
  const CurveEstimate a = estimate_entropy_statistics(one);
  const CurveEstimate b = estimate_entropy_statistics(many);
  checks.flag("worker-count invariance", a.s2_samples == b.s2_samples, "identical per-sample values",
              "identical per-sample values");
  return checks.take();
}

}  // namespace detail

/// Runs "coefficients", "weingarten", "montecarlo" or "all".
inline std::vector<CheckResult> run_verification_suite(const std::string& suite, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  auto append = [&out](std::vector<CheckResult> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  if (suite == "coefficients" || suite == "all") append(detail::verify_coefficients());
  if (suite == "weingarten" || suite == "all") append(detail::verify_weingarten(options));
  if (suite == "montecarlo" || suite == "all") append(detail::verify_montecarlo(options));
  if (out.empty()) throw InputError("unknown verification suite '" + suite + "'");
  return out;
}

}  // namespace pagecurve

#endif  // PAGECURVE_VERIFY_HPP
