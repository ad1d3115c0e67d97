#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "pagecurve/analytic.hpp"
#include "pagecurve/haar.hpp"
#include "pagecurve/monte_carlo.hpp"
#include "pagecurve/weingarten.hpp"

namespace pc = pagecurve;
using pc::ExactRational;
using pc::Permutation;

namespace {

ExactRational q3_denominator(int n) {
  return ExactRational(n) * (n * n - 1) * (n * n - 4);
}

struct TraceSamples {
  pc::SampleSummary first;
  pc::SampleSummary second;
  pc::SampleSummary first_squared;
};

TraceSamples sample_traces(int n, int k, long samples, std::uint64_t seed) {
  std::vector<double> first(static_cast<std::size_t>(samples));
  std::vector<double> second(first.size());
  std::vector<double> squared(first.size());
  for (long j = 0; j < samples; ++j) {
    const Eigen::MatrixXcd rows = pc::sample_haar_rows(n, k, pc::derive_substream({seed, 0}, static_cast<std::uint64_t>(j)));
    const Eigen::MatrixXcd x = rows * rows.transpose();
    const Eigen::MatrixXcd w = x * x.conjugate();
    const auto i = static_cast<std::size_t>(j);
    first[i] = w.trace().real();
    second[i] = (w * w).trace().real();
    squared[i] = first[i] * first[i];
  }
  return {pc::summarize(first), pc::summarize(second), pc::summarize(squared)};
}

}  // namespace

TEST(Weingarten, SingleFactor) {
  for (const int n : {1, 2, 7}) EXPECT_EQ(pc::wg_exact(Permutation::identity(1), n), ExactRational(1, n));
}

TEST(Weingarten, TwoFactorsAtFive) {
  EXPECT_EQ(pc::wg_exact(Permutation::identity(2), 5), ExactRational(1, 24));
  EXPECT_EQ(pc::wg_exact(Permutation::from_cycles(2, {{1, 2}}), 5), ExactRational(-1, 120));
}

TEST(Weingarten, ThreeFactorClosedForms) {
  for (const int n : {3, 4, 8, 13}) {
    EXPECT_EQ(pc::wg_exact(Permutation::identity(3), n), ExactRational(n * n - 2) / q3_denominator(n));
    EXPECT_EQ(pc::wg_exact(Permutation::from_cycles(3, {{1, 2}}), n),
              ExactRational(-1) / (ExactRational(n * n - 1) * (n * n - 4)));
    EXPECT_EQ(pc::wg_exact(Permutation::from_cycles(3, {{1, 2, 3}}), n), ExactRational(2) / q3_denominator(n));
  }
}

TEST(Weingarten, ClassInvariance) {
  const ExactRational reference = pc::wg_exact(Permutation::from_cycles(4, {{1, 2}}), 7);
  for (int a = 1; a <= 4; ++a) {
    for (int b = a + 1; b <= 4; ++b) {
      EXPECT_EQ(pc::wg_exact(Permutation::from_cycles(4, {{a, b}}), 7), reference);
    }
  }
}

TEST(Weingarten, Orthogonality) {
  for (const int n : {5, 9}) {
    for (int q = 1; q <= 4; ++q) {
      Permutation sigma = Permutation::identity(q);
      do {
        ExactRational sum = 0;
        Permutation tau = Permutation::identity(q);
        do {
          sum += pc::wg_exact(sigma * tau.inverse(), n) * pc::detail::power_of(n, tau.cycle_count());
        } while (tau.next());
        EXPECT_EQ(sum, sigma == Permutation::identity(q) ? 1 : 0) << "q=" << q << " n=" << n;
      } while (sigma.next());
    }
  }
}

TEST(Weingarten, GramAndClassSolversAgree) {
  for (int q = 1; q <= 5; ++q) {
    for (const int n : {q, q + 3}) {
      pc::detail::WeingartenTable table(q, n);
      EXPECT_EQ(pc::detail::weingarten_by_gram(table), pc::detail::weingarten_by_classes(table)) << "q=" << q;
    }
  }
}

TEST(Weingarten, LeadingAsymptotics) {
  EXPECT_DOUBLE_EQ(pc::wg_asymptotic(Permutation::identity(3), 10), 1e-3);
  const auto swap = Permutation::from_cycles(2, {{1, 2}});
  EXPECT_DOUBLE_EQ(pc::wg_asymptotic(swap, 10), -1e-3);
  EXPECT_LE(std::abs(pc::wg_asymptotic(swap, 50) / pc::to_double(pc::wg_exact(swap, 50)) - 1.0), 5e-4);
  const auto three = Permutation::from_cycles(3, {{1, 2, 3}});
  EXPECT_DOUBLE_EQ(pc::wg_asymptotic(three, 40), 2.0 / std::pow(40.0, 5));
  EXPECT_NEAR(pc::wg_asymptotic(three, 40) / pc::to_double(pc::wg_exact(three, 40)), 1.0, 10.0 / (40.0 * 40.0));
}

TEST(Weingarten, DomainAndCapacityErrors) {
  EXPECT_THROW(pc::wg_exact(Permutation::identity(3), 2), pc::DomainError);
  EXPECT_THROW(pc::wg_exact(Permutation::identity(7), 10), pc::CapacityError);
  EXPECT_THROW(pc::haar_moment_trace_product({4}, 10, 3), pc::CapacityError);
  ::setenv("PAGECURVE_MAX_Q", "2", 1);
  EXPECT_EQ(pc::max_q_limit(), 2);
  EXPECT_THROW(pc::wg_exact(Permutation::identity(3), 5), pc::CapacityError);
  ::setenv("PAGECURVE_MAX_Q", "zero", 1);
  EXPECT_EQ(pc::max_q_limit(), pc::kDefaultMaxQ);
  ::unsetenv("PAGECURVE_MAX_Q");
}

TEST(Enumeration, ConstantTerms) {
  const std::vector<long> expected = {-1, 4, -16, 64, -256};
  for (int l = 1; l <= 5; ++l) {
    const ExactRational value = pc::a_ell_enumeration(l);
    EXPECT_EQ(value, expected[static_cast<std::size_t>(l - 1)]) << "l=" << l;
    ExactRational closed = boost::multiprecision::pow(pc::BigInt(4), static_cast<unsigned>(l - 1));
    if (l % 2 == 1) closed = -closed;
    EXPECT_EQ(value, closed);
  }
}

TEST(Enumeration, LeadingCoefficients) {
  for (int l = 1; l <= 5; ++l) {
    const auto u = static_cast<unsigned>(l);
    EXPECT_EQ(pc::alpha_top_enumeration(l), pc::alpha_coefficient(u, 2 * u)) << "l=" << l;
  }
  EXPECT_EQ(pc::alpha_top_enumeration(1), 1);
  EXPECT_EQ(pc::alpha_top_enumeration(2), -1);
  EXPECT_EQ(pc::alpha_top_enumeration(3), 2);
}

TEST(Enumeration, WorkerSplitIsExact) {
  pc::EnumerationOptions options;
  options.workers = 3;
  EXPECT_EQ(pc::a_ell_enumeration(4, options), 64);
  options.workers = 7;
  EXPECT_EQ(pc::alpha_top_enumeration(4, options), -5);
}

TEST(Enumeration, CapacityLimit) {
  EXPECT_THROW(pc::a_ell_enumeration(6), pc::CapacityError);
  pc::EnumerationOptions options;
  options.allow_extended = true;
  EXPECT_THROW(pc::a_ell_enumeration(7, options), pc::CapacityError);
  EXPECT_THROW(pc::a_ell_enumeration(0), pc::InputError);
}

TEST(Moments, EntryMoments) {
  for (const int n : {2, 3, 6}) {
    EXPECT_EQ(pc::haar_moment_entries({0}, {0}, {0}, {0}, n), ExactRational(1, n));
    EXPECT_EQ(pc::haar_moment_entries({0, 1}, {0, 1}, {0, 1}, {0, 1}, n), ExactRational(1, n * n - 1));
    EXPECT_EQ(pc::haar_moment_entries({0, 0}, {0, 0}, {0, 0}, {0, 0}, n), ExactRational(2, n * (n + 1)));
  }
  EXPECT_EQ(pc::haar_moment_entries({0, 1}, {0, 1}, {0, 1}, {0, 1}, 5), ExactRational(1, 24));
  EXPECT_EQ(pc::haar_moment_entries({0}, {0}, {1}, {0}, 4), 0);
  EXPECT_THROW(pc::haar_moment_entries({0}, {0, 1}, {0}, {0}, 4), pc::InputError);
}

TEST(Moments, FirstTraceClosedForm) {
  EXPECT_EQ(pc::haar_moment_trace_product({1}, 4, 2), ExactRational(6, 5));
  EXPECT_EQ(pc::haar_moment_trace_product({1}, 6, 3), ExactRational(12, 7));
  for (const int n : {2, 5, 9}) {
    EXPECT_EQ(pc::haar_moment_trace_product({1}, n, n), n);
    if (n >= 4) EXPECT_EQ(pc::haar_moment_trace_product({2}, n, n), n);
    EXPECT_EQ(pc::haar_moment_trace_product({1}, n, 0), 0);
    for (int k = 1; k <= n; ++k) {
      EXPECT_EQ(pc::haar_moment_trace_product({1}, n, k), ExactRational(k * (k + 1), n + 1));
    }
  }
  EXPECT_THROW(pc::haar_moment_trace_product({1}, 4, 5), pc::InputError);
  EXPECT_THROW(pc::haar_moment_trace_product({}, 4, 2), pc::InputError);
}

TEST(Moments, AgreeWithMonteCarlo) {
  const TraceSamples mc6 = sample_traces(6, 3, 100000, 0);
  EXPECT_NEAR(mc6.first.mean, 12.0 / 7.0, 3.0 * mc6.first.standard_error);

  const TraceSamples mc5 = sample_traces(5, 2, 50000, 1);
  EXPECT_NEAR(mc5.second.mean, pc::to_double(pc::haar_moment_trace_product({2}, 5, 2)), 4.0 * mc5.second.standard_error);
  EXPECT_NEAR(mc5.first_squared.mean, pc::to_double(pc::haar_moment_trace_product({1, 1}, 5, 2)),
              4.0 * mc5.first_squared.standard_error);
}

TEST(Moments, SecondTraceDensityLimit) {
  // Richardson extrapolation of E Tr W^2 / n at r = 1/2 over n = 8, 16, 32.
  std::vector<double> y;
  for (const int n : {8, 16, 32}) y.push_back(pc::to_double(pc::haar_moment_trace_product({2}, n, n / 2)) / n);
  const double r1 = 2.0 * y[1] - y[0];
  const double r2 = 2.0 * y[2] - y[1];
  const double limit = (4.0 * r2 - r1) / 3.0;
  EXPECT_NEAR(limit, 3.0 / 16.0, 1e-3);
}

TEST(Moments, AsymptoticExpansionToOrderOne) {
  for (const unsigned l : {1u, 2u}) {
    const double a = pc::to_double(pc::a_ell_enumeration(static_cast<int>(l)));
    for (const auto& [num, den] : {std::pair{1, 2}, std::pair{1, 4}}) {
      std::vector<double> scaled;
      for (const int n : {16, 32, 64}) {
        const int k = n * num / den;
        const double r = static_cast<double>(k) / n;
        const double g = a * std::pow(-1.0, l) * std::pow(r * (1.0 - r), l);
        const double predicted = n * pc::f_function(l, r) + g;
        const double exact = pc::to_double(pc::haar_moment_trace_product({static_cast<int>(l)}, n, k));
        scaled.push_back((exact - predicted) * n);
      }
      for (const double v : scaled) EXPECT_LT(std::abs(v), 2.0) << "l=" << l;
    }
  }
}

TEST(Omega, SecondOrderLimit) {
  const auto half = pc::omega2_extrapolation({8, 16, 32, 64}, ExactRational(1, 2));
  EXPECT_NEAR(pc::to_double(half.extrapolated), 0.5, 1e-3);
  EXPECT_EQ(half.finite_n.size(), 4u);
  const auto quarter = pc::omega2_extrapolation({8, 16, 32, 64}, ExactRational(1, 4));
  EXPECT_NEAR(pc::to_double(quarter.extrapolated), 0.5, 1e-3);
}

TEST(Omega, FiniteNMatchesVarianceOfTrace) {
  const int n = 12;
  const int k = 6;
  const ExactRational mean = pc::haar_moment_trace_product({1}, n, k);
  const ExactRational variance = pc::haar_moment_trace_product({1, 1}, n, k) - mean * mean;
  const ExactRational x = ExactRational(k * (n - k), n * n);
  EXPECT_EQ(pc::omega_finite_n(2, n, k), variance / 4 / (x * x));
}

TEST(Omega, InputValidation) {
  EXPECT_THROW(pc::omega2_extrapolation({3, 8}, ExactRational(1, 2)), pc::InputError);
  EXPECT_THROW(pc::omega2_extrapolation({9}, ExactRational(1, 2)), pc::InputError);
  EXPECT_THROW(pc::omega2_extrapolation({8, 8}, ExactRational(1, 2)), pc::InputError);
  EXPECT_THROW(pc::omega2_extrapolation({}, ExactRational(1, 2)), pc::InputError);
  EXPECT_THROW(pc::omega_finite_n(1, 8, 4), pc::InputError);
}

TEST(Omega, NevilleIsExactOnPolynomials) {
  std::vector<ExactRational> h;
  std::vector<ExactRational> y;
  for (const int n : {3, 5, 8, 13}) {
    const ExactRational x(1, n);
    h.push_back(x);
    y.push_back(ExactRational(7, 3) - 2 * x + 5 * x * x * x);
  }
  EXPECT_EQ(pc::extrapolate_to_zero(h, y), ExactRational(7, 3));
}
