#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "pagecurve/analytic.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/haar.hpp"

namespace pc = pagecurve;

namespace {

pc::PassiveUnitary beamsplitter() {
  Eigen::MatrixXcd u(2, 2);
  const double a = 1.0 / std::sqrt(2.0);
  u << a, a, -a, a;
  return pc::PassiveUnitary(u);
}

std::vector<std::vector<std::complex<double>>> to_nested(const Eigen::MatrixXcd& m) {
  std::vector<std::vector<std::complex<double>>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  }
  return out;
}

}  // namespace

TEST(SqueezingConfig, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(pc::SqueezingConfig(std::vector<double>{}), pc::InputError);
  EXPECT_THROW(pc::SqueezingConfig({0.1, std::nan("")}), pc::InputError);
  EXPECT_THROW(pc::SqueezingConfig({INFINITY}), pc::InputError);
}

TEST(SqueezingConfig, MeanBosonNumber) {
  const pc::SqueezingConfig config({0.5, -0.5, 0.0});
  EXPECT_NEAR(config.mean_boson_number(), 2.0 * std::pow(std::sinh(0.5), 2) / 3.0, 1e-15);
  EXPECT_GE(config.mean_boson_number(), 0.0);
  EXPECT_TRUE(pc::SqueezingConfig::equal(4, 0.3).is_equal());
  EXPECT_FALSE(config.is_equal());
}

TEST(CovarianceMatrix, ValidatesShapeAndSymmetry) {
  EXPECT_THROW(pc::CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3)), pc::InputError);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_THROW(pc::CovarianceMatrix{m}, pc::InputError);
}

TEST(PassiveUnitary, RejectsNonUnitary) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(0, 0) = 1.0 + 1e-9;
  EXPECT_THROW(pc::PassiveUnitary{m}, pc::NumericalError);
}

TEST(InitialCovariance, VacuumIsIdentity) {
  const auto sigma = pc::build_initial_covariance(pc::SqueezingConfig({0.0, 0.0}));
  EXPECT_TRUE(sigma.matrix().isApprox(Eigen::MatrixXd::Identity(4, 4), 0.0));
}

TEST(InitialCovariance, SingleModeMatchesExponentials) {
  const auto sigma = pc::build_initial_covariance(pc::SqueezingConfig({0.5}));
  EXPECT_NEAR(sigma.matrix()(0, 0), 2.71828182845904523536, 1e-15);
  EXPECT_NEAR(sigma.matrix()(1, 1), 0.36787944117144232160, 1e-16);
  EXPECT_NEAR(sigma.matrix()(0, 0) * sigma.matrix()(1, 1), 1.0, 1e-15);
}

TEST(InitialCovariance, OppositeSqueezing) {
  const auto sigma = pc::build_initial_covariance(pc::SqueezingConfig({0.3, -0.3}));
  const Eigen::VectorXd d = sigma.matrix().diagonal();
  EXPECT_NEAR(d(0), 1.82211880039050893442, 1e-15);
  EXPECT_NEAR(d(1), 0.54881163609402644481, 1e-15);
  EXPECT_NEAR(d(2), 0.54881163609402644481, 1e-15);
  EXPECT_NEAR(d(3), 1.82211880039050893442, 1e-15);
}

TEST(Evolve, IdentityAndVacuum) {
  const auto sigma0 = pc::build_initial_covariance(pc::SqueezingConfig({0.4, -0.2, 0.7}));
  EXPECT_TRUE(pc::evolve(sigma0, pc::PassiveUnitary::identity(3)).matrix().isApprox(sigma0.matrix(), 1e-15));
  const auto u = pc::sample_haar_unitary(3, {5, 0});
  const auto vacuum = pc::build_initial_covariance(pc::SqueezingConfig::equal(3, 0.0));
  EXPECT_LE((pc::evolve(vacuum, u).matrix() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Evolve, PreservesDeterminantAndMatchesDenseOracle) {
  const std::vector<double> s = {0.4, -0.2, 0.7, 0.1};
  const auto sigma0 = pc::build_initial_covariance(pc::SqueezingConfig(s));
  for (std::uint64_t index = 0; index < 5; ++index) {
    const auto u = pc::sample_haar_unitary(4, {11, index});
    const auto sigma = pc::evolve(sigma0, u);
    EXPECT_LE(std::abs(sigma.matrix().determinant() - sigma0.matrix().determinant()) /
                  sigma0.matrix().determinant(),
              1e-10);
    const auto reference = oracle::evolved_covariance(to_nested(u.matrix()), s);
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        EXPECT_NEAR(sigma.matrix()(a, b), static_cast<double>(reference[a][b]), 1e-12);
      }
    }
  }
}

TEST(Evolve, DimensionMismatch) {
  const auto sigma0 = pc::build_initial_covariance(pc::SqueezingConfig::equal(2, 0.1));
  EXPECT_THROW(pc::evolve(sigma0, pc::PassiveUnitary::identity(3)), pc::InputError);
}

TEST(Reduce, FullAndProductStates) {
  const auto sigma0 = pc::build_initial_covariance(pc::SqueezingConfig({0.25, 0.6}));
  EXPECT_TRUE(pc::reduce_subsystem(sigma0, 2).matrix().isApprox(sigma0.matrix(), 0.0));
  const auto first = pc::reduce_subsystem(sigma0, 1).matrix();
  EXPECT_DOUBLE_EQ(first(0, 0), std::exp(0.5));
  EXPECT_DOUBLE_EQ(first(1, 1), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(first(0, 1), 0.0);
  EXPECT_THROW(pc::reduce_subsystem(sigma0, 0), pc::InputError);
  EXPECT_THROW(pc::reduce_subsystem(sigma0, 3), pc::InputError);
}

TEST(Reduce, ArbitraryModeSets) {
  const auto sigma0 = pc::build_initial_covariance(pc::SqueezingConfig({0.25, 0.6, -0.4}));
  const auto sigma = pc::evolve(sigma0, pc::sample_haar_unitary(3, {5, 1}));
  EXPECT_EQ(pc::reduce_modes(sigma, {0, 1}).matrix(), pc::reduce_subsystem(sigma, 2).matrix());
  const auto last = pc::reduce_modes(sigma0, {2}).matrix();
  EXPECT_DOUBLE_EQ(last(0, 0), std::exp(-0.8));
  EXPECT_DOUBLE_EQ(last(1, 1), std::exp(0.8));
  const auto swapped = pc::reduce_modes(sigma, {1, 0}).matrix();
  EXPECT_EQ(swapped(0, 0), sigma.matrix()(1, 1));
  EXPECT_EQ(swapped(0, 3), sigma.matrix()(1, 3));
  EXPECT_THROW(pc::reduce_modes(sigma, {}), pc::InputError);
  EXPECT_THROW(pc::reduce_modes(sigma, {1, 1}), pc::InputError);
  EXPECT_THROW(pc::reduce_modes(sigma, {3}), pc::InputError);
}

TEST(Reduce, BeamsplitterGivesThermalMode) {
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig({0.5, -0.5})), beamsplitter());
  const auto reduced = pc::reduce_subsystem(sigma, 1).matrix();
  EXPECT_NEAR(reduced(0, 0), 1.54308063481524377848, 1e-14);
  EXPECT_NEAR(reduced(1, 1), 1.54308063481524377848, 1e-14);
  EXPECT_NEAR(reduced(0, 1), 0.0, 1e-15);
}

TEST(Reduce, RowsPathMatchesFullEvolution) {
  const pc::SqueezingConfig config({0.3, -0.1, 0.8, 0.0, 0.5});
  const auto u = pc::sample_haar_unitary(5, {3, 2});
  const auto full = pc::reduce_subsystem(pc::evolve(pc::build_initial_covariance(config), u), 2);
  const auto rows = pc::reduced_covariance_from_rows(u.matrix().topRows(2), config);
  EXPECT_LE((full.matrix() - rows.matrix()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(SymplecticSpectrum, ThermalAndIdentity) {
  const auto id = pc::symplectic_eigenvalues(pc::CovarianceMatrix(Eigen::MatrixXd::Identity(6, 6)));
  ASSERT_EQ(id.values.size(), 3u);
  for (const double v : id.values) EXPECT_DOUBLE_EQ(v, 1.0);
  const auto thermal = pc::symplectic_eigenvalues(pc::CovarianceMatrix(3.5 * Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_NEAR(thermal.values.at(0), 3.5, 1e-14);
}

TEST(SymplecticSpectrum, BeamsplitterReduction) {
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig({0.5, -0.5})), beamsplitter());
  const auto spectrum = pc::symplectic_eigenvalues(pc::reduce_subsystem(sigma, 1));
  EXPECT_NEAR(spectrum.values.at(0), 1.54308063481524377848, 1e-13);
}

TEST(SymplecticSpectrum, SortedDescendingAndAtLeastOne) {
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig({0.9, 0.1, -0.4, 0.6, 0.2})),
                                pc::sample_haar_unitary(5, {1, 1}));
  const auto spectrum = pc::symplectic_eigenvalues(pc::reduce_subsystem(sigma, 3));
  ASSERT_EQ(spectrum.values.size(), 3u);
  EXPECT_TRUE(std::is_sorted(spectrum.values.rbegin(), spectrum.values.rend()));
  EXPECT_GE(spectrum.values.back(), 1.0);
}

TEST(SymplecticSpectrum, UncertaintyViolationIsRejected) {
  EXPECT_THROW(pc::symplectic_eigenvalues(pc::CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2, 2))),
               pc::NumericalError);
}

TEST(Renyi2, ClosedForms) {
  EXPECT_EQ(pc::renyi2_entropy(pc::CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4))), 0.0);
  EXPECT_NEAR(pc::renyi2_entropy(pc::CovarianceMatrix(2.5 * Eigen::MatrixXd::Identity(2, 2))), std::log(2.5), 1e-15);
  const double c = std::cosh(1.5);
  EXPECT_NEAR(pc::renyi2_entropy(pc::CovarianceMatrix(c * Eigen::MatrixXd::Identity(2, 2))),
              0.85544017101379674934, 1e-14);
  EXPECT_NEAR(oracle::log_cosh(1.5), 0.85544017101379674934, 1e-15);
}

TEST(Renyi2, RejectsIndefinite) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(1, 1) = -1.0;
  EXPECT_THROW(pc::renyi2_entropy(pc::CovarianceMatrix{m}), pc::NumericalError);
}

TEST(Renyi2, AgreesWithDenseDeterminantOracle) {
  const std::vector<double> s = {0.2, 0.7, -0.3, 0.5, 0.1, 0.4};
  const auto u = pc::sample_haar_unitary(6, {9, 4});
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig(s)), u);
  const auto dense = oracle::evolved_covariance(to_nested(u.matrix()), s);
  for (int k = 1; k <= 5; ++k) {
    const double expected = 0.5 * std::log(static_cast<double>(oracle::determinant(oracle::leading_modes(dense, k))));
    EXPECT_NEAR(pc::renyi2_entropy(pc::reduce_subsystem(sigma, k)), expected, 1e-11) << "k=" << k;
  }
}

TEST(Renyi2, ProfileMatchesPerSubsystemEntropies) {
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(7, 0.6)),
                                pc::sample_haar_unitary(7, {2, 8}));
  const auto profile = pc::renyi2_profile(sigma);
  ASSERT_EQ(profile.size(), 8u);
  EXPECT_EQ(profile[0], 0.0);
  EXPECT_NEAR(profile[7], 0.0, 1e-12);
  for (int k = 1; k < 7; ++k) {
    EXPECT_NEAR(profile[static_cast<std::size_t>(k)], pc::renyi2_entropy(pc::reduce_subsystem(sigma, k)), 1e-11);
  }
}

TEST(VonNeumann, PureAndThermal) {
  EXPECT_EQ(pc::von_neumann_entropy(pc::SymplecticSpectrum{{1.0, 1.0}}), 0.0);
  const double nu = std::cosh(1.5);
  const double s1 = pc::von_neumann_entropy(pc::SymplecticSpectrum{{nu}});
  EXPECT_NEAR(s1, 1.13038515375819183960, 1e-13);
  EXPECT_NEAR(s1, oracle::h1(nu), 1e-13);
  const double gap = s1 - std::log(nu);
  EXPECT_NEAR(gap, 0.27494498274439509026, 1e-13);
  EXPECT_LT(gap, 1.0 - std::log(2.0));
}

TEST(VonNeumann, ContinuousAtOne) {
  EXPECT_EQ(pc::h1(1.0), 0.0);
  EXPECT_NEAR(pc::h1(1.0 + 1e-12), 0.0, 1e-10);
  EXPECT_EQ(pc::h2(1.0), 0.0);
}

TEST(MaxEntropy, ValuesAndSymmetry) {
  EXPECT_EQ(pc::max_subsystem_entropy(10, 4, 0.0, 2), 0.0);
  EXPECT_EQ(pc::max_subsystem_entropy(10, 4, 0.0, 1), 0.0);
  EXPECT_NEAR(pc::max_subsystem_entropy(8, 4, 0.75, 2), 3.42176068405518699737, 1e-13);
  for (int k = 0; k <= 9; ++k) {
    EXPECT_DOUBLE_EQ(pc::max_subsystem_entropy(9, k, 0.6, 1), pc::max_subsystem_entropy(9, 9 - k, 0.6, 1));
  }
}

TEST(MaxEntangling, ReachesTheMaximum) {
  for (const double s : {0.2, 0.5, 1.1}) {
    const auto u = pc::build_max_entangling_unitary(2, 1);
    const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(2, s)), u);
    EXPECT_NEAR(pc::renyi2_entropy(pc::reduce_subsystem(sigma, 1)), oracle::log_cosh(2.0 * s), 1e-12);
  }
  const auto u = pc::build_max_entangling_unitary(8, 4);
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(8, 0.75)), u);
  EXPECT_NEAR(pc::renyi2_entropy(pc::reduce_subsystem(sigma, 4)), 3.42176068405518699737, 1e-9);
  const auto traces = pc::trace_W_powers(u, 4, 5);
  for (const double t : traces) EXPECT_LE(std::abs(t), 1e-10);
}

TEST(MaxEntangling, RejectsLargeSubsystem) {
  EXPECT_THROW(pc::build_max_entangling_unitary(3, 2), pc::InputError);
}

TEST(TraceW, IdentityAndFullSystem) {
  const auto id = pc::trace_W_powers(pc::PassiveUnitary::identity(5), 3, 4);
  for (const double t : id) EXPECT_NEAR(t, 3.0, 1e-14);
  const auto u = pc::sample_haar_unitary(5, {4, 4});
  for (const double t : pc::trace_W_powers(u, 5, 4)) EXPECT_NEAR(t, 5.0, 1e-12);
  for (const double t : pc::trace_W_powers(pc::sample_haar_unitary(7, {4, 5}), 3, 6)) EXPECT_GE(t, -1e-10);
}

class GaussianProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GaussianProperties, PuritySymmetry) {
  const std::uint64_t seed = GetParam();
  for (std::uint64_t index = 0; index < 4; ++index) {
    const int n = 6;
    const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig({0.3, 0.9, -0.5, 0.1, 0.6, -0.2})),
                                  pc::sample_haar_unitary(n, {seed, index}));
    // Complement of the leading k modes is the trailing n - k modes.
    Eigen::VectorXi perm(2 * n);
    for (int i = 0; i < n; ++i) {
      perm(i) = n - 1 - i;
      perm(n + i) = 2 * n - 1 - i;
    }
    Eigen::MatrixXd flipped(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
      for (int b = 0; b < 2 * n; ++b) flipped(a, b) = sigma.matrix()(perm(a), perm(b));
    }
    const pc::CovarianceMatrix reversed(flipped);
    for (int k = 1; k < n; ++k) {
      const auto part = pc::reduce_subsystem(sigma, k);
      const auto rest = pc::reduce_subsystem(reversed, n - k);
      EXPECT_NEAR(pc::renyi2_entropy(part), pc::renyi2_entropy(rest), 1e-9);
      EXPECT_NEAR(pc::von_neumann_entropy(pc::symplectic_eigenvalues(part)),
                  pc::von_neumann_entropy(pc::symplectic_eigenvalues(rest)), 1e-9);
    }
  }
}

TEST_P(GaussianProperties, EntropyOrderingAndTwoPaths) {
  const std::uint64_t seed = GetParam();
  for (std::uint64_t index = 0; index < 10; ++index) {
    const int n = 8;
    const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(n, 0.8)),
                                  pc::sample_haar_unitary(n, {seed, index}));
    for (int k = 1; k < n; ++k) {
      const auto reduced = pc::reduce_subsystem(sigma, k);
      const auto spectrum = pc::symplectic_eigenvalues(reduced);
      const double s2 = pc::renyi2_entropy(reduced);
      const double s1 = pc::von_neumann_entropy(spectrum);
      EXPECT_NEAR(s2, pc::renyi2_from_spectrum(spectrum), 1e-8);
      EXPECT_LE(s2, s1 + 1e-12);
      EXPECT_LE(s1, s2 + k * (1.0 - std::log(2.0)));
    }
  }
}

TEST_P(GaussianProperties, SeriesMatchesDirectEntropy) {
  const std::uint64_t seed = GetParam();
  const double s = 0.5 * std::atanh(0.5);  // tanh 2s = 0.5
  const int n = 9;
  const double t2 = std::pow(std::tanh(2.0 * s), 2);
  for (std::uint64_t index = 0; index < 5; ++index) {
    const auto u = pc::sample_haar_unitary(n, {seed, index});
    const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(n, s)), u);
    for (int k = 1; k < n; ++k) {
      const int terms = 40;
      const auto traces = pc::trace_W_powers(u, k, terms);
      double series = k * std::log(std::cosh(2.0 * s));
      double power = 1.0;
      for (int l = 1; l <= terms; ++l) {
        power *= t2;
        series -= power / (2.0 * l) * traces[static_cast<std::size_t>(l - 1)];
      }
      // |Tr W^l| <= k, so the tail is below k t^(2L+2) / ((2L+2)(1 - t^2)).
      const double tail = k * power * t2 / ((2.0 * terms + 2.0) * (1.0 - t2));
      EXPECT_NEAR(pc::renyi2_entropy(pc::reduce_subsystem(sigma, k)), series, tail + 1e-12);
    }
  }
}

TEST_P(GaussianProperties, MMatrixTraceIdentities) {
  const std::uint64_t seed = GetParam();
  for (const int n : {4, 7, 12}) {
    const auto u = pc::sample_haar_unitary(n, {seed, static_cast<std::uint64_t>(n)});
    for (int k = 1; k <= n; k += 3) {
      const Eigen::MatrixXd m = pc::m_matrix(u, k);
      const auto traces = pc::trace_W_powers(u, k, 4);
      Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m.rows(), m.cols());
      for (int p = 1; p <= 8; ++p) {
        power = power * m;
        if (p % 2 == 1) {
          EXPECT_NEAR(power.trace(), 0.0, 1e-9) << "p=" << p;
        } else {
          EXPECT_NEAR(power.trace(), 2.0 * traces[static_cast<std::size_t>(p / 2 - 1)], 1e-9) << "p=" << p;
        }
      }
    }
  }
}

TEST_P(GaussianProperties, EqualSqueezingCovarianceFromM) {
  const std::uint64_t seed = GetParam();
  const double s = 0.45;
  const auto u = pc::sample_haar_unitary(6, {seed, 77});
  const auto sigma = pc::evolve(pc::build_initial_covariance(pc::SqueezingConfig::equal(6, s)), u);
  for (int k = 1; k <= 6; ++k) {
    const Eigen::MatrixXd expected = std::cosh(2.0 * s) * Eigen::MatrixXd::Identity(2 * k, 2 * k) +
                                     std::sinh(2.0 * s) * pc::m_matrix(u, k);
    EXPECT_LE((pc::reduce_subsystem(sigma, k).matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GaussianProperties, ::testing::Values(0u, 1u, 42u));
