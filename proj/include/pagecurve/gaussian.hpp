#ifndef PAGECURVE_GAUSSIAN_HPP
#define PAGECURVE_GAUSSIAN_HPP

// Zero-mean bosonic Gaussian states in the covariance-matrix picture.
//
// Quadratures are ordered (x_1..x_n, p_1..p_n) everywhere. A passive
// interferometer U in U(n) acts through the orthogonal symplectic matrix
//
//     eta(U) = [[Re U, Im U], [-Im U, Re U]],
//
// and the entropies of a k-mode reduction follow from its symplectic spectrum.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pagecurve/errors.hpp"

namespace pagecurve {

/// Symplectic eigenvalues within this distance below one are treated as exactly one.
inline constexpr double kPureStateTolerance = 1e-9;
/// Largest relative gap allowed between the two copies of each nu^2.
inline constexpr double kPairingTolerance = 1e-8;
inline constexpr double kUnitarityTolerance = 1e-12;
inline constexpr double kSymmetryTolerance = 1e-12;

class SqueezingConfig {
 public:
  explicit SqueezingConfig(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("SqueezingConfig: at least one mode required");
    for (double s : values_) {
      if (!std::isfinite(s)) throw InputError("SqueezingConfig: squeezing values must be finite");
    }
  }

  static SqueezingConfig equal(int modes, double s) {
    if (modes < 1) throw InputError("SqueezingConfig: at least one mode required");
    return SqueezingConfig(std::vector<double>(static_cast<std::size_t>(modes), s));
  }

  int modes() const noexcept { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool is_equal() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [&](double s) { return s == values_[0]; });
  }

  /// (1/n) sum sinh^2(s_i).
  double mean_boson_number() const {
    double total = 0.0;
    for (double s : values_) total += std::sinh(s) * std::sinh(s);
    return total / static_cast<double>(values_.size());
  }

  double sum_of_squares() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0,
                           [](double acc, double s) { return acc + s * s; });
  }

 private:
  std::vector<double> values_;
};

/// 2m x 2m real symmetric second-moment matrix. The constructor checks shape and
/// symmetry; the uncertainty bound is enforced where the spectrum is computed.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0 || entries_.rows() % 2 != 0) {
      throw InputError("CovarianceMatrix: expected a non-empty 2m x 2m matrix");
    }
    if (!entries_.allFinite()) throw InputError("CovarianceMatrix: non-finite entries");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
      throw InputError("CovarianceMatrix: matrix is not symmetric");
    }
  }

  int modes() const noexcept { return static_cast<int>(entries_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

/// n x n unitary describing a linear-optical interferometer.
class PassiveUnitary {
 public:
  explicit PassiveUnitary(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
      throw InputError("PassiveUnitary: expected a non-empty square matrix");
    }
    const auto n = entries_.rows();
    const double defect =
        (entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= kUnitarityTolerance)) {
      throw NumericalError("PassiveUnitary: |U^dag U - I|_max = " + std::to_string(defect));
    }
  }

  static PassiveUnitary identity(int n) {
    return PassiveUnitary(Eigen::MatrixXcd::Identity(n, n));
  }

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

/// Symplectic eigenvalues, sorted descending, each >= 1.
struct SymplecticSpectrum {
  std::vector<double> values;
};

inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return omega;
}

/// eta(U) for a (possibly rectangular) block of rows of U.
inline Eigen::MatrixXd orthosymplectic_embedding(const Eigen::MatrixXcd& u) {
  const auto rows = u.rows();
  const auto cols = u.cols();
  Eigen::MatrixXd eta(2 * rows, 2 * cols);
  eta.topLeftCorner(rows, cols) = u.real();
  eta.topRightCorner(rows, cols) = u.imag();
  eta.bottomLeftCorner(rows, cols) = -u.imag();
  eta.bottomRightCorner(rows, cols) = u.real();
  return eta;
}

/// sigma_0 = diag(e^{2 s_i}) (+) diag(e^{-2 s_i}).
inline CovarianceMatrix build_initial_covariance(const SqueezingConfig& config) {
  const int n = config.modes();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = std::exp(2.0 * config[static_cast<std::size_t>(i)]);
    sigma(n + i, n + i) = std::exp(-2.0 * config[static_cast<std::size_t>(i)]);
  }
  return CovarianceMatrix(std::move(sigma));
}

/// eta(U) sigma0 eta(U)^T, formed as I + eta (sigma0 - I) eta^T so that the vacuum
/// maps to the identity without rounding.
inline CovarianceMatrix evolve(const CovarianceMatrix& sigma0, const PassiveUnitary& u) {
  if (sigma0.modes() != u.dim()) throw InputError("evolve: dimension mismatch");
  const Eigen::MatrixXd eta = orthosymplectic_embedding(u.matrix());
  const auto dim = sigma0.matrix().rows();
  const Eigen::MatrixXd excess = sigma0.matrix() - Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd out = eta * excess * eta.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  out.diagonal().array() += 1.0;
  return CovarianceMatrix(std::move(out));
}

/// Rows/columns {1..k} and {n+1..n+k}.
inline CovarianceMatrix reduce_subsystem(const CovarianceMatrix& sigma, int k) {
  const int n = sigma.modes();
  if (k < 1 || k > n) throw InputError("reduce_subsystem: k must lie in [1, n]");
  if (k == n) return sigma;
  const Eigen::MatrixXd& full = sigma.matrix();
  Eigen::MatrixXd out(2 * k, 2 * k);
  out.topLeftCorner(k, k) = full.block(0, 0, k, k);
  out.topRightCorner(k, k) = full.block(0, n, k, k);
  out.bottomLeftCorner(k, k) = full.block(n, 0, k, k);
  out.bottomRightCorner(k, k) = full.block(n, n, k, k);
  return CovarianceMatrix(std::move(out));
}

/// Reduced covariance on an arbitrary ordered set of distinct 0-based modes.
inline CovarianceMatrix reduce_modes(const CovarianceMatrix& sigma, const std::vector<int>& modes) {
  const int n = sigma.modes();
  const int k = static_cast<int>(modes.size());
  if (k < 1) throw InputError("reduce_modes: mode set must be non-empty");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const int m : modes) {
    if (m < 0 || m >= n || seen[static_cast<std::size_t>(m)]) {
      throw InputError("reduce_modes: modes must be distinct and lie in [0, n)");
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
  const Eigen::MatrixXd& full = sigma.matrix();
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int a = 0; a < 2 * k; ++a) {
    const int ra = a < k ? modes[static_cast<std::size_t>(a)] : n + modes[static_cast<std::size_t>(a - k)];
    for (int b = 0; b < 2 * k; ++b) {
      const int rb = b < k ? modes[static_cast<std::size_t>(b)] : n + modes[static_cast<std::size_t>(b - k)];
      out(a, b) = full(ra, rb);
    }
  }
  return CovarianceMatrix(std::move(out));
}

/// Reduced covariance of the first rows.rows() modes after a passive unitary whose
/// leading rows are `rows`, applied to a diagonal squeezed input.
inline CovarianceMatrix reduced_covariance_from_rows(const Eigen::MatrixXcd& rows,
                                                     const SqueezingConfig& config) {
  const auto k = rows.rows();
  const auto n = rows.cols();
  if (n != config.modes()) throw InputError("reduced_covariance_from_rows: dimension mismatch");
  if (k < 1) throw InputError("reduced_covariance_from_rows: need at least one row");
  Eigen::VectorXd excess(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = config[static_cast<std::size_t>(i)];
    excess(i) = std::expm1(2.0 * s);
    excess(n + i) = std::expm1(-2.0 * s);
  }
  const Eigen::MatrixXd eta = orthosymplectic_embedding(rows);
  Eigen::MatrixXd out = eta * excess.asDiagonal() * eta.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  out.diagonal().array() += 1.0;
  return CovarianceMatrix(std::move(out));
}

namespace detail {

inline double clamp_entropy(double value, const char* who) {
  if (value < 0.0) {
    if (value < -1e-10) {
      throw NumericalError(std::string(who) + ": negative entropy " + std::to_string(value) +
                           " violates the uncertainty principle");
    }
    return 0.0;
  }
  return value;
}

}  // namespace detail

/// S_2 = (1/2) log det sigma from a Cholesky factorization.
inline double renyi2_entropy(const CovarianceMatrix& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma.matrix());
  if (llt.info() != Eigen::Success) throw NumericalError("renyi2_entropy: matrix is not PD");
  const double half_log_det = llt.matrixLLT().diagonal().array().log().sum();
  return detail::clamp_entropy(half_log_det, "renyi2_entropy");
}

/// S_2 of every leading reduction k = 0..n of a full n-mode covariance matrix from
/// one Cholesky factorization of the mode-interleaved (x_1, p_1, x_2, p_2, ...) form.
inline std::vector<double> renyi2_profile(const CovarianceMatrix& sigma) {
  const int n = sigma.modes();
  Eigen::VectorXi order(2 * n);
  for (int i = 0; i < n; ++i) {
    order(2 * i) = i;
    order(2 * i + 1) = n + i;
  }
  const Eigen::MatrixXd& full = sigma.matrix();
  Eigen::MatrixXd interleaved(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = 0; b < 2 * n; ++b) interleaved(a, b) = full(order(a), order(b));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(interleaved);
  if (llt.info() != Eigen::Success) throw NumericalError("renyi2_profile: matrix is not PD");
  const Eigen::MatrixXd& factor = llt.matrixLLT();
  std::vector<double> profile(static_cast<std::size_t>(n) + 1, 0.0);
  double running = 0.0;
  for (int k = 1; k <= n; ++k) {
    running += std::log(factor(2 * k - 2, 2 * k - 2)) + std::log(factor(2 * k - 1, 2 * k - 1));
    profile[static_cast<std::size_t>(k)] = detail::clamp_entropy(running, "renyi2_profile");
  }
  return profile;
}

/// Positive eigenvalues of i Omega sigma. The eigenvalues of -(Omega sigma)^2 are
/// the nu_i^2, each twice; they are obtained from the symmetric similar matrix
/// L^T (Omega^T sigma Omega) L with sigma = L L^T, sorted, paired, and square-rooted.
inline SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  const int k = sigma.modes();
  const Eigen::MatrixXd& m = sigma.matrix();
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("symplectic_eigenvalues: matrix is not PD");
  const Eigen::MatrixXd lower = llt.matrixL();
  // Omega^T sigma Omega = [[sigma_pp, -sigma_px], [-sigma_xp, sigma_xx]].
  Eigen::MatrixXd rotated(2 * k, 2 * k);
  rotated.topLeftCorner(k, k) = m.bottomRightCorner(k, k);
  rotated.topRightCorner(k, k) = -m.bottomLeftCorner(k, k);
  rotated.bottomLeftCorner(k, k) = -m.topRightCorner(k, k);
  rotated.bottomRightCorner(k, k) = m.topLeftCorner(k, k);
  Eigen::MatrixXd similar = lower.transpose() * rotated * lower;
  similar = 0.5 * (similar + similar.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(similar, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symplectic_eigenvalues: eigensolver failed");
  }
  const Eigen::VectorXd squares = solver.eigenvalues();  // ascending
  SymplecticSpectrum spectrum;
  spectrum.values.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double a = squares(2 * i);
    const double b = squares(2 * i + 1);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (!(std::abs(a - b) <= kPairingTolerance * scale)) {
      throw NumericalError("symplectic_eigenvalues: unpaired eigenvalues " + std::to_string(a) +
                           " and " + std::to_string(b));
    }
    double nu = std::sqrt(0.5 * (a + b));
    if (nu < 1.0) {
      if (nu < 1.0 - kPureStateTolerance) {
        throw NumericalError("symplectic_eigenvalues: nu = " + std::to_string(nu) +
                             " violates the uncertainty bound");
      }
      nu = 1.0;
    }
    spectrum.values.push_back(nu);
  }
  std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
  return spectrum;
}

/// h_1(x) = ((x+1)/2) log((x+1)/2) - ((x-1)/2) log((x-1)/2), with h_1(1) = 0.
inline double h1(double x) {
  const double plus = 0.5 * (x + 1.0);
  const double minus = 0.5 * (x - 1.0);
  const double tail = minus > 0.0 ? minus * std::log(minus) : 0.0;
  return plus * std::log(plus) - tail;
}

inline double h2(double x) { return std::log(x); }

inline double von_neumann_entropy(const SymplecticSpectrum& spectrum) {
  double total = 0.0;
  for (double nu : spectrum.values) total += h1(nu);
  return total;
}

inline double renyi2_from_spectrum(const SymplecticSpectrum& spectrum) {
  double total = 0.0;
  for (double nu : spectrum.values) total += h2(nu);
  return total;
}

/// n min(k/n, 1 - k/n) h_order(cosh 2s).
inline double max_subsystem_entropy(int n, int k, double s, int order) {
  if (n < 1 || k < 0 || k > n) throw InputError("max_subsystem_entropy: need 0 <= k <= n");
  if (order != 1 && order != 2) throw InputError("max_subsystem_entropy: order must be 1 or 2");
  const double x = std::cosh(2.0 * s);
  const double h = order == 1 ? h1(x) : h2(x);
  return static_cast<double>(std::min(k, n - k)) * h;
}

/// Unitary whose first k rows are (e_{2i-1} + i e_{2i}) / sqrt(2), completed by
/// modified Gram-Schmidt (two passes) over the remaining standard basis vectors.
/// The k-mode reduction of any equally squeezed input then has W = 0.
inline PassiveUnitary build_max_entangling_unitary(int n, int k) {
  if (k < 0 || n < 1 || 2 * k > n) {
    throw InputError("build_max_entangling_unitary: construction requires 2k <= n");
  }
  using cd = std::complex<double>;
  const double amplitude = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::VectorXcd> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(2 * i) = cd(amplitude, 0.0);
    v(2 * i + 1) = cd(0.0, amplitude);
    rows.push_back(std::move(v));
  }
  for (int basis = 0; basis < n && static_cast<int>(rows.size()) < n; ++basis) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(n, basis);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : rows) v -= q.dot(v) * q;  // dot conjugates q
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    rows.push_back(v / norm);
  }
  if (static_cast<int>(rows.size()) != n) {
    throw NumericalError("build_max_entangling_unitary: completion failed");
  }
  Eigen::MatrixXcd u(n, n);
  for (int i = 0; i < n; ++i) u.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  return PassiveUnitary(std::move(u));
}

/// W restricted to the first k modes: X conj(X) with X = V V^T, V the first k rows of U.
inline Eigen::MatrixXcd w_matrix(const PassiveUnitary& u, int k) {
  if (k < 1 || k > u.dim()) throw InputError("w_matrix: k must lie in [1, n]");
  const Eigen::MatrixXcd rows = u.matrix().topRows(k);
  const Eigen::MatrixXcd x = rows * rows.transpose();
  return x * x.conjugate();
}

/// [Tr W, Tr W^2, ..., Tr W^max_power].
inline std::vector<double> trace_W_powers(const PassiveUnitary& u, int k, int max_power) {
  if (max_power < 1) throw InputError("trace_W_powers: max_power must be >= 1");
  const Eigen::MatrixXcd w = w_matrix(u, k);
  std::vector<double> traces;
  traces.reserve(static_cast<std::size_t>(max_power));
  Eigen::MatrixXcd power = w;
  for (int l = 1; l <= max_power; ++l) {
    traces.push_back(power.trace().real());
    if (l < max_power) power = (power * w).eval();
  }
  return traces;
}

/// M = [[P Re(Y) P^T, P Im(Y) P^T], [P Im(Y) P^T, -P Re(Y) P^T]] with Y = conj(U) U^dag.
/// For equal squeezing the reduced covariance is cosh(2s) I + sinh(2s) M.
inline Eigen::MatrixXd m_matrix(const PassiveUnitary& u, int k) {
  if (k < 1 || k > u.dim()) throw InputError("m_matrix: k must lie in [1, n]");
  const Eigen::MatrixXcd y = u.matrix().conjugate() * u.matrix().adjoint();
  const Eigen::MatrixXcd block = y.topLeftCorner(k, k);
  Eigen::MatrixXd m(2 * k, 2 * k);
  m.topLeftCorner(k, k) = block.real();
  m.topRightCorner(k, k) = block.imag();
  m.bottomLeftCorner(k, k) = block.imag();
  m.bottomRightCorner(k, k) = -block.real();
  return m;
}

}  // namespace pagecurve

#endif  // PAGECURVE_GAUSSIAN_HPP
