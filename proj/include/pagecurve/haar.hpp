#ifndef PAGECURVE_HAAR_HPP
#define PAGECURVE_HAAR_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"

namespace pagecurve {

/// Identifier written into every persisted output that depends on random draws.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64[seed=splitmix64(master_seed^splitmix64(stream_index+1))]+box-muller/v1";

/// SplitMix64 finalizer; a bijection on 64-bit words with splitmix64_mix(0) == 0.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Address of one reproducible random stream.
struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

/// Child stream for `worker` (or sample index). The child index is
/// splitmix64_mix(parent.stream_index) + worker, so children of a root stream
/// (index 0) have index == worker and the map is injective in `worker`.
constexpr SeededStream derive_substream(const SeededStream& stream, std::uint64_t worker) noexcept {
  return SeededStream{stream.master_seed, splitmix64_mix(stream.stream_index) + worker};
}

/// Engine state for one stream. Normals use Box-Muller on 53-bit uniforms so the
/// byte stream does not depend on the standard library's distribution code.
class StreamEngine {
 public:
  explicit StreamEngine(const SeededStream& stream)
      : engine_(splitmix64_mix(stream.master_seed ^ splitmix64_mix(stream.stream_index + 1))) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class PhaseFix { Enabled, Disabled };

namespace detail {

/// n x cols Ginibre block, filled column-major so the first c columns of an
/// n x n draw equal the n x c draw from the same stream.
inline Eigen::MatrixXcd ginibre_columns(Eigen::Index n, Eigen::Index cols, StreamEngine& engine) {
  Eigen::MatrixXcd g(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = engine.normal();
      const double im = engine.normal();
      g(i, j) = {re, im};
    }
  }
  return g;
}

/// Orthonormal columns of the QR factor of g, each rescaled by the phase of R's
/// diagonal entry. Without the rescaling the result is not Haar distributed.
inline Eigen::MatrixXcd haar_columns(const Eigen::MatrixXcd& g, PhaseFix fix) {
  const Eigen::Index n = g.rows();
  const Eigen::Index cols = g.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, cols);
  if (fix == PhaseFix::Enabled) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::complex<double> diag = qr.matrixQR()(j, j);
      const double magnitude = std::abs(diag);
      if (magnitude > 0.0) q.col(j) *= diag / magnitude;
    }
  }
  return q;
}

}  // namespace detail

/// Haar-random U(n) element from a Ginibre draw. The returned unitary is the
/// transpose of the phase-fixed QR factor, so its first k rows can be drawn on
/// their own with sample_haar_rows.
inline PassiveUnitary sample_haar_unitary(int n, const SeededStream& stream,
                                          PhaseFix fix = PhaseFix::Enabled) {
  if (n < 1) throw InputError("sample_haar_unitary: n must be >= 1");
  StreamEngine engine(stream);
  const Eigen::MatrixXcd g = detail::ginibre_columns(n, n, engine);
  return PassiveUnitary(detail::haar_columns(g, fix).transpose());
}

/// First `rows` rows of the unitary sample_haar_unitary(n, stream) would return,
/// at O(n rows^2) cost. Rows are orthonormal.
inline Eigen::MatrixXcd sample_haar_rows(int n, int rows, const SeededStream& stream) {
  if (n < 1) throw InputError("sample_haar_rows: n must be >= 1");
  if (rows < 0 || rows > n) throw InputError("sample_haar_rows: rows must lie in [0, n]");
  if (rows == 0) return Eigen::MatrixXcd(0, n);
  StreamEngine engine(stream);
  const Eigen::MatrixXcd g = detail::ginibre_columns(n, rows, engine);
  return detail::haar_columns(g, PhaseFix::Enabled).transpose();
}

}  // namespace pagecurve

#endif  // PAGECURVE_HAAR_HPP
