#ifndef PAGECURVE_ANALYTIC_HPP
#define PAGECURVE_ANALYTIC_HPP

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pagecurve/errors.hpp"
#include "pagecurve/gaussian.hpp"
#include "pagecurve/polynomial.hpp"
#include "pagecurve/rational.hpp"

namespace pagecurve {

/// Truncation control for the infinite series in this module.
struct SeriesTolerance {
  double abs_tol = 1e-10;
  int max_terms = 10000;

  void validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
      throw InputError("SeriesTolerance: abs_tol must be positive and finite");
    }
    if (max_terms < 1) throw InputError("SeriesTolerance: max_terms must be >= 1");
  }
};

/// A truncated series value together with the number of terms used and a
/// rigorous bound on the discarded tail.
struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  double tail_bound = 0.0;
};

/// Orders up to this value are evaluated by exact rational Horner; above it the
/// incomplete-beta representation of f_l is used (exact Horner would need
/// thousands of digits at l ~ 10^3).
inline constexpr unsigned kExactHornerMaxOrder = 64;

namespace detail {

inline void require_fraction(double r, const char* where) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
    throw InputError(std::string(where) + ": r must lie in [0, 1]");
  }
}

inline void require_finite(double s, const char* where) {
  if (!std::isfinite(s)) throw InputError(std::string(where) + ": s must be finite");
}

/// log cosh x without overflow for large |x|.
inline double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace detail

/// alpha_d^(l) = 2 (-1)^(d-l-1) C(2l-1, l-1) C(l, d-l-1) (2l-d+1) / ((d-1) d),
/// the coefficient of r^d in f_l.
inline ExactRational alpha_coefficient(unsigned l, unsigned d) {
  if (l < 1) throw InputError("alpha_coefficient: l must be >= 1");
  if (d < l + 1 || d > 2 * l) throw InputError("alpha_coefficient: d must lie in [l+1, 2l]");
  ExactRational value(2 * binomial(2 * l - 1, l - 1) * binomial(l, d - l - 1) * (2 * l - d + 1),
                      BigInt(d - 1) * d);
  if ((d - l - 1) % 2 == 1) value = -value;
  return value;
}

/// f_l(r) = r^(l+1) C_l 2F1(1-l, l; l+2; r), the large-n limit of E Tr W^l / n.
inline RationalPolynomial f_polynomial(unsigned l) {
  if (l < 1) throw InputError("f_polynomial: l must be >= 1");
  const RationalPolynomial hyper = terminating_hypergeometric_2f1(l - 1, l, l + 2);
  return RationalPolynomial::monomial(l + 1, ExactRational(catalan_number(l))) * hyper;
}

/// G_l(r) = r - f_l(r); symmetric under r -> 1 - r.
inline RationalPolynomial g_polynomial(unsigned l) {
  return RationalPolynomial::monomial(1) - f_polynomial(l);
}

namespace detail {

struct HornerTables {
  std::vector<ExactHornerForm> f;
  std::vector<ExactHornerForm> g;
};

/// Built once on first use (thread-safe static initialization), read-only after.
inline const HornerTables& horner_tables() {
  static const HornerTables tables = [] {
    HornerTables t;
    t.f.reserve(kExactHornerMaxOrder);
    t.g.reserve(kExactHornerMaxOrder);
    for (unsigned l = 1; l <= kExactHornerMaxOrder; ++l) {
      const RationalPolynomial f = f_polynomial(l);
      t.f.emplace_back(f);
      t.g.emplace_back(RationalPolynomial::monomial(1) - f);
    }
    return t;
  }();
  return tables;
}

/// f_l(r) = 2r I_r(l, l+1) - I_r(l+1, l+1) with I the regularized incomplete beta.
inline double f_incomplete_beta(unsigned l, double r) {
  if (r == 0.0) return 0.0;
  if (r == 1.0) return 1.0;
  const double a = static_cast<double>(l);
  return 2.0 * r * boost::math::ibeta(a, a + 1.0, r) - boost::math::ibeta(a + 1.0, a + 1.0, r);
}

}  // namespace detail

/// f_l(r) as a double.
inline double f_function(unsigned l, double r) {
  if (l < 1) throw InputError("f_function: l must be >= 1");
  detail::require_fraction(r, "f_function");
  if (l <= kExactHornerMaxOrder) return detail::horner_tables().f[l - 1].evaluate(r);
  return detail::f_incomplete_beta(l, r);
}

/// G_l(r) = r - f_l(r) as a double.
inline double g_function(unsigned l, double r) {
  if (l < 1) throw InputError("g_function: l must be >= 1");
  detail::require_fraction(r, "g_function");
  if (l <= kExactHornerMaxOrder) return detail::horner_tables().g[l - 1].evaluate(r);
  const double m = std::min(r, 1.0 - r);
  return m - detail::f_incomplete_beta(l, m);
}

/// Large-n Renyi-2 entropy density alpha(s, r) = lim E S_2 / n.
///
/// Summed as m log cosh 2s - sum_l t^(2l)/(2l) f_l(m) with m = min(r, 1-r) and
/// t = tanh 2s, which equals sum_l t^(2l)/(2l) G_l(r) term by term. Because
/// 0 <= f_l(m) <= 2m I_m(l, l+1) <= 2m (4m(1-m))^l, the tail after L terms is
/// below min(m t^(2L+2) / ((2L+2)(1-t^2)), 2m (t^2 q)^(L+1) / ((2L+2)(1-t^2 q)))
/// with q = 4m(1-m); the second bound keeps large s tractable away from r = 1/2.
inline SeriesValue page_curve_density(double s, double r, const SeriesTolerance& tol = {}) {
  tol.validate();
  detail::require_finite(s, "page_curve_density");
  detail::require_fraction(r, "page_curve_density");
  const double m = std::min(r, 1.0 - r);
  if (s == 0.0 || m == 0.0) return {0.0, 0, 0.0};

  const double t2 = std::pow(std::tanh(2.0 * s), 2);
  const double sech2 = std::exp(-2.0 * detail::log_cosh(2.0 * s));  // 1 - t^2
  const double q = 4.0 * m * (1.0 - m);
  const double one_minus_t2q = sech2 + t2 * (1.0 - q);

  double sum = 0.0;
  double power = 1.0;
  double bound = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= tol.max_terms; ++l) {
    power *= t2;
    sum += power / (2.0 * l) * f_function(static_cast<unsigned>(l), m);
    const double next = 2.0 * l + 2.0;
    const double plain = m * power * t2 / (next * sech2);
    const double chernoff =
        2.0 * m * std::pow(t2 * q, l + 1) / (next * one_minus_t2q);
    bound = std::min(plain, chernoff);
    if (bound <= tol.abs_tol) return {m * detail::log_cosh(2.0 * s) - sum, l, bound};
  }
  throw TruncationError("page_curve_density: tail bound not reached within max_terms", bound,
                        tol.max_terms);
}

/// The same density summed literally as sum_l t^(2l)/(2l) G_l(r), truncated with
/// the uniform bound |G_l| <= 1/2: tail <= t^(2L+2) / ((2L+2)(1-t^2)).
inline SeriesValue page_curve_density_direct(double s, double r, const SeriesTolerance& tol = {}) {
  tol.validate();
  detail::require_finite(s, "page_curve_density_direct");
  detail::require_fraction(r, "page_curve_density_direct");
  if (s == 0.0) return {0.0, 0, 0.0};
  const double t2 = std::pow(std::tanh(2.0 * s), 2);
  const double sech2 = std::exp(-2.0 * detail::log_cosh(2.0 * s));
  double sum = 0.0;
  double power = 1.0;
  double bound = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= tol.max_terms; ++l) {
    power *= t2;
    sum += power / (2.0 * l) * g_function(static_cast<unsigned>(l), r);
    bound = power * t2 / ((2.0 * l + 2.0) * sech2);
    if (bound <= tol.abs_tol) return {sum, l, bound};
  }
  throw TruncationError("page_curve_density_direct: tail bound not reached within max_terms",
                        bound, tol.max_terms);
}

/// Half-system values: (density, correction) = (log cosh s, 1/2 log(1 + tanh^2 s)).
struct HalfSystemValues {
  double density = 0.0;
  double correction = 0.0;
};

inline HalfSystemValues page_half_values(double s) {
  detail::require_finite(s, "page_half_values");
  const double t = std::tanh(s);
  return {detail::log_cosh(s), 0.5 * std::log1p(t * t)};
}

/// Constant correction lambda(s, r) = -(1/8) log(1 - 4r(1-r) tanh^2 2s), written as
/// -(1/8) log((1-2r)^2 + 4r(1-r) sech^2 2s) so r = 1/2 and large s stay finite.
inline double page_constant_lambda(double s, double r) {
  detail::require_finite(s, "page_constant_lambda");
  detail::require_fraction(r, "page_constant_lambda");
  const double p = r * (1.0 - r);
  if (p == 0.0 || s == 0.0) return 0.0;
  const double a = (1.0 - 2.0 * r) * (1.0 - 2.0 * r);
  const double log_b = std::log(4.0 * p) - 2.0 * detail::log_cosh(2.0 * s);
  if (a == 0.0) return -0.125 * log_b;
  const double log_a = std::log(a);
  const double hi = std::max(log_a, log_b);
  const double lo = std::min(log_a, log_b);
  return -0.125 * (hi + std::log1p(std::exp(lo - hi)));
}

/// Finite-n prediction n alpha(s, k/n) - lambda(s, k/n) for E S_2.
inline double page_curve_prediction(int n, double s, int k, const SeriesTolerance& tol = {}) {
  if (n < 1) throw InputError("page_curve_prediction: n must be >= 1");
  if (k < 0 || k > n) throw InputError("page_curve_prediction: k must lie in [0, n]");
  if (k == 0 || k == n || s == 0.0) return 0.0;
  const double r = static_cast<double>(k) / n;
  return n * page_curve_density(s, r, tol).value - page_constant_lambda(s, r);
}

/// Coefficients omega^(d) of the variance series; omega^(2) = 1/2 is built in and
/// further orders may be supplied by the caller.
class VarianceCoefficients {
 public:
  VarianceCoefficients() { omega_.emplace(2u, ExactRational(1, 2)); }

  void set(unsigned d, const ExactRational& value) {
    if (d < 2) throw InputError("VarianceCoefficients: order must be >= 2");
    omega_[d] = value;
  }

  ExactRational at(unsigned d) const {
    const auto it = omega_.find(d);
    if (it == omega_.end()) throw InputError("VarianceCoefficients: order not present");
    return it->second;
  }

  const std::map<unsigned, ExactRational>& entries() const noexcept { return omega_; }

 private:
  std::map<unsigned, ExactRational> omega_;
};

/// Partial sum of sum_d omega^(d) tanh^(2d)(2s) (r(1-r))^d over the supplied orders.
inline double variance_series(double s, double r,
                              const VarianceCoefficients& coeffs = VarianceCoefficients()) {
  detail::require_finite(s, "variance_series");
  detail::require_fraction(r, "variance_series");
  const double x = std::pow(std::tanh(2.0 * s), 2) * r * (1.0 - r);
  double sum = 0.0;
  for (const auto& [d, omega] : coeffs.entries()) {
    sum += to_double(omega) * std::pow(x, static_cast<double>(d));
  }
  return sum;
}

/// Small-squeezing prediction 2r(1-r) sum_i s_i^2 for unequal squeezing.
inline double unequal_small_s_prediction(const SqueezingConfig& config, double r) {
  detail::require_fraction(r, "unequal_small_s_prediction");
  return 2.0 * r * (1.0 - r) * config.sum_of_squares();
}

}  // namespace pagecurve

#endif  // PAGECURVE_ANALYTIC_HPP
