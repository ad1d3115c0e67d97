#ifndef PAGECURVE_RATIONAL_HPP
#define PAGECURVE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace pagecurve {

using BigInt = boost::multiprecision::cpp_int;
/// Canonical arbitrary-precision rational (denominator > 0, reduced).
using ExactRational = boost::multiprecision::cpp_rational;

inline ExactRational make_rational(const BigInt& num, const BigInt& den = 1) {
  return ExactRational(num, den);
}

inline BigInt numerator_of(const ExactRational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const ExactRational& q) {
  return boost::multiprecision::denominator(q);
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_fraction_string(const ExactRational& q) {
  const BigInt den = denominator_of(q);
  if (den == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + den.str();
}

inline double to_double(const ExactRational& q) { return q.convert_to<double>(); }

/// Exact rational value of a finite double (every double is dyadic).
inline ExactRational exact_from_double(double x) {
  if (x == 0.0) return ExactRational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num = scaled;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return ExactRational(num, den);
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

/// C_m = (2m)! / (m! (m+1)!).
inline BigInt catalan_number(unsigned m) { return binomial(2 * m, m) / (m + 1); }

}  // namespace pagecurve

#endif  // PAGECURVE_RATIONAL_HPP
