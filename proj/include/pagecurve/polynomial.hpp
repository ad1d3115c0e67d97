#ifndef PAGECURVE_POLYNOMIAL_HPP
#define PAGECURVE_POLYNOMIAL_HPP

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pagecurve/errors.hpp"
#include "pagecurve/rational.hpp"

namespace pagecurve {

/// Univariate polynomial with exact rational coefficients. Zero coefficients are
/// never stored, so two polynomials are equal iff their coefficient maps are.
class RationalPolynomial {
 public:
  using Terms = std::map<unsigned, ExactRational>;

  RationalPolynomial() = default;

  static RationalPolynomial monomial(unsigned degree, ExactRational coefficient = 1) {
    RationalPolynomial p;
    p.add_term(degree, coefficient);
    return p;
  }

  void add_term(unsigned degree, const ExactRational& coefficient) {
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(degree, coefficient);
    if (!inserted) {
      it->second += coefficient;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ExactRational coefficient(unsigned degree) const {
    const auto it = terms_.find(degree);
    return it == terms_.end() ? ExactRational(0) : it->second;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  unsigned lowest_degree() const noexcept { return terms_.empty() ? 0 : terms_.begin()->first; }

  RationalPolynomial& operator+=(const RationalPolynomial& other) {
    for (const auto& [d, c] : other.terms_) add_term(d, c);
    return *this;
  }
  RationalPolynomial& operator-=(const RationalPolynomial& other) {
    for (const auto& [d, c] : other.terms_) add_term(d, -c);
    return *this;
  }
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) {
    return a += b;
  }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) {
    return a -= b;
  }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    RationalPolynomial out;
    for (const auto& [da, ca] : a.terms_) {
      for (const auto& [db, cb] : b.terms_) out.add_term(da + db, ca * cb);
    }
    return out;
  }
  friend RationalPolynomial operator*(const ExactRational& scalar, const RationalPolynomial& p) {
    RationalPolynomial out;
    for (const auto& [d, c] : p.terms_) out.add_term(d, scalar * c);
    return out;
  }
  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

  ExactRational evaluate(const ExactRational& x) const {
    if (terms_.empty()) return 0;
    ExactRational acc = 0;
    unsigned current = degree();
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      while (current > it->first) {
        acc *= x;
        --current;
      }
      acc += it->second;
    }
    while (current > 0) {
      acc *= x;
      --current;
    }
    return acc;
  }

  RationalPolynomial derivative() const {
    RationalPolynomial out;
    for (const auto& [d, c] : terms_) {
      if (d > 0) out.add_term(d - 1, c * d);
    }
    return out;
  }

  /// p(1 - x).
  RationalPolynomial reflected() const {
    RationalPolynomial out;
    for (const auto& [d, c] : terms_) {
      for (unsigned j = 0; j <= d; ++j) {
        ExactRational term = c * ExactRational(binomial(d, j));
        if (j % 2 == 1) term = -term;
        out.add_term(j, term);
      }
    }
    return out;
  }

  /// Human-readable form in descending degree, e.g. "2r^6 - 6r^5 + 5r^4".
  std::string to_string(const std::string& var = "r") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      ExactRational c = it->second;
      const bool negative = c < 0;
      if (negative) c = -c;
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      const bool unit = c == 1;
      if (!unit || it->first == 0) os << to_fraction_string(c);
      if (it->first >= 1) os << var;
      if (it->first >= 2) os << "^" << it->first;
    }
    return os.str();
  }

 private:
  Terms terms_;
};

/// Integer-coefficient form sum_d A_d x^d / L of a rational polynomial for exact
/// evaluation at dyadic points (every double) followed by one final rounding.
class ExactHornerForm {
 public:
  explicit ExactHornerForm(const RationalPolynomial& p) {
    denominator_ = 1;
    for (const auto& [d, c] : p.terms()) {
      const BigInt den = denominator_of(c);
      denominator_ = denominator_ / boost::multiprecision::gcd(denominator_, den) * den;
    }
    const unsigned top = p.degree();
    numerators_.assign(top + 1, BigInt(0));
    for (const auto& [d, c] : p.terms()) {
      numerators_[d] = numerator_of(c) * (denominator_ / denominator_of(c));
    }
  }

  /// Correctly rounded value of the polynomial at the exact double x.
  double evaluate(double x) const {
    if (x == 0.0) return to_double(ExactRational(numerators_[0], denominator_));
    const ExactRational exact = exact_from_double(x);
    const BigInt m = numerator_of(exact);
    const BigInt scale = denominator_of(exact);  // power of two
    // P(m/S) S^D = sum_d A_d m^d S^(D-d), accumulated from the top degree down.
    const std::size_t top = numerators_.size() - 1;
    std::vector<BigInt> scale_powers(top + 1);
    scale_powers[0] = 1;
    for (std::size_t i = 1; i <= top; ++i) scale_powers[i] = scale_powers[i - 1] * scale;
    BigInt acc = 0;
    for (std::size_t i = 0; i <= top; ++i) {
      const std::size_t d = top - i;
      acc = acc * m + numerators_[d] * scale_powers[i];
    }
    return to_double(ExactRational(acc, denominator_ * scale_powers[top]));
  }

 private:
  std::vector<BigInt> numerators_;
  BigInt denominator_;
};

/// {}_2F_1(-m, b; c; x) for integers m >= 0, b >= 1, c >= 1 as the finite sum
/// sum_{a=0}^{m} (-1)^a C(m,a) (c-1)! (a+b-1)! / ((b-1)! (a+c-1)!) x^a.
inline RationalPolynomial terminating_hypergeometric_2f1(unsigned m, unsigned b, unsigned c) {
  if (b < 1 || c < 1) throw InputError("terminating_hypergeometric_2f1: b and c must be >= 1");
  RationalPolynomial out;
  const BigInt c_fact = factorial(c - 1);
  const BigInt b_fact = factorial(b - 1);
  for (unsigned a = 0; a <= m; ++a) {
    ExactRational term(binomial(m, a) * c_fact * factorial(a + b - 1),
                       b_fact * factorial(a + c - 1));
    if (a % 2 == 1) term = -term;
    out.add_term(a, term);
  }
  return out;
}

}  // namespace pagecurve

#endif  // PAGECURVE_POLYNOMIAL_HPP
