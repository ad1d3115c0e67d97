#ifndef PAGECURVE_ERRORS_HPP
#define PAGECURVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pagecurve {

/// Caller supplied arguments outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy result
/// (non-PD matrix, broken eigenvalue pairing, uncertainty violation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact Weingarten evaluation requested where the Gram matrix may be singular (n < q).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A combinatorial enumeration exceeds the configured size limit.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, int limit)
      : std::runtime_error(what + " (limit " + std::to_string(limit) + ")"), limit_(limit) {}
  int limit() const noexcept { return limit_; }

 private:
  int limit_;
};

/// Series truncation could not reach the requested tolerance.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_bound, int terms)
      : std::runtime_error(what), achieved_bound_(achieved_bound), terms_(terms) {}
  double achieved_bound() const noexcept { return achieved_bound_; }
  int terms() const noexcept { return terms_; }

 private:
  double achieved_bound_;
  int terms_;
};

}  // namespace pagecurve

#endif  // PAGECURVE_ERRORS_HPP
