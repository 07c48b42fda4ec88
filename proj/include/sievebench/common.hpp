#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sievebench {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Exact count of quadruples, solutions, etc.
using Count = std::uint64_t;

enum class ErrorKind {
  Domain,
  Validation,
  Precondition,
  Range,
  Capacity,
  Precision,
  Io,
};

// All library errors derive from Error; the kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SIEVEBENCH_ERROR_CLASS(Name, Kind)                                   \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

SIEVEBENCH_ERROR_CLASS(DomainError, Domain)
SIEVEBENCH_ERROR_CLASS(ValidationError, Validation)
SIEVEBENCH_ERROR_CLASS(PreconditionError, Precondition)
SIEVEBENCH_ERROR_CLASS(RangeError, Range)
SIEVEBENCH_ERROR_CLASS(CapacityError, Capacity)
SIEVEBENCH_ERROR_CLASS(PrecisionError, Precision)
SIEVEBENCH_ERROR_CLASS(IoError, Io)

#undef SIEVEBENCH_ERROR_CLASS

/// Process exit code for an error kind: 2 validation, 3 capacity, 4 precision.
int exit_code_for(ErrorKind kind) noexcept;

std::string to_string(i128 value);
i128 parse_i128(std::string_view text);

/// Shortest decimal form that round-trips through binary64.
std::string format_double(double value);

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results to index-addressed slots so
/// the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sievebench
