#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sievebench/common.hpp"

namespace sievebench {

/// A real exponent alpha. When alpha is (recognisably) rational p/q the exact
/// ratio is kept so that floors of j^alpha can be certified by comparing the
/// integers m^q and j^p.
class Exponent {
 public:
  Exponent() = default;

  /// Recovers p/q (q <= 10^4) by continued fractions when the double is within
  /// a few ulps of it; otherwise the exponent is treated as irrational.
  static Exponent from_double(double value);
  static Exponent rational(i64 numerator, i64 denominator);
  /// Accepts "1.5", "3/2", "2", "1e0".
  static Exponent parse(std::string_view text);

  double value() const noexcept { return value_; }
  bool is_rational() const noexcept { return den_ != 0; }
  i64 numerator() const noexcept { return num_; }
  i64 denominator() const noexcept { return den_; }
  __float128 quad() const noexcept;
  std::string to_string() const;

 private:
  double value_ = 0.0;
  i64 num_ = 0;
  i64 den_ = 0;
};

/// floor(j^alpha) together with whether j^alpha is itself an integer.
struct CertifiedFloor {
  i128 floor;
  bool exact_integer;
};

/// Distance below which j^alpha is considered too close to an integer to trust
/// the extended-precision value alone.
inline constexpr double kFloorCertificationEpsilon = 1e-10;

/// Certified floor of j^alpha for j >= 1 (alpha > 0). Throws PrecisionError
/// naming j when the value is within kFloorCertificationEpsilon of an integer
/// and alpha has no exact rational form.
CertifiedFloor certified_floor_power(i128 j, const Exponent& alpha);

/// j^alpha > bound, decided exactly (bound is an integer).
bool power_exceeds(i128 j, const Exponent& alpha, i128 bound);

/// Fractional part of h * j^alpha / t, computed in extended precision and
/// rounded to binary64. Throws PrecisionError if the integer part is too large
/// for a reliable reduction.
double power_phase(i128 j, const Exponent& alpha, i64 h, i64 t);

/// Is n = floor(j^alpha) for some j >= 1? Returns that j when it is.
std::optional<i128> ps_index(i128 n, const Exponent& alpha);

}  // namespace sievebench
