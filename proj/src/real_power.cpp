#include "sievebench/real_power.hpp"

extern "C" {
#include <quadmath.h>
}

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

namespace sievebench {

namespace {

using boost::multiprecision::cpp_int;

cpp_int to_cpp_int(i128 v) {
  const bool neg = v < 0;
  u128 mag = neg ? u128(0) - u128(v) : u128(v);
  cpp_int out = static_cast<u64>(mag >> 64);
  out <<= 64;
  out += static_cast<u64>(mag);
  return neg ? cpp_int(-out) : out;
}

i128 quad_to_i128(__float128 v) {
  if (fabsq(v) >= static_cast<__float128>(1e37)) throw RangeError("power value exceeds 128-bit integer range");
  return static_cast<i128>(v);
}

}  // namespace

Exponent Exponent::from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("exponent must be finite");
  Exponent e;
  e.value_ = value;
  // Continued-fraction convergents h/k with k <= 10^4.
  double x = value;
  i64 h_prev = 1, h = static_cast<i64>(std::floor(x));
  i64 k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  const double tol = 1e-15 * std::max(1.0, std::abs(value));
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(value - double(h) / double(k)) <= tol) {
      const i64 g = std::gcd(h, k);
      e.num_ = h / g;
      e.den_ = k / g;
      return e;
    }
    if (frac < 1e-18) break;
    x = 1.0 / frac;
    const i64 a = static_cast<i64>(std::floor(x));
    frac = x - std::floor(x);
    const i64 h_next = a * h + h_prev;
    const i64 k_next = a * k + k_prev;
    if (k_next > 10000) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return e;
}

Exponent Exponent::rational(i64 numerator, i64 denominator) {
  if (denominator == 0) throw DomainError("exponent denominator is zero");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const i64 g = std::gcd(numerator, denominator);
  Exponent e;
  e.num_ = numerator / g;
  e.den_ = denominator / g;
  e.value_ = double(e.num_) / double(e.den_);
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw ValidationError("empty exponent");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const i128 p = parse_i128(s.substr(0, slash));
    const i128 q = parse_i128(s.substr(slash + 1));
    return rational(static_cast<i64>(p), static_cast<i64>(q));
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ValidationError("invalid exponent '" + s + "'");
  // Plain decimal literals are exact rationals.
  const auto dot = s.find('.');
  if (s.find_first_of("eE") == std::string::npos && dot != std::string::npos &&
      s.size() - dot - 1 <= 12) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    i64 den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    const i64 num = static_cast<i64>(parse_i128(digits));
    Exponent e = rational(num, den);
    e.value_ = v;
    return e;
  }
  return from_double(v);
}

__float128 Exponent::quad() const noexcept {
  if (den_ != 0) return static_cast<__float128>(num_) / static_cast<__float128>(den_);
  return static_cast<__float128>(value_);
}

std::string Exponent::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  if (den_ != 0) return std::to_string(num_) + "/" + std::to_string(den_);
  return format_double(value_);
}

CertifiedFloor certified_floor_power(i128 j, const Exponent& alpha) {
  if (j < 1) throw DomainError("certified_floor_power: j must be >= 1");
  if (alpha.value() <= 0) throw DomainError("certified_floor_power: alpha must be positive");
  if (j == 1) return {1, true};
  if (alpha.is_rational() && alpha.denominator() == 1) {
    i128 r = 1;
    for (i64 i = 0; i < alpha.numerator(); ++i)
      if (__builtin_mul_overflow(r, j, &r)) throw RangeError("j^alpha overflows 128 bits");
    return {r, true};
  }
  const __float128 v = powq(static_cast<__float128>(j), alpha.quad());
  const __float128 fl = floorq(v);
  const __float128 dist = fminq(v - fl, fl + 1 - v);
  if (dist > static_cast<__float128>(kFloorCertificationEpsilon)) return {quad_to_i128(fl), false};
  if (!alpha.is_rational())
    throw PrecisionError("cannot certify floor(j^alpha) for j=" + to_string(j) + ", alpha=" +
                         alpha.to_string() + ": value within 1e-10 of an integer");
  // floor m satisfies m^q <= j^p < (m+1)^q.
  const unsigned p = static_cast<unsigned>(alpha.numerator());
  const unsigned q = static_cast<unsigned>(alpha.denominator());
  const cpp_int target = boost::multiprecision::pow(to_cpp_int(j), p);
  i128 m = quad_to_i128(roundq(v));
  while (boost::multiprecision::pow(to_cpp_int(m), q) > target) --m;
  while (boost::multiprecision::pow(to_cpp_int(m + 1), q) <= target) ++m;
  const bool exact = boost::multiprecision::pow(to_cpp_int(m), q) == target;
  return {m, exact};
}

bool power_exceeds(i128 j, const Exponent& alpha, i128 bound) {
  const CertifiedFloor cf = certified_floor_power(j, alpha);
  return cf.floor > bound || (cf.floor == bound && !cf.exact_integer);
}

double power_phase(i128 j, const Exponent& alpha, i64 h, i64 t) {
  if (t == 0) throw DomainError("power_phase: t must be nonzero");
  const __float128 base = powq(static_cast<__float128>(j), alpha.quad());
  const __float128 v = base * static_cast<__float128>(h) / static_cast<__float128>(t);
  if (fabsq(v) > static_cast<__float128>(1e18))
    throw PrecisionError("phase h*j^alpha/t too large to reduce mod 1 reliably (j=" + to_string(j) +
                         ", h=" + std::to_string(h) + ")");
  return static_cast<double>(v - floorq(v));
}

std::optional<i128> ps_index(i128 n, const Exponent& alpha) {
  if (alpha.value() <= 1) throw DomainError("ps_index: alpha must exceed 1");
  if (n < 1) return std::nullopt;
  const double guess = std::floor(std::pow(static_cast<double>(n), 1.0 / alpha.value()));
  i128 j = std::max<i128>(1, static_cast<i128>(guess) - 2);
  for (; j <= static_cast<i128>(guess) + 3; ++j) {
    const i128 f = certified_floor_power(j, alpha).floor;
    if (f == n) return j;
    if (f > n) break;
  }
  return std::nullopt;
}

}  // namespace sievebench
