#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"
#include "sievebench/real_power.hpp"

namespace sievebench {

/// Integer polynomial, coefficients in ascending degree (constant first).
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<i64> coefficients);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  i64 leading() const noexcept { return coeffs_.back(); }
  const std::vector<i64>& coefficients() const noexcept { return coeffs_; }
  /// Exact evaluation; RangeError on 128-bit overflow.
  i128 operator()(i128 x) const;
  std::string to_string() const;

 private:
  std::vector<i64> coeffs_{0};
};

enum class SequenceKind { Power, Polynomial, PiatetskiShapiro, Explicit };

std::string to_string(SequenceKind kind);

/// Strictly increasing sequence of positive moduli m_1 < m_2 < ...
/// Values are 1-indexed in the mathematical sense: at(j) is m_j.
class ModuliSequence {
 public:
  static ModuliSequence explicit_values(std::vector<i128> values);

  SequenceKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<i128>& values() const noexcept { return values_; }
  /// m_j for 1 <= j <= size().
  i128 at(std::size_t j) const;
  /// Growth exponent attached at construction (k, degree, alpha, or fitted).
  double alpha_hint() const noexcept { return alpha_hint_; }

  int power_k() const noexcept { return power_k_; }
  const IntPolynomial& polynomial() const noexcept { return poly_; }
  const Exponent& ps_alpha() const noexcept { return ps_alpha_; }

  /// The first Q values {m_1, ..., m_Q}.
  std::vector<i128> prefix(std::size_t Q) const;

 private:
  friend ModuliSequence generate_power(int k, i64 Q);
  friend ModuliSequence generate_polynomial(const IntPolynomial& f, i64 Q);
  friend ModuliSequence generate_piatetski_shapiro(const Exponent& alpha, i64 jmax);

  SequenceKind kind_ = SequenceKind::Explicit;
  std::vector<i128> values_;
  double alpha_hint_ = 1.0;
  int power_k_ = 0;
  IntPolynomial poly_;
  Exponent ps_alpha_;
};

/// [1^k, 2^k, ..., Q^k].
ModuliSequence generate_power(int k, i64 Q);

/// [f(1), ..., f(Q)]; f must have degree >= 1, positive leading coefficient,
/// f(j) >= 1 and strictly increasing on 1..Q.
ModuliSequence generate_polynomial(const IntPolynomial& f, i64 Q);

/// [floor(1^alpha), ..., floor(jmax^alpha)], every floor certified; alpha > 1.
ModuliSequence generate_piatetski_shapiro(const Exponent& alpha, i64 jmax);

/// {floor(j^alpha)} intersected with [R, 2R].
struct DyadicWindow {
  Exponent alpha;
  i64 R = 0;
  std::vector<i128> members;
  std::vector<i64> indices;  // j with members[i] = floor(j^alpha)
};

DyadicWindow window(const Exponent& alpha, i64 R);

/// Strictly increasing consecutive gaps; needs at least 3 values.
bool is_convex(const ModuliSequence& seq);

/// Least-squares slope of log m_j on log j over the upper half (size >= 8).
double growth_exponent(const ModuliSequence& seq);

std::string to_csv(const ModuliSequence& seq);
nlohmann::json to_json(const ModuliSequence& seq);

/// Integers as JSON numbers when they fit 64 bits, strings otherwise.
nlohmann::json int_to_json(i128 v);

}  // namespace sievebench
