#pragma once

#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"
#include "sievebench/real_power.hpp"

namespace sievebench {

/// Real polynomial, coefficients ascending. The declared degree is
/// coefficients.size() - 1 even when the leading entry is zero.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coefficients);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const noexcept { return coeffs_.back(); }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  /// F(u) mod 1 in [0, 1), evaluated in extended precision.
  double phase(i64 u) const;

 private:
  std::vector<double> coeffs_{0.0};
};

struct ExpSumValue {
  std::complex<double> value;
  i64 terms = 0;
};

nlohmann::json to_json(const ExpSumValue& v);

/// sum_{u=1}^{U} e(F(u)).
ExpSumValue weyl_sum(const RealPolynomial& F, i64 U);

inline constexpr double kWeylLatticeBudget = 1e8;

/// U^{1-k/2^{k-1}} (sum over -U < l_1..l_{k-1} < U of
/// min{U, <theta k! l_1...l_{k-1}>^{-1}})^{1/2^{k-1}}, theta the leading
/// coefficient, k >= 2 the declared degree.
double weyl_bound_rhs(const RealPolynomial& F, i64 U, int threads = 1);

/// sum over R^{1/alpha}/2 < j <= R^{1/alpha} of e(h j^alpha / t).
ExpSumValue sh_sum(const Exponent& alpha, i64 t, i64 h, i64 R);

/// Members floor(j^alpha) with R/2 < floor(j^alpha) <= R and t | floor(j^alpha).
struct PsDivisible {
  i64 count = 0;
  std::vector<i128> quotients;  // floor(j^alpha) / t, ascending
  std::vector<i64> indices;     // the matching j
};

PsDivisible ps_divisible_count(const Exponent& alpha, i64 t, i64 R);

struct CardRow {
  double alpha = 0;
  i64 t = 0;
  i64 R = 0;
  i64 count = 0;
  double rhs = 0;  // R^{1/alpha}/t + R^{1/2}
  double ratio = 0;
  bool flagged = false;  // t > R^{1/6}
  /// #{j : R/2 < j^alpha <= R, {j^alpha/t} < 1/t} and the same with the
  /// closed interval [0, 1/t].
  i64 phase_count = 0;
  i64 closed_count = 0;
};

struct CardAudit {
  std::vector<CardRow> rows;
  /// Ratio at the smallest unflagged (R, t).
  double frozen_C = 0;
  bool within_tolerance = true;
  /// Largest |count - phase_count| and |count - closed_count|.
  i64 max_discrepancy = 0;
};

CardAudit card_bound_audit(const Exponent& alpha, const std::vector<i64>& t_grid,
                           const std::vector<i64>& R_grid);

struct ErdosTuranResult {
  i64 exact = 0;
  double expected = 0;  // U (b - a)
  double rhs = 0;       // U/H + sum_h (1/H + min(b-a, 1/h)) |sum_u e(h gamma_u)|
};

ErdosTuranResult erdos_turan_count(const std::vector<double>& points, double a, double b, i64 H);

struct VdcRow {
  double alpha = 0;
  i64 t = 0;
  i64 R = 0;
  i64 h = 0;
  double measured = 0;  // |S_h|
  double rhs = 0;       // h^{1/2} R^{1/2} t^{-1/2} + t^{1/2} R^{1/alpha-1/2} h^{-1/2}
  double ratio = 0;
};

struct VdcAudit {
  std::vector<VdcRow> rows;
  /// Largest ratio at the smallest R.
  double frozen_C = 0;
  bool within_tolerance = true;
};

/// Rows over 1 <= h <= t <= R^{1/6} for each R, ordered by (R, t, h).
VdcAudit vdc_audit(const Exponent& alpha, const std::vector<i64>& R_grid);

std::string to_csv(const CardAudit& audit);
std::string to_csv(const VdcAudit& audit);

}  // namespace sievebench
