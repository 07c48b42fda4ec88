#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"
#include "sievebench/moduli.hpp"

namespace sievebench {

using Complex = std::complex<double>;

/// a_n for n in [M+1, M+N], N = values.size() >= 1.
struct CoefficientVector {
  i64 M = 0;
  std::vector<Complex> values;

  i64 N() const noexcept { return static_cast<i64>(values.size()); }
  double norm_sq() const;

  static CoefficientVector ones(i64 M, i64 N);
  /// Deterministic pseudo-random complex entries with |a_n| <= 1.
  static CoefficientVector random(i64 M, i64 N, u64 seed);
};

struct SieveResult {
  double total = 0;
  double norm_sq = 0;
  double ratio = 0;
  std::vector<std::pair<i128, double>> per_modulus;
};

nlohmann::json to_json(const SieveResult& result);

/// Reduced residues a with gcd(a, m) = 1; for m = 1 the single class {0}.
std::vector<i128> reduced_residues(i128 m);

/// sum over all a mod m of |sum_n a_n e(a n / m)|^2, by direct evaluation.
double full_form_naive(const CoefficientVector& coeffs, i128 m);
/// The same sum as m * sum_r |sum_{n = r mod m} a_n|^2.
double full_form_buckets(const CoefficientVector& coeffs, i128 m);
/// sum over reduced a mod m of |sum_n a_n e(a n / m)|^2, by direct evaluation.
double coprime_form_naive(const CoefficientVector& coeffs, i128 m);
/// The same sum through sum_{d | m} mu(d) (m/d) sum_r |bucket_{m/d}(r)|^2.
double coprime_form_fast(const CoefficientVector& coeffs, i128 m);

inline constexpr double kDefaultNaiveBudget = 2e9;

/// Direct evaluation over m_1..m_Q; CapacityError when sum phi(m_j) * N
/// exceeds `budget`.
SieveResult sieve_sum_naive(const CoefficientVector& coeffs, const ModuliSequence& seq, i64 Q,
                            double budget = kDefaultNaiveBudget);

/// Moebius reduction of the same form; moduli must factor below 10^12.
SieveResult sieve_sum_fast(const CoefficientVector& coeffs, const ModuliSequence& seq, i64 Q,
                           int threads = 1);

struct SieveConstantOptions {
  double tol = 1e-10;
  int max_iter = 500;
  u64 seed = 1;
  int threads = 1;
  /// Ceiling on sum_j m_j + Q * N per iteration.
  double budget = 2e8;
};

struct SieveConstantEstimate {
  double delta_star_lower = 0;
  int iterations = 0;
  bool converged = false;
  /// max(N, number of Farey nodes): the value no run may fall below.
  double certificate = 0;
  std::size_t node_count = 0;
  /// Rayleigh quotients of the reported run, one per iteration.
  std::vector<double> history;
  /// Largest share of |A a|^2 carried by a single node.
  double node_concentration = 0;
  /// "random", "restart", or "witness".
  std::string start;
};

/// Power iteration on A^*A, where A maps a to its sums at every node a/m_j,
/// j <= Q. The returned quotient is attained by an explicit vector and is a
/// lower bound for the optimal constant.
SieveConstantEstimate estimate_sieve_constant(const ModuliSequence& seq, i64 Q, i64 N, i64 M,
                                              const SieveConstantOptions& options = {});

enum class AuditFamilyKind { Monomial, PiatetskiShapiro, Polynomial };

struct AuditFamily {
  AuditFamilyKind kind = AuditFamilyKind::Monomial;
  int k = 2;
  Exponent alpha;
  IntPolynomial poly;

  static AuditFamily monomial(int k);
  static AuditFamily piatetski_shapiro(const Exponent& alpha);
  static AuditFamily polynomial(const IntPolynomial& f);

  std::string name() const;
  /// k, alpha, or the degree.
  double exponent() const;
  ModuliSequence moduli(i64 Q) const;
};

struct AuditRow {
  i64 Q = 0;
  double nu = 0;
  i64 N = 0;
  double measured = 0;
  double rhs_term1 = 0;
  double rhs_term2 = 0;
  double fitted_C = 0;
  /// fitted_C of the smallest-Q in-range row with the same nu.
  double frozen_C = 0;
  bool in_range = true;
};

struct BoundAudit {
  AuditFamily family;
  std::vector<AuditRow> rows;
  /// Every in-range row satisfies fitted_C <= 1.25 * frozen_C.
  bool within_tolerance = true;
};

inline constexpr double kAuditGrowthTolerance = 1.25;

/// Rows ordered by (Q, nu). Monomial and Piatetski-Shapiro families are
/// measured against N E+^{1/4} + N^{3/4} Q^{alpha/2} E*^{1/4} with exact
/// energies of m_1..m_Q; polynomial families against
/// Q^{k+1} + N Q^{1-1/kappa} (term1) and N^{1-1/kappa} Q^{1+k/kappa} (term2).
BoundAudit bound_audit(const AuditFamily& family, const std::vector<std::pair<i64, double>>& grid,
                       const SieveConstantOptions& options = {});

/// CSV with columns family, k_or_alpha, Q, nu, N, measured, rhs_term1,
/// rhs_term2, fitted_C, in_range.
std::string to_csv(const BoundAudit& audit);

}  // namespace sievebench
