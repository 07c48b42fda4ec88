#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sievebench/common.hpp"
#include "sievebench/moduli.hpp"

namespace sievebench {

/// Reduced fraction a/m read as a point of R/Z; gcd(a, m) = 1, 1 <= a < m.
struct FareyFraction {
  i128 numerator;
  i128 denominator;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Distance from x to the nearest integer.
double torus_distance(double x);

/// Number of j <= U with a*m_j = v (mod m) for some |v| <= V.
/// Residues are represented in (-m/2, m/2].
i64 count_box_solutions(i128 a, i128 m, const ModuliSequence& seq, i64 U, i128 V);

/// Number of u <= U with a*f(u) = v (mod m) for some |v| <= V.
i64 count_poly_box(i128 a, i128 m, const IntPolynomial& f, i64 U, i128 V);

/// {a/m_j : gcd(a, m_j) = 1, 1 <= a < m_j, Q <= j <= 2Q}, sorted on [0, 1).
struct FareySet {
  std::vector<FareyFraction> points;
  /// (m_j, phi(m_j)) for each denominator, ascending j.
  std::vector<std::pair<i128, i128>> multiplicity;
  std::size_t labelled_count = 0;
  std::size_t distinct_count = 0;
};

FareySet farey_set(const ModuliSequence& seq, i64 Q);

/// max over x of #{y : <x - y> < 1/(2N)} with y = x included; exact.
i64 spacing_count(const FareySet& set, i64 N);
i64 spacing_count(const ModuliSequence& seq, i64 N, i64 Q);

/// Smallest torus distance between two distinct points, as an exact fraction.
std::pair<i128, i128> min_torus_gap(const FareySet& set);

struct FracgenAudit {
  i64 Q = 0;
  i64 N = 0;
  i64 measured = 0;
  Count e_plus = 0;
  Count e_star = 0;
  double term1 = 0;  // E+(m_Q)^{1/4}
  double term2 = 0;  // N^{-1/4} Q^{alpha/2} E*(m_Q)^{1/4}
  double ratio = 0;  // measured / (term1 + term2)
};

/// Spacing count against the energy bound; requires Q^alpha <= N <= Q^{2 alpha}.
FracgenAudit lemma_fracgen_audit(const ModuliSequence& seq, i64 N, i64 Q, double alpha);

struct BoxesgenAudit {
  i128 a = 0;
  i128 m = 0;
  i64 U = 0;
  i128 V = 0;
  i64 measured = 0;
  /// E+(m_U)^{1/4} + (U^alpha/m + 1)^{1/4} V^{1/4} E*(m_U)^{1/4}
  double rhs = 0;
  double ratio = 0;
};

BoxesgenAudit boxesgen_audit(const ModuliSequence& seq, i128 a, i128 m, i64 U, i128 V, double alpha);

/// Spacing count over polynomial moduli f(Q..2Q) against
/// Q^{k+1}/N + Q^{1-1/kappa} + Q^{1+k/kappa} N^{-1/kappa}, kappa = 2^{k-1}.
struct PolySpacingAudit {
  i64 Q = 0;
  i64 N = 0;
  i64 measured = 0;
  double term1 = 0;
  double term2 = 0;
  double term3 = 0;
  double ratio = 0;
};

PolySpacingAudit poly_spacing_audit(const IntPolynomial& f, i64 N, i64 Q);

/// Audit rows as CSV with columns (Q, N, measured, term1, term2, ratio).
std::string to_csv(const std::vector<FracgenAudit>& rows);

}  // namespace sievebench
