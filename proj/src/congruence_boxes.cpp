#include "sievebench/congruence_boxes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sievebench/additive_energy.hpp"
#include "sievebench/arith.hpp"

namespace sievebench {
namespace {

constexpr i128 kMaxModulus = (i128(1) << 62);

void check_box_args(i128 a, i128 m, i64 U, i128 V, std::size_t available) {
  if (m < 1) throw PreconditionError("modulus must be positive");
  if (m > kMaxModulus) throw RangeError("modulus exceeds 2^62");
  if (arith::gcd(a, m) != 1) throw PreconditionError("gcd(a, m) must be 1");
  if (U < 0 || static_cast<std::size_t>(U) > available)
    throw PreconditionError("U must lie in [0, length of sequence]");
  if (V < 0) throw PreconditionError("V must be non-negative");
}

bool in_box(i128 a, i128 m, i128 value, i128 V) {
  const i128 r = arith::mulmod(arith::mod(a, m), arith::mod(value, m), m);
  i128 v = arith::centered_mod(r, m);
  if (v < 0) v = -v;
  return v <= V;
}

// a/m < b/n with positive denominators.
bool frac_less(const FareyFraction& x, const FareyFraction& y) {
  return x.numerator * y.denominator < y.numerator * x.denominator;
}

bool frac_equal(const FareyFraction& x, const FareyFraction& y) {
  return x.numerator * y.denominator == y.numerator * x.denominator;
}

// Is the forward distance from points[i] to points[j] (j reached after `wrap`
// turns) strictly below 1/(2N)?
bool forward_within(const std::vector<FareyFraction>& p, std::size_t i, std::size_t j, bool wrap,
                    i64 N) {
  const auto& x = p[i];
  const auto& y = p[j];
  const i128 prod = x.denominator * y.denominator;
  i128 num = y.numerator * x.denominator - x.numerator * y.denominator;
  if (wrap) num += prod;
  // 2N * num < prod  <=>  num <= floor((prod - 1) / (2N))
  return num <= (prod - 1) / (i128(2) * N);
}

}  // namespace

double torus_distance(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

i64 count_box_solutions(i128 a, i128 m, const ModuliSequence& seq, i64 U, i128 V) {
  check_box_args(a, m, U, V, seq.size());
  if (2 * V >= m) return U;
  i64 count = 0;
  for (i64 j = 1; j <= U; ++j)
    if (in_box(a, m, seq.at(static_cast<std::size_t>(j)), V)) ++count;
  return count;
}

i64 count_poly_box(i128 a, i128 m, const IntPolynomial& f, i64 U, i128 V) {
  check_box_args(a, m, U, V, static_cast<std::size_t>(std::max<i64>(U, 0)));
  if (2 * V >= m) return U;
  i64 count = 0;
  for (i64 u = 1; u <= U; ++u)
    if (in_box(a, m, f(u), V)) ++count;
  return count;
}

FareySet farey_set(const ModuliSequence& seq, i64 Q) {
  if (Q < 1) throw PreconditionError("Q must be at least 1");
  if (static_cast<std::size_t>(2 * Q) > seq.size())
    throw PreconditionError("farey_set needs 2Q <= length of sequence");
  FareySet out;
  for (i64 j = Q; j <= 2 * Q; ++j) {
    const i128 m = seq.at(static_cast<std::size_t>(j));
    if (m > (i128(1) << 40)) throw RangeError("denominator exceeds 2^40 at j=" + std::to_string(j));
    const auto factors = arith::factorize(m);
    const i128 phi = m == 1 ? 0 : arith::euler_phi(factors);
    out.multiplicity.emplace_back(m, phi);
    if (m > (i128(1) << 31)) throw CapacityError("Farey set too large to enumerate");
    for (i128 a = 1; a < m; ++a)
      if (arith::gcd(a, m) == 1) out.points.push_back({a, m});
  }
  out.labelled_count = out.points.size();
  std::sort(out.points.begin(), out.points.end(), frac_less);
  out.points.erase(std::unique(out.points.begin(), out.points.end(), frac_equal), out.points.end());
  out.distinct_count = out.points.size();
  return out;
}

i64 spacing_count(const FareySet& set, i64 N) {
  if (N < 1) throw PreconditionError("N must be at least 1");
  const auto& p = set.points;
  const std::size_t K = p.size();
  if (K == 0) return 0;
  // backward[i] counts the points that reach i going forward within the
  // window. The width 1/(2N) is at most 1/2, so forward and backward
  // neighbours never overlap.
  std::vector<i64> diff(2 * K + 1, 0);
  std::vector<i64> forward(K, 0);
  std::size_t end = 1;  // exclusive, in doubled index space
  for (std::size_t i = 0; i < K; ++i) {
    if (end < i + 1) end = i + 1;
    while (end < i + K && forward_within(p, i, end % K, end >= K, N)) ++end;
    forward[i] = static_cast<i64>(end - i - 1);
    diff[i + 1] += 1;
    diff[end] -= 1;
  }
  std::vector<i64> backward(K, 0);
  i64 run = 0;
  for (std::size_t t = 0; t < 2 * K; ++t) {
    run += diff[t];
    backward[t % K] += run;
  }
  i64 best = 0;
  for (std::size_t i = 0; i < K; ++i) best = std::max(best, 1 + forward[i] + backward[i]);
  return best;
}

i64 spacing_count(const ModuliSequence& seq, i64 N, i64 Q) {
  return spacing_count(farey_set(seq, Q), N);
}

std::pair<i128, i128> min_torus_gap(const FareySet& set) {
  const auto& p = set.points;
  if (p.size() < 2) throw DomainError("minimum gap needs at least two points");
  i128 best_num = 1, best_den = 2;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::size_t j = (i + 1) % p.size();
    const i128 prod = p[i].denominator * p[j].denominator;
    i128 num = p[j].numerator * p[i].denominator - p[i].numerator * p[j].denominator;
    if (j == 0) num += prod;
    if (2 * num > prod) num = prod - num;
    if (num * best_den < best_num * prod) {
      best_num = num;
      best_den = prod;
    }
  }
  const i128 g = arith::gcd(best_num, best_den);
  return {best_num / g, best_den / g};
}

FracgenAudit lemma_fracgen_audit(const ModuliSequence& seq, i64 N, i64 Q, double alpha) {
  if (Q < 1 || N < 1) throw PreconditionError("Q and N must be positive");
  const double lo = std::pow(static_cast<double>(Q), alpha);
  const double hi = std::pow(static_cast<double>(Q), 2 * alpha);
  const double n = static_cast<double>(N);
  if (n < lo * (1 - 1e-12) || n > hi * (1 + 1e-12))
    throw DomainError("lemma requires Q^alpha <= N <= Q^(2 alpha)");
  FracgenAudit out;
  out.Q = Q;
  out.N = N;
  out.measured = spacing_count(seq, N, Q);
  const auto prefix = seq.prefix(static_cast<std::size_t>(Q));
  out.e_plus = additive_energy(prefix);
  out.e_star = prefix.size() >= 2 ? max_asymmetric_energy(prefix).second : 0;
  out.term1 = std::pow(static_cast<double>(out.e_plus), 0.25);
  out.term2 = std::pow(n, -0.25) * std::pow(static_cast<double>(Q), alpha / 2) *
              std::pow(static_cast<double>(out.e_star), 0.25);
  out.ratio = static_cast<double>(out.measured) / (out.term1 + out.term2);
  return out;
}

BoxesgenAudit boxesgen_audit(const ModuliSequence& seq, i128 a, i128 m, i64 U, i128 V, double alpha) {
  BoxesgenAudit out;
  out.a = a;
  out.m = m;
  out.U = U;
  out.V = V;
  out.measured = count_box_solutions(a, m, seq, U, V);
  const auto prefix = seq.prefix(static_cast<std::size_t>(U));
  const Count e_plus = additive_energy(prefix);
  const Count e_star = prefix.size() >= 2 ? max_asymmetric_energy(prefix).second : 0;
  const double md = static_cast<double>(m);
  out.rhs = std::pow(static_cast<double>(e_plus), 0.25) +
            std::pow(std::pow(static_cast<double>(U), alpha) / md + 1, 0.25) *
                std::pow(static_cast<double>(V), 0.25) * std::pow(static_cast<double>(e_star), 0.25);
  out.ratio = static_cast<double>(out.measured) / out.rhs;
  return out;
}

PolySpacingAudit poly_spacing_audit(const IntPolynomial& f, i64 N, i64 Q) {
  const int k = f.degree();
  if (k < 2) throw DomainError("polynomial spacing audit needs degree >= 2");
  PolySpacingAudit out;
  out.Q = Q;
  out.N = N;
  out.measured = spacing_count(generate_polynomial(f, 2 * Q), N, Q);
  const double kappa = std::ldexp(1.0, k - 1);
  const double q = static_cast<double>(Q);
  const double n = static_cast<double>(N);
  out.term1 = std::pow(q, k + 1) / n;
  out.term2 = std::pow(q, 1 - 1 / kappa);
  out.term3 = std::pow(q, 1 + k / kappa) * std::pow(n, -1 / kappa);
  out.ratio = static_cast<double>(out.measured) / (out.term1 + out.term2 + out.term3);
  return out;
}

std::string to_csv(const std::vector<FracgenAudit>& rows) {
  std::ostringstream os;
  os << "# schema=v1\nQ,N,measured,term1,term2,ratio\n";
  for (const auto& r : rows)
    os << r.Q << ',' << r.N << ',' << r.measured << ',' << format_double(r.term1) << ','
       << format_double(r.term2) << ',' << format_double(r.ratio) << '\n';
  return os.str();
}

}  // namespace sievebench
