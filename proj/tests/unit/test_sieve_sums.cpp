#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sievebench/arith.hpp"
#include "sievebench/moduli.hpp"
#include "sievebench/sieve_sums.hpp"

using namespace sievebench;

namespace {
std::vector<i128> v(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }

// The quadratic form by definition, in long double.
long double form_oracle(const CoefficientVector& c, const std::vector<i128>& moduli) {
  long double total = 0;
  for (i128 m : moduli)
    for (i128 a = 1; a <= m; ++a)
      if (oracle::gcd(a, m) == 1) total += oracle::point_value(c.values, c.M, a, m);
  return total;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("coefficient vectors") {
  const auto ones = CoefficientVector::ones(3, 5);
  CHECK(ones.N() == 5);
  CHECK(ones.norm_sq() == 5.0);
  const auto r1 = CoefficientVector::random(0, 20, 9);
  const auto r2 = CoefficientVector::random(0, 20, 9);
  CHECK(r1.values == r2.values);
  for (auto z : r1.values) CHECK(std::abs(z) <= 1.0);
}

TEST_CASE("sieve_sum_naive examples") {
  const auto sq = generate_power(2, 3);
  const auto r = sieve_sum_naive(CoefficientVector::ones(0, 1), sq, 3);
  CHECK(r.total == doctest::Approx(9.0));
  CHECK(r.ratio == doctest::Approx(9.0));
  CoefficientVector zero{0, std::vector<Complex>(4, 0.0)};
  CHECK(sieve_sum_naive(zero, sq, 3).total == 0.0);
  const auto two = ModuliSequence::explicit_values(v({2}));
  CHECK(std::abs(sieve_sum_naive(CoefficientVector::ones(5, 2), two, 1).total) < 1e-24);
  CHECK_THROWS_AS(sieve_sum_naive(CoefficientVector::ones(0, 100), generate_power(3, 50), 50, 1e4),
                  CapacityError);
}

TEST_CASE("sieve_sum_fast examples") {
  const auto c = CoefficientVector::random(7, 30, 3);
  const auto p = ModuliSequence::explicit_values(v({13}));
  // prime modulus: p * sum |bucket|^2 - |sum a_n|^2
  std::vector<Complex> buckets(13);
  Complex all = 0;
  for (i64 i = 0; i < c.N(); ++i) {
    buckets[static_cast<std::size_t>((c.M + 1 + i) % 13)] += c.values[static_cast<std::size_t>(i)];
    all += c.values[static_cast<std::size_t>(i)];
  }
  double b2 = 0;
  for (auto b : buckets) b2 += std::norm(b);
  CHECK(rel_close(sieve_sum_fast(c, p, 1).total, 13 * b2 - std::norm(all), 1e-12));
  const auto sq = generate_power(2, 6);
  const Complex a0{0.6, -0.8};
  CoefficientVector single{4, {a0}};
  CHECK(rel_close(sieve_sum_fast(single, sq, 6).total, (1 + 2 + 6 + 8 + 20 + 12) * std::norm(a0), 1e-12));
}

TEST_CASE("property: naive, fast and the definition agree") {
  oracle::Gen g(808);
  for (int trial = 0; trial < 40; ++trial) {
    const i64 N = g.range(1, 64);
    const i64 M = g.range(-50, 1000);
    const auto c = CoefficientVector::random(M, N, static_cast<u64>(trial));
    const i64 Q = g.range(1, 8);
    const int kind = trial % 3;
    const auto seq = kind == 0   ? generate_power(2, Q)
                     : kind == 1 ? generate_power(4, Q)
                                 : ModuliSequence::explicit_values(g.set(static_cast<int>(Q) + 3, 1, 10000));
    const i64 q = std::min<i64>(Q, static_cast<i64>(seq.size()));
    const auto naive = sieve_sum_naive(c, seq, q);
    const auto fast = sieve_sum_fast(c, seq, q, 1 + trial % 2);
    CHECK(rel_close(fast.total, naive.total, 1e-9));
    CHECK(rel_close(naive.total, static_cast<double>(form_oracle(c, seq.prefix(static_cast<std::size_t>(q)))), 1e-9));
    CHECK(naive.total >= 0);
    for (const auto& [m, part] : fast.per_modulus) CHECK(part >= -1e-9 * std::max(1.0, naive.total));
  }
}

TEST_CASE("property: Parseval closure and divisor reassembly") {
  oracle::Gen g(909);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = CoefficientVector::random(g.range(0, 100), g.range(1, 60), static_cast<u64>(100 + trial));
    const i128 m = g.range(1, 360);
    const double full = full_form_naive(c, m);
    CHECK(rel_close(full_form_buckets(c, m), full, 1e-9));
    double by_divisor = 0;
    for (i128 d : arith::divisors(arith::factorize(m))) {
      const double cp = coprime_form_fast(c, d);
      CHECK(rel_close(cp, coprime_form_naive(c, d), 1e-9));
      by_divisor += cp;
    }
    CHECK(rel_close(by_divisor, full, 1e-9));
  }
}

TEST_CASE("property: scaling leaves the ratio unchanged") {
  oracle::Gen g(111);
  const auto seq = generate_power(3, 6);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = CoefficientVector::random(0, 40, static_cast<u64>(trial));
    const auto base = sieve_sum_fast(c, seq, 6);
    const Complex s{g.unit() * 10 - 5, g.unit() * 10 - 5};
    for (auto& z : c.values) z *= s;
    CHECK(rel_close(sieve_sum_fast(c, seq, 6).ratio, base.ratio, 1e-12));
  }
}

TEST_CASE("estimate_sieve_constant examples") {
  const auto two = ModuliSequence::explicit_values(v({2}));
  const auto e = estimate_sieve_constant(two, 1, 1, 0);
  CHECK(e.delta_star_lower == doctest::Approx(1.0).epsilon(1e-12));
  const auto sq = generate_power(2, 5);
  SieveConstantOptions opt;
  opt.seed = 42;
  const auto r = estimate_sieve_constant(sq, 5, 30, 0, opt);
  CHECK(r.delta_star_lower >= 30 - opt.tol);
  CHECK(r.delta_star_lower >= static_cast<double>(r.node_count) - opt.tol);
  CHECK(r.certificate == std::max<double>(30, static_cast<double>(r.node_count)));
}

TEST_CASE("property: power iteration is monotone and certified") {
  oracle::Gen g(222);
  for (int trial = 0; trial < 24; ++trial) {
    const int k = static_cast<int>(g.range(1, 3));
    const i64 Q = g.range(1, 6);
    const i64 N = g.range(1, 80);
    SieveConstantOptions opt;
    opt.seed = static_cast<u64>(trial + 1);
    opt.tol = 1e-9;
    opt.max_iter = 150;
    opt.threads = 1 + trial % 2;
    const auto seq = generate_power(k, Q);
    const auto r = estimate_sieve_constant(seq, Q, N, g.range(0, 50), opt);
    for (std::size_t i = 1; i < r.history.size(); ++i)
      CHECK(r.history[i] >= r.history[i - 1] * (1 - 1e-12) - 1e-12);
    CHECK(r.delta_star_lower >= r.certificate - opt.tol);
    // never above the trivial bound sum_j m_j + N over nodes of the form
    double cap = 0;
    for (i128 m : seq.values()) cap += static_cast<double>(m);
    CHECK(r.delta_star_lower <= (cap + static_cast<double>(N)) * static_cast<double>(Q) + 1e-6);
  }
}

TEST_CASE("estimate matches the Rayleigh quotient of an explicit witness") {
  // Delta* is the largest eigenvalue; every coefficient vector gives a lower bound.
  const auto seq = generate_power(2, 4);
  SieveConstantOptions opt;
  opt.tol = 1e-12;
  opt.max_iter = 2000;
  const auto r = estimate_sieve_constant(seq, 4, 20, 0, opt);
  for (u64 s = 1; s <= 10; ++s) {
    const auto c = CoefficientVector::random(0, 20, s);
    CHECK(sieve_sum_naive(c, seq, 4).ratio <= r.delta_star_lower * (1 + 1e-9));
  }
}

TEST_CASE("bound_audit rows") {
  SieveConstantOptions opt;
  opt.tol = 1e-7;
  opt.max_iter = 100;
  const auto a = bound_audit(AuditFamily::monomial(2), {{3, 2.0}, {4, 2.0}}, opt);
  REQUIRE(a.rows.size() == 2);
  for (const auto& row : a.rows) {
    CHECK(row.measured >= static_cast<double>(row.N) - 1e-6);
    CHECK(row.N == row.Q * row.Q);
    CHECK(row.in_range);
  }
  const auto flagged = bound_audit(AuditFamily::monomial(2), {{3, 1.0}}, opt);
  CHECK_FALSE(flagged.rows.at(0).in_range);
  const auto ps = bound_audit(AuditFamily::piatetski_shapiro(Exponent::from_double(1.5)), {{16, 1.5}}, opt);
  CHECK(ps.rows.size() == 1);
  CHECK(to_csv(a).rfind("# schema=v1\nfamily,k_or_alpha,Q,nu,N,measured,rhs_term1,rhs_term2,fitted_C,in_range\n", 0) == 0);
}
