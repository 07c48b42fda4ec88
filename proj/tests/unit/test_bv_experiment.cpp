#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "sievebench/bv_experiment.hpp"
#include "sievebench/moduli.hpp"

using namespace sievebench;

namespace {
Exponent A(double a) { return Exponent::from_double(a); }

const PrimeTable& table() {
  static const PrimeTable t = PrimeTable::build(100000);
  return t;
}

u64 largest_square_divisor(u64 n) {
  u64 out = 1;
  for (u64 p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) out *= p * p;
  }
  return out;
}
}  // namespace

TEST_CASE("prime table basics") {
  const auto t = PrimeTable::build(10);
  CHECK(t.primes(10) == std::vector<u64>{2, 3, 5, 7});
  CHECK(t.mangoldt(8) == std::log(2.0));
  CHECK(t.mangoldt(9) == std::log(3.0));
  CHECK(t.mangoldt(6) == 0.0);
  CHECK(t.mangoldt(1) == 0.0);
  CHECK(PrimeTable::build(1).prime_count(1) == 0);
  CHECK(PrimeTable::build(1'000'000).prime_count(1'000'000) == 78498);
  CHECK_THROWS_AS(PrimeTable::build(1000, 100), CapacityError);
  CHECK_THROWS_AS(t.is_prime(11), RangeError);
}

TEST_CASE("property: table agrees with trial division") {
  const auto& t = table();
  for (u64 n = 1; n <= 20000; ++n) {
    CHECK(t.is_prime(n) == oracle::is_prime(n));
    const double lam = oracle::mangoldt(n);
    CHECK(t.mangoldt(n) == lam);
    CHECK((t.mangoldt(n) > 0) == (lam > 0));
  }
  const auto pp = t.prime_powers(1000);
  for (const auto& [n, l] : pp) CHECK(l == oracle::mangoldt(n));
}

TEST_CASE("cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "sievebench_unit_cache";
  std::filesystem::remove_all(dir);
  const auto a = PrimeTable::load_or_build(dir, 5000);
  CHECK(std::filesystem::exists(dir / "primes_5000.sbpt"));
  const auto b = PrimeTable::load_or_build(dir, 5000);
  CHECK(b.x_max() == 5000);
  CHECK(b.primes(5000) == a.primes(5000));
  {
    std::ofstream bad(dir / "junk.sbpt", std::ios::binary);
    bad << "nope";
  }
  CHECK_THROWS_AS(PrimeTable::load(dir / "junk.sbpt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("progression sums") {
  const auto t = PrimeTable::build(10);
  CHECK(lambda_sum_progression(t, 10, 4, 1) == doctest::Approx(std::log(5.0) + std::log(3.0)));
  CHECK(lambda_sum_progression(t, 10, 4, 1) == doctest::Approx(2.7081).epsilon(1e-4));
  CHECK(lambda_sum_progression(t, 10, 1, 1) == doctest::Approx(7.8320).epsilon(1e-4));
  CHECK(lambda_sum_progression(t, 2, 5, 3) == 0.0);
  CHECK(error_term(t, 10, 1, 1) == doctest::Approx(-2.1680).epsilon(1e-4));
  CHECK(error_term(t, 10, 4, 1) == doctest::Approx(-2.2919).epsilon(1e-4));
  CHECK(error_term(t, 10, 13, 11) == -10.0 / 12);
  CHECK(error_term(t, 10, 13, 5) == doctest::Approx(std::log(5.0) - 10.0 / 12));
  CHECK_THROWS_AS(error_term(t, 10, 4, 2), PreconditionError);
}

TEST_CASE("worst_residue") {
  const auto t = PrimeTable::build(10);
  const auto w1 = worst_residue(t, 10, 1);
  CHECK(w1.a_star == 1);
  CHECK(w1.E == doctest::Approx(psi_ascending(t, 10).value() - 10));
  const auto w2 = worst_residue(t, 10, 2);
  CHECK(w2.a_star == 1);
  CHECK(w2.E == doctest::Approx(2 * std::log(3.0) + std::log(5.0) + std::log(7.0) - 10));
  CHECK(worst_residue(t, 10, 4).a_star == 1);
}

TEST_CASE("property: worst residue is the maximum over reduced residues") {
  const auto& t = table();
  oracle::Gen g(55);
  for (int trial = 0; trial < 60; ++trial) {
    const u64 x = static_cast<u64>(g.range(10, 100000));
    const u64 q = static_cast<u64>(g.range(1, 300));
    const auto w = worst_residue(t, x, q);
    double best = -1;
    u64 arg = 0;
    for (u64 a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double e = std::abs(error_term(t, x, q, a));
      if (e > best) {
        best = e;
        arg = a;
      }
    }
    CHECK(w.a_star == arg);
    CHECK(std::abs(w.E) == best);
  }
}

TEST_CASE("property: partition identity and traversal order") {
  const auto& t = table();
  for (u64 x : {100ULL, 1000ULL, 10000ULL})
    for (u64 q = 1; q <= 50; ++q) CHECK(partition_identity_holds(t, x, q));
  for (u64 x : {1000ULL, 10000ULL, 100000ULL}) CHECK(psi_ascending(t, x) == psi_descending(t, x));
  // the oracle sum agrees to rounding
  long double psi = 0;
  for (u64 n = 1; n <= 10000; ++n) psi += oracle::mangoldt(n);
  CHECK(psi_ascending(t, 10000).value() == doctest::Approx(static_cast<double>(psi)).epsilon(1e-13));
}

TEST_CASE("LogSum is order independent") {
  LogSum a, b;
  oracle::Gen g(66);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::log(static_cast<double>(g.range(2, 1 << 30))));
  for (double x : xs) a.add(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) b.add(*it);
  CHECK(a == b);
  CHECK_THROWS_AS(a.add(0.25), DomainError);
}

TEST_CASE("bv_sum") {
  const auto t = PrimeTable::build(1000);
  const auto r = bv_sum(t, A(2), 1000, 10);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].q == 16);
  CHECK(r.rows[0].phi_q == 8);
  CHECK(r.M_alpha == std::abs(r.rows[0].E));
  CHECK_THROWS_AS(bv_sum(t, A(2), 1000, 2000), PreconditionError);
  const auto csv = to_csv(r);
  CHECK(csv.rfind("# schema=v1\nq,phi_q,a_star,E,abs_E\n", 0) == 0);
  const auto j = to_json(r);
  CHECK(j["window_size"] == 1);
}

TEST_CASE("property: bv rows are worst residues and deterministic") {
  const auto& t = table();
  const auto alpha = A(1.2);
  const u64 x = 100000;
  const u64 R = static_cast<u64>(std::floor(std::pow(1e5, 0.4)));
  const auto r1 = bv_sum(t, alpha, x, R, 1);
  const auto r2 = bv_sum(t, alpha, x, R, 3);
  CHECK(to_csv(r1) == to_csv(r2));
  CHECK(std::isfinite(r1.rho));
  double M = 0;
  for (const auto& row : r1.rows) {
    const auto w = worst_residue(t, x, row.q);
    CHECK(row.a_star == w.a_star);
    CHECK(row.E == w.E);
    CHECK(row.phi_q == oracle::phi(row.q));
    M += std::abs(row.E);
    CHECK(std::abs(row.E) * static_cast<double>(row.phi_q) / static_cast<double>(x) <= 2.0);
  }
  CHECK(r1.M_alpha == doctest::Approx(M).epsilon(1e-14));
  const auto w = window(alpha, static_cast<i64>(R));
  CHECK(r1.rows.size() == w.members.size());
}

TEST_CASE("ps_largest_divisor") {
  CHECK(ps_largest_divisor(12, A(2)) == 4);
  CHECK(ps_largest_divisor(1, A(1.7)) == 1);
  CHECK(ps_largest_divisor(11, A(1.5)) == 11);
  for (u64 n = 1; n <= 10000; ++n) CHECK(ps_largest_divisor(n, A(2)) == largest_square_divisor(n));
}

TEST_CASE("shifted_prime_search") {
  const auto t = PrimeTable::build(100);
  const auto s = shifted_prime_search(t, A(2), 0.3, 100);
  bool has37 = false;
  for (auto [p, d] : s.hits)
    if (p == 37) has37 = d == 36;
  CHECK(has37);
  CHECK(s.warning.empty());
  CHECK(shifted_prime_search(t, A(2), 0.0, 100).hits.size() == 25);
  const auto hi = shifted_prime_search(t, A(2), 0.99, 100);
  CHECK_FALSE(hi.warning.empty());
  for (auto [p, d] : hi.hits) {
    CHECK(d == largest_square_divisor(p - 1));
    CHECK(static_cast<double>(d) >= std::pow(static_cast<double>(p), 0.99));
  }
  std::vector<u64> expect;
  for (u64 p = 2; p <= 100; ++p)
    if (oracle::is_prime(p) && static_cast<double>(largest_square_divisor(p - 1)) >= std::pow(static_cast<double>(p), 0.99))
      expect.push_back(p);
  CHECK(hi.hits.size() == expect.size());
}
