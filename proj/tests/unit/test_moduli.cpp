#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sievebench/arith.hpp"
#include "sievebench/moduli.hpp"
#include "sievebench/real_power.hpp"

using namespace sievebench;

namespace {
std::vector<i128> v(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }
}  // namespace

TEST_CASE("arith basics") {
  CHECK(arith::gcd(12, 18) == 6);
  CHECK(arith::mod(-3, 7) == 4);
  CHECK(arith::centered_mod(4, 8) == 4);
  CHECK(arith::centered_mod(5, 8) == -3);
  CHECK(arith::euler_phi(36) == 12);
  CHECK(arith::moebius(30) == -1);
  CHECK(arith::moebius(12) == 0);
  CHECK(arith::integer_root(80, 4) == 2);
  CHECK(arith::integer_root(81, 4) == 3);
  CHECK_THROWS_AS(arith::checked_pow(10, 40), RangeError);
  oracle::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    const u64 n = static_cast<u64>(g.range(1, 5000));
    CHECK(arith::euler_phi(static_cast<i128>(n)) == static_cast<i128>(oracle::phi(n)));
  }
}

TEST_CASE("certified floors agree with exact integer roots") {
  for (auto [p, q] : std::vector<std::pair<unsigned, unsigned>>{{3, 2}, {6, 5}, {5, 4}, {7, 3}, {9, 4}}) {
    const auto alpha = Exponent::rational(p, q);
    for (u64 j = 1; j <= 3000; j += 7) {
      const auto f = certified_floor_power(static_cast<i128>(j), alpha);
      CHECK(oracle::BigInt(static_cast<long long>(f.floor)) == oracle::floor_rational_power(j, p, q));
    }
  }
}

TEST_CASE("exponent parsing") {
  CHECK(Exponent::parse("3/2").is_rational());
  CHECK(Exponent::parse("1.5").numerator() == 3);
  CHECK(Exponent::parse("1.5").denominator() == 2);
  CHECK(Exponent::parse("2").value() == 2.0);
  CHECK_FALSE(Exponent::from_double(std::sqrt(2.0) + 1).is_rational());
}

TEST_CASE("generate_power") {
  CHECK(generate_power(2, 4).values() == v({1, 4, 9, 16}));
  CHECK(generate_power(1, 3).values() == v({1, 2, 3}));
  CHECK(generate_power(5, 3).values() == v({1, 32, 243}));
  CHECK_THROWS_AS(generate_power(20, 100), RangeError);
}

TEST_CASE("generate_polynomial") {
  CHECK(generate_polynomial(IntPolynomial({0, 0, 1}), 4).values() == v({1, 4, 9, 16}));
  CHECK(generate_polynomial(IntPolynomial({1, 1, 1}), 3).values() == v({3, 7, 13}));
  CHECK_THROWS_AS(generate_polynomial(IntPolynomial({0, -10, 1}), 3), ValidationError);
}

TEST_CASE("generate_piatetski_shapiro") {
  CHECK(generate_piatetski_shapiro(Exponent::from_double(1.5), 5).values() == v({1, 2, 5, 8, 11}));
  CHECK(generate_piatetski_shapiro(Exponent::from_double(2.0), 4).values() == v({1, 4, 9, 16}));
  CHECK(generate_piatetski_shapiro(Exponent::from_double(1.2), 4).values() == v({1, 2, 3, 5}));
  CHECK_THROWS_AS(generate_piatetski_shapiro(Exponent::from_double(1.0), 4), DomainError);
}

TEST_CASE("window") {
  CHECK(window(Exponent::from_double(2), 10).members == v({16}));
  CHECK(window(Exponent::from_double(1.5), 8).members == v({8, 11, 14}));
  CHECK(window(Exponent::from_double(1.5), 8).indices == std::vector<i64>{4, 5, 6});
  CHECK(window(Exponent::from_double(2), 1).members == v({1}));
}

TEST_CASE("is_convex") {
  CHECK(is_convex(ModuliSequence::explicit_values(v({1, 4, 9, 16}))));
  CHECK_FALSE(is_convex(ModuliSequence::explicit_values(v({1, 2, 3, 4}))));
  CHECK_FALSE(is_convex(ModuliSequence::explicit_values(v({1, 2, 5, 8}))));
  CHECK_THROWS_AS(is_convex(ModuliSequence::explicit_values(v({1, 2}))), DomainError);
}

TEST_CASE("growth_exponent") {
  CHECK(growth_exponent(generate_power(3, 64)) == doctest::Approx(3.0).epsilon(0.01 / 3));
  CHECK(std::abs(growth_exponent(generate_piatetski_shapiro(Exponent::from_double(1.5), 256)) - 1.5) <= 0.02);
  std::vector<i128> lin;
  for (int i = 1; i <= 20; ++i) lin.push_back(i);
  CHECK(std::abs(growth_exponent(ModuliSequence::explicit_values(lin)) - 1.0) <= 0.05);
}

TEST_CASE("property: power sequences equal X^k polynomials") {
  for (int k = 1; k <= 6; ++k) {
    std::vector<i64> c(static_cast<std::size_t>(k + 1), 0);
    c.back() = 1;
    for (i64 Q : {1, 17, 100})
      CHECK(generate_power(k, Q).values() == generate_polynomial(IntPolynomial(c), Q).values());
  }
}

TEST_CASE("property: integer alpha reduces to powers") {
  for (int m = 2; m <= 5; ++m)
    CHECK(generate_piatetski_shapiro(Exponent::from_double(m), 60).values() == generate_power(m, 60).values());
}

TEST_CASE("property: window equals filtered PS sequence") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 60; ++trial) {
    const double a = 1.05 + 1.4 * g.unit();
    const auto alpha = Exponent::from_double(a);
    const i64 R = g.range(1, 20000);
    i64 J = 1;
    while (std::pow(static_cast<double>(J), a) <= 2.0 * R + 2) ++J;
    const auto seq = generate_piatetski_shapiro(alpha, J + 1);
    std::vector<i128> expect;
    for (i128 m : seq.values())
      if (m >= R && m <= 2 * R) expect.push_back(m);
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    const auto w = window(alpha, R);
    CHECK(w.members == expect);
    for (std::size_t i = 0; i < w.members.size(); ++i)
      CHECK(certified_floor_power(w.indices[i], alpha).floor == w.members[i]);
  }
}

TEST_CASE("property: powers are convex") {
  for (int k = 2; k <= 6; ++k)
    for (i64 Q : {3, 10, 50}) CHECK(is_convex(generate_power(k, Q)));
}

TEST_CASE("serialization") {
  const auto s = generate_power(2, 3);
  CHECK(to_csv(s).find("m_j\n1\n4\n9\n") != std::string::npos);
  const auto j = to_json(s);
  CHECK(j["values"].size() == 3);
  CHECK(j.contains("kind"));
  CHECK(j.contains("params"));
}
