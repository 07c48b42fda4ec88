#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sievebench/bound_catalog.hpp"

using namespace sievebench;

TEST_CASE("delta_exponent examples") {
  CHECK(delta_exponent(BoundId::Munsch, 2, 3) == doctest::Approx(23.0 / 6));
  CHECK(*delta_exponent_exact(BoundId::Munsch, 2, Rational(3)) == Rational(23, 6));
  CHECK(delta_exponent(BoundId::Trivial, 2, 3) == 4);
  CHECK(delta_exponent(BoundId::Conjecture, 3, 3) == 4);
  CHECK_FALSE(delta_exponent_exact(BoundId::ThmK5, 5, Rational(7)).has_value());
  CHECK_THROWS_AS(delta_exponent(BoundId::ThmK5, 4, 6), DomainError);
  CHECK_THROWS_AS(delta_exponent(BoundId::BaierZhaoK3, 4, 6), DomainError);
}

TEST_CASE("kappa and omega") {
  CHECK(kappa(5) == 16);
  CHECK(omega(3) == Rational(1, 4));
  CHECK(omega(2) == Rational(1, 2));
  CHECK_THROWS_AS(kappa(1), DomainError);
  CHECK_THROWS_AS(omega(1), DomainError);
}

TEST_CASE("bound ids round trip") {
  for (BoundId id : all_bounds()) CHECK(parse_bound_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_bound_id("nope"), ValidationError);
  CHECK_FALSE(bound_proven(BoundId::Conjecture));
  CHECK(bound_proven(BoundId::Munsch));
}

TEST_CASE("crossover claims") {
  for (int k : {5, 6}) {
    const auto r = crossover_report(k);
    REQUIRE(r.sigma.has_value());
    CHECK(*r.sigma >= r.tau);
  }
  for (int k = 7; k <= 12; ++k) {
    const auto r = crossover_report(k);
    REQUIRE(r.sigma.has_value());
    CHECK(*r.sigma < r.tau);
  }
  for (int k = 8; k <= 30; ++k) CHECK(std::abs(crossover_report(k).lambda - (2 * k - 2)) <= 10.0 / k);
  CHECK_FALSE(crossover_report(4).sigma.has_value());
  const auto j = to_json(crossover_report(7));
  for (const char* key : {"k", "lambda", "mu", "sigma", "tau"}) CHECK(j.contains(key));
}

TEST_CASE("crossover endpoints solve the defining equality") {
  for (int k = 5; k <= 12; ++k) {
    const auto r = crossover_report(k);
    CHECK(std::abs(delta_exponent(BoundId::ThmK5, k, *r.sigma) - delta_exponent(BoundId::Munsch, k, *r.sigma)) <= 1e-9);
    CHECK(std::abs(delta_exponent(BoundId::Munsch, k, r.lambda) - delta_exponent(BoundId::BaierZhao, k, r.lambda)) <=
          1e-9);
  }
  oracle::Gen g(31);
  const auto& ids = all_bounds();
  for (int trial = 0; trial < 200; ++trial) {
    const int k = static_cast<int>(g.range(2, 12));
    const BoundId a = ids[static_cast<std::size_t>(g.range(0, static_cast<i64>(ids.size()) - 1))];
    const BoundId b = ids[static_cast<std::size_t>(g.range(0, static_cast<i64>(ids.size()) - 1))];
    if (!bound_valid(a, k) || !bound_valid(b, k)) continue;
    const double lo = k, hi = 2.0 * k;
    for (const auto& iv : crossover(a, b, k, lo, hi)) {
      CHECK(iv.lo < iv.hi);
      const double mid = (iv.lo + iv.hi) / 2;
      CHECK(delta_exponent(a, k, mid) < delta_exponent(b, k, mid));
      for (double e : {iv.lo, iv.hi})
        if (e > lo && e < hi) CHECK(std::abs(delta_exponent(a, k, e) - delta_exponent(b, k, e)) <= 1e-9);
    }
  }
}

TEST_CASE("winner_map") {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(7 + 7.0 * i / 200);
  bool thm_wins = false;
  for (const auto& w : winner_map(7, grid)) {
    CHECK(bound_proven(w.id));
    double best = 1e300;
    for (BoundId id : all_bounds())
      if (bound_proven(id) && bound_valid(id, 7)) best = std::min(best, delta_exponent(id, 7, w.nu));
    CHECK(w.exponent == best);
    if (w.id == BoundId::ThmK5) thm_wins = true;
  }
  CHECK(thm_wins);
  for (const auto& w : winner_map(5, {5.0})) CHECK(w.id != BoundId::Conjecture);
  for (const auto& w : winner_map(2, grid)) {
    CHECK(w.id != BoundId::ThmK5);
    CHECK(w.id != BoundId::ThmEnergy);
  }
}

TEST_CASE("conjecture is below every proven bound on the critical range") {
  for (int k = 2; k <= 12; ++k)
    for (int i = 0; i <= 400; ++i) {
      const double nu = k + k * i / 400.0;
      const double c = delta_exponent(BoundId::Conjecture, k, nu);
      for (BoundId id : all_bounds())
        if (bound_proven(id) && bound_valid(id, k)) CHECK(c <= delta_exponent(id, k, nu) + 1e-12);
    }
}

TEST_CASE("exact and double evaluators agree") {
  oracle::Gen g(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = static_cast<int>(g.range(2, 12));
    const Rational nu(g.range(k * 24, 2 * k * 24), 24);
    for (BoundId id : all_bounds()) {
      if (!bound_valid(id, k)) continue;
      const auto ex = delta_exponent_exact(id, k, nu);
      if (!ex) continue;
      const double d = delta_exponent(id, k, boost::rational_cast<double>(nu));
      CHECK(boost::rational_cast<double>(*ex) == doctest::Approx(d).epsilon(1e-14));
    }
  }
}

TEST_CASE("phi_alpha") {
  CHECK(phi_alpha_exact(Rational(2)) == Rational(13, 28));
  CHECK(phi_alpha_exact(Rational(26, 23)) == Rational(13, 28));
  CHECK(phi_alpha_exact(Rational(3, 2)) == Rational(13, 28));
  CHECK(phi_alpha(1.5) == doctest::Approx(13.0 / 28));
  CHECK_THROWS_AS(phi_alpha(1.0), DomainError);
  CHECK_THROWS_AS(phi_alpha(2.25), DomainError);
  for (const Rational& b : {kPhiBreak1, kPhiBreak2, kPhiBreak3}) {
    const auto [l, r] = phi_alpha_limits(b);
    CHECK(l == r);
    CHECK(l == phi_alpha_exact(b));
  }
  for (int i = 1; i < 5000; ++i) CHECK(phi_alpha(1 + 1.25 * i / 5000) > 0.45);
}

TEST_CASE("composition identity") {
  CHECK(composition_identity_check(5, {5, 6, 7, 8, 9, 10}));
  CHECK(composition_identity_check(9, {9, 12, 15, 18}));
  CHECK_THROWS_AS(composition_identity_check(4, {4, 6}), DomainError);
}
