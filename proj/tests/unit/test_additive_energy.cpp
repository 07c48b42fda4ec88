#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sievebench/additive_energy.hpp"
#include "sievebench/moduli.hpp"

using namespace sievebench;

namespace {
std::vector<i128> v(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }

std::vector<i128> sidon(oracle::Gen& g, int n) {
  std::vector<i128> s;
  while (static_cast<int>(s.size()) < n) {
    const i128 c = g.range(1, 5000);
    bool ok = std::find(s.begin(), s.end(), c) == s.end();
    // every new sum c + x must avoid the old sums a + b
    auto with_c = s;
    with_c.push_back(c);
    for (auto x : with_c)
      for (auto a : s)
        for (auto b : s)
          if (c + x == a + b) ok = false;
    if (ok) s.push_back(c);
  }
  std::sort(s.begin(), s.end());
  return s;
}
}  // namespace

TEST_CASE("energy_oracle examples") {
  CHECK(energy_oracle(v({1, 2})).e_plus == 6);
  const auto single = energy_oracle(v({5}));
  CHECK(single.e_plus == 1);
  CHECK(single.e_star == 0);
  CHECK(energy_oracle(v({1, 2, 5, 11})).e_plus == 28);
  std::vector<i128> big(65);
  for (int i = 0; i < 65; ++i) big[i] = i;
  CHECK_THROWS_AS(energy_oracle(big), CapacityError);
}

TEST_CASE("additive_energy examples") {
  CHECK(additive_energy(v({1, 4, 9, 16})) == 28);
  CHECK(additive_energy(v({1, 2})) == 6);
  CHECK(additive_energy(v({-40})) == 1);
}

TEST_CASE("asymmetric_energy examples") {
  CHECK(asymmetric_energy(v({1, 4, 9, 16}), 0) == 28);
  CHECK(asymmetric_energy(v({1, 2}), 1) == 4);
  CHECK(asymmetric_energy(v({1, 2}), 10) == 0);
}

TEST_CASE("max_asymmetric_energy examples") {
  CHECK(max_asymmetric_energy(v({1, 2})) == std::pair<i128, Count>{1, 4});
  const auto sq = v({1, 4, 9, 16});
  const auto [h, e] = max_asymmetric_energy(sq);
  CHECK(e <= 28);
  CHECK(e == asymmetric_energy(sq, h));
  CHECK(max_asymmetric_energy(v({1, 2, 5, 11})).second <= 28);
  CHECK_THROWS_AS(max_asymmetric_energy(v({3})), DomainError);
}

TEST_CASE("energy_fast examples") {
  for (auto b : {EnergyBackend::Sparse, EnergyBackend::Dense}) CHECK(energy_fast(v({1, 4, 9, 16}), b).e_plus == 28);
  CHECK(energy_fast(v({1, 2}), EnergyBackend::Dense).e_plus == 6);
  CHECK_THROWS_AS(energy_fast(v({0, i128(1) << 27}), EnergyBackend::Dense), CapacityError);
}

TEST_CASE("property: all backends agree with the quadruple oracle") {
  oracle::Gen g(101);
  for (int trial = 0; trial < 150; ++trial) {
    const auto s = g.set(static_cast<int>(g.range(2, 10)), -30, 30);
    if (s.size() < 2) continue;
    const auto [h_ref, e_ref] = oracle::energy_star(s);
    const Count ep = oracle::energy_quadruples(s, 0);
    const auto o = energy_oracle(s);
    CHECK(o.e_plus == ep);
    CHECK(additive_energy(s) == ep);
    for (auto b : {EnergyBackend::Sparse, EnergyBackend::Dense}) {
      EnergyOptions opt;
      opt.threads = 1 + trial % 3;
      const auto r = energy_fast(s, b, opt);
      CHECK(r.e_plus == ep);
      CHECK(r.e_star == e_ref);
      REQUIRE(r.h_star.has_value());
      CHECK(*r.h_star == h_ref);
    }
    CHECK(o.e_star == e_ref);
    CHECK(*o.h_star == h_ref);
  }
}

TEST_CASE("property: shift symmetry and Cauchy-Schwarz") {
  oracle::Gen g(202);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = g.set(static_cast<int>(g.range(1, 12)), 0, 60);
    const Count e = additive_energy(s);
    for (i128 h = -130; h <= 130; ++h) {
      const Count eh = asymmetric_energy(s, h);
      CHECK(eh == asymmetric_energy(s, -h));
      CHECK(eh <= e);
    }
  }
}

TEST_CASE("property: Sidon sets have energy 2n^2 - n") {
  oracle::Gen g(303);
  for (int n = 1; n <= 9; ++n) {
    const auto s = sidon(g, n);
    CHECK(additive_energy(s) == static_cast<Count>(2 * n * n - n));
  }
}

TEST_CASE("property: representation function sums") {
  oracle::Gen g(404);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = g.set(static_cast<int>(g.range(1, 30)), -100, 100);
    RepresentationFunction r(s);
    CHECK(r.total() == s.size() * s.size());
    CHECK(r.sum_of_squares() == additive_energy(s));
  }
}

TEST_CASE("property: trivial bound for powers") {
  for (int k = 2; k <= 4; ++k)
    for (i64 U : {5, 20, 60}) {
      const auto s = generate_power(k, U).values();
      const Count e = additive_energy(s);
      CHECK(e <= static_cast<Count>(U * U * U));
      CHECK(max_asymmetric_energy(s).second <= e);
    }
}

TEST_CASE("thread count does not change reports") {
  const auto s = generate_power(3, 80).values();
  EnergyOptions one, four;
  four.threads = 4;
  four.sparse_chunk_pairs = 4096;
  const auto a = energy_fast(s, EnergyBackend::Sparse, one);
  const auto b = energy_fast(s, EnergyBackend::Sparse, four);
  CHECK(a.e_plus == b.e_plus);
  CHECK(a.e_star == b.e_star);
  CHECK(a.h_star == b.h_star);
}

TEST_CASE("serialization") {
  const auto r = energy_oracle(v({1, 2}));
  const auto j = to_json(r);
  CHECK(j["e_plus"] == 6);
  CHECK(j["e_star"] == 4);
  CHECK(h_table_csv(r).find("-1,4") != std::string::npos);
}
