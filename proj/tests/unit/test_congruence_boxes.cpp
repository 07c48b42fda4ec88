#include <doctest.h>

#include "oracles.hpp"
#include "sievebench/congruence_boxes.hpp"
#include "sievebench/moduli.hpp"

using namespace sievebench;

namespace {
std::vector<i128> v(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }

// Box count by listing the window residues {-V..V} mod m.
i64 box_oracle(i128 a, i128 m, const std::vector<i128>& ms, i128 V) {
  i64 c = 0;
  for (i128 x : ms) {
    const i128 r = ((a * x) % m + m) % m;
    bool hit = false;
    for (i128 w = -V; w <= V && !hit; ++w) hit = ((w % m) + m) % m == r;
    c += hit;
  }
  return c;
}

std::vector<i128> window_moduli(const ModuliSequence& s, i64 Q) {
  return {s.values().begin() + (Q - 1), s.values().begin() + 2 * Q};
}
}  // namespace

TEST_CASE("torus distance") {
  CHECK(torus_distance(0.25) == 0.25);
  CHECK(torus_distance(0.75) == 0.25);
  CHECK(torus_distance(-0.3) == doctest::Approx(0.3));
  CHECK(torus_distance(3.0) == 0.0);
}

TEST_CASE("count_box_solutions examples") {
  const auto sq = generate_power(2, 10);
  CHECK(count_box_solutions(1, 7, sq, 5, 1) == 1);
  CHECK(count_box_solutions(3, 7, sq, 9, 4) == 9);
  CHECK(count_box_solutions(1, 5, sq, 4, 0) == 0);
  CHECK_THROWS_AS(count_box_solutions(2, 4, sq, 4, 1), PreconditionError);
}

TEST_CASE("count_poly_box examples") {
  CHECK(count_poly_box(1, 7, IntPolynomial({0, 0, 1}), 5, 1) == 1);
  CHECK(count_poly_box(1, 10, IntPolynomial({0, 1}), 10, 2) == 5);
  CHECK(count_poly_box(3, 11, IntPolynomial({1, 2, 1}), 30, 6) == 30);
}

TEST_CASE("farey_set examples") {
  const auto sq = generate_power(2, 8);
  const auto f1 = farey_set(sq, 1);
  REQUIRE(f1.points.size() == 2);
  CHECK(f1.points[0].numerator == 1);
  CHECK(f1.points[0].denominator == 4);
  CHECK(f1.points[1].numerator == 3);
  CHECK(farey_set(sq, 2).labelled_count == 16);
  const auto e = farey_set(ModuliSequence::explicit_values(v({2, 3})), 1);
  CHECK(e.distinct_count == 3);
  CHECK_THROWS_AS(farey_set(sq, 5), PreconditionError);
}

TEST_CASE("spacing_count examples") {
  const auto sq = generate_power(2, 8);
  CHECK(spacing_count(sq, 1000, 2) == 1);
  // 1/4 and 3/4 are exactly 1/2 apart, which is not below 1/2.
  CHECK(spacing_count(sq, 1, 1) == 1);
  // 1/3, 1/2, 2/3 are pairwise 1/6 apart around 1/2.
  CHECK(spacing_count(ModuliSequence::explicit_values(v({2, 3})), 2, 1) == 3);
}

TEST_CASE("lemma_fracgen_audit") {
  const auto sq = generate_power(2, 16);
  const auto a = lemma_fracgen_audit(sq, 64, 8, 2.0);
  CHECK(a.measured >= 1);
  CHECK(a.term1 > 0);
  CHECK(a.ratio == doctest::Approx(a.measured / (a.term1 + a.term2)));
  CHECK_NOTHROW(lemma_fracgen_audit(generate_power(3, 8), 64, 4, 3.0));
  CHECK_THROWS_AS(lemma_fracgen_audit(sq, 10, 8, 2.0), DomainError);
  const auto csv = to_csv({a});
  CHECK(csv.rfind("# schema=v1\nQ,N,measured,term1,term2,ratio\n", 0) == 0);
}

TEST_CASE("property: box counts match window oracle and are monotone") {
  oracle::Gen g(505);
  const auto sq = generate_power(2, 40);
  const auto cubes = generate_power(3, 40);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& seq = trial % 2 ? sq : cubes;
    const i128 m = g.range(2, 200);
    i128 a = g.range(1, static_cast<i64>(m));
    while (oracle::gcd(a, m) != 1) a = a % m + 1;
    const i64 U = g.range(1, 40);
    const i128 V = g.range(0, static_cast<i64>(m));
    const auto pre = seq.prefix(static_cast<std::size_t>(U));
    const i64 t = count_box_solutions(a, m, seq, U, V);
    CHECK(t == box_oracle(a, m, pre, V));
    if (U < 40) CHECK(count_box_solutions(a, m, seq, U + 1, V) >= t);
    CHECK(count_box_solutions(a, m, seq, U, V + 1) >= t);
    if (2 * V >= m) CHECK(t == U);
  }
}

TEST_CASE("property: spacing matches pairwise oracle") {
  oracle::Gen g(606);
  for (int trial = 0; trial < 40; ++trial) {
    const int kind = trial % 3;
    const auto seq = kind == 0   ? generate_power(2, 24)
                     : kind == 1 ? generate_piatetski_shapiro(Exponent::from_double(1.5), 24)
                                 : ModuliSequence::explicit_values(g.set(24, 2, 90));
    if (seq.size() < 4) continue;
    const i64 Q = g.range(1, static_cast<i64>(seq.size() / 2));
    const auto pts = oracle::farey(window_moduli(seq, Q));
    const auto fs = farey_set(seq, Q);
    CHECK(fs.distinct_count == pts.size());
    i64 prev = -1;
    for (i64 N = 1; N <= 4096; N *= 2) {
      const i64 got = spacing_count(fs, N);
      CHECK(got == oracle::spacing(pts, N));
      CHECK(got >= 1);
      if (prev >= 0) CHECK(got <= prev);
      prev = got;
    }
  }
}

TEST_CASE("property: spacing is 1 below the minimum gap") {
  for (i64 Q : {2, 3, 5}) {
    const auto seq = generate_power(2, 2 * Q);
    const auto fs = farey_set(seq, Q);
    const auto [num, den] = min_torus_gap(fs);
    // 1/(2N) <= num/den  <=>  den <= 2 N num
    const i64 N = static_cast<i64>((den + 2 * num - 1) / (2 * num));
    CHECK(spacing_count(fs, N) == 1);
    if (N > 1 && 2 * (N - 1) * num < den) CHECK(spacing_count(fs, N - 1) >= 2);
  }
}

TEST_CASE("boxesgen and poly audits stay bounded") {
  oracle::Gen g(707);
  const auto sq = generate_power(2, 64);
  for (int trial = 0; trial < 30; ++trial) {
    const i128 m = g.range(50, 400);
    i128 a = g.range(1, static_cast<i64>(m) - 1);
    while (oracle::gcd(a, m) != 1) a = a % (m - 1) + 1;
    const auto r = boxesgen_audit(sq, a, m, 64, g.range(0, 20), 2.0);
    CHECK(r.measured == box_oracle(a, m, sq.prefix(64), r.V));
    // frozen regression ceiling
    CHECK(r.ratio <= 2.0);
  }
  const auto p = poly_spacing_audit(IntPolynomial({1, 1, 1}), 100, 6);
  CHECK(p.measured >= 1);
  CHECK(p.ratio == doctest::Approx(p.measured / (p.term1 + p.term2 + p.term3)));
}
