#pragma once

#include <utility>
#include <vector>

#include "sievebench/common.hpp"

// Elementary multiplicative arithmetic on 128-bit integers: factorization by
// trial division, Euler phi, Moebius, divisor enumeration.
namespace sievebench::arith {

i128 gcd(i128 a, i128 b);

/// Representative of a mod m in [0, m); m > 0.
i128 mod(i128 a, i128 m);

/// Representative of a mod m in (-m/2, m/2]; m > 0.
i128 centered_mod(i128 a, i128 m);

/// (a * b) mod m for 0 < m < 2^63.
i128 mulmod(i128 a, i128 b, i128 m);

/// a + b and a * b that throw RangeError on 128-bit overflow.
i128 checked_add(i128 a, i128 b);
i128 checked_mul(i128 a, i128 b);
i128 checked_pow(i128 base, int exponent);

struct PrimePower {
  i128 prime;
  int exponent;
};

/// Prime factorization of n >= 1 by trial division. Throws CapacityError when
/// n exceeds `limit` (trial division up to sqrt(limit) is the cost ceiling).
std::vector<PrimePower> factorize(i128 n, i128 limit = i128(1'000'000'000'000LL));

i128 euler_phi(i128 n);
i128 euler_phi(const std::vector<PrimePower>& factors);
int moebius(i128 n);

/// All positive divisors, ascending.
std::vector<i128> divisors(const std::vector<PrimePower>& factors);

/// Squarefree divisors d paired with moebius(d).
std::vector<std::pair<i128, int>> squarefree_divisors(const std::vector<PrimePower>& factors);

/// Integer e-th root: largest r with r^e <= n (n >= 0, e >= 1).
i128 integer_root(i128 n, int e);

}  // namespace sievebench::arith
