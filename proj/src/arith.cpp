#include "sievebench/arith.hpp"

#include <algorithm>
#include <cmath>

namespace sievebench::arith {

i128 gcd(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

i128 mod(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

i128 centered_mod(i128 a, i128 m) {
  i128 r = mod(a, m);
  // (-m/2, m/2]: for even m the class of m/2 keeps the positive representative.
  if (2 * r > m) r -= m;
  return r;
}

i128 mulmod(i128 a, i128 b, i128 m) {
  return mod(mod(a, m) * mod(b, m), m);
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw RangeError("128-bit overflow in addition");
  return r;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw RangeError("128-bit overflow in multiplication");
  return r;
}

i128 checked_pow(i128 base, int exponent) {
  i128 r = 1;
  for (int i = 0; i < exponent; ++i) r = checked_mul(r, base);
  return r;
}

std::vector<PrimePower> factorize(i128 n, i128 limit) {
  if (n < 1) throw DomainError("factorize: n must be positive, got " + to_string(n));
  if (n > limit)
    throw CapacityError("factorize: " + to_string(n) + " exceeds trial-division budget " +
                        to_string(limit));
  std::vector<PrimePower> out;
  auto strip = [&](i128 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (i128 p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

i128 euler_phi(const std::vector<PrimePower>& factors) {
  i128 phi = 1;
  for (const auto& [p, e] : factors) {
    phi *= p - 1;
    for (int i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

i128 euler_phi(i128 n) { return euler_phi(factorize(n)); }

int moebius(i128 n) {
  const auto f = factorize(n);
  for (const auto& pp : f)
    if (pp.exponent > 1) return 0;
  return (f.size() % 2 == 0) ? 1 : -1;
}

std::vector<i128> divisors(const std::vector<PrimePower>& factors) {
  std::vector<i128> out{1};
  for (const auto& [p, e] : factors) {
    const std::size_t base = out.size();
    i128 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<i128, int>> squarefree_divisors(const std::vector<PrimePower>& factors) {
  std::vector<std::pair<i128, int>> out{{1, 1}};
  for (const auto& pp : factors) {
    const std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) out.push_back({out[i].first * pp.prime, -out[i].second});
  }
  return out;
}

i128 integer_root(i128 n, int e) {
  if (n < 0 || e < 1) throw DomainError("integer_root: need n >= 0 and e >= 1");
  if (e == 1 || n < 2) return n;
  i128 r = static_cast<i128>(std::pow(static_cast<double>(n), 1.0 / e));
  auto pow_le = [&](i128 base) {
    i128 acc = 1;
    for (int i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(acc, base, &acc)) return false;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

}  // namespace sievebench::arith
