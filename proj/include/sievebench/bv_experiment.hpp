#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"
#include "sievebench/real_power.hpp"

namespace sievebench {

/// Exact sum of values that are each 0 or a double >= 0.5 (such as log p):
/// every such double is an integer multiple of 2^-53, so the sum is kept as
/// an integer count of 2^-53 units and does not depend on addition order.
class LogSum {
 public:
  void add(double v);
  void add_units(i128 u) { units_ += u; }
  i128 units() const noexcept { return units_; }
  double value() const;
  static i128 to_units(double v);

  friend bool operator==(const LogSum&, const LogSum&) = default;

 private:
  i128 units_ = 0;
};

inline constexpr u64 kPrimeTableBudget = 1'000'000'000;

/// Primality for n <= x_max from a segmented sieve (odd numbers only), plus
/// the prime powers p^e, e >= 2, needed for the von Mangoldt function.
class PrimeTable {
 public:
  static PrimeTable build(u64 x, u64 budget = kPrimeTableBudget);
  /// Binary cache: magic "SBPT", u32 version, u64 x_max, then the bit words.
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);
  /// Reuses dir/primes_<x>.sbpt when present, otherwise builds and writes it.
  static PrimeTable load_or_build(const std::filesystem::path& dir, u64 x);

  u64 x_max() const noexcept { return x_max_; }
  bool is_prime(u64 n) const;
  /// Lambda(n) for 1 <= n <= x_max.
  double mangoldt(u64 n) const;
  u64 prime_count(u64 x) const;
  std::vector<u64> primes(u64 x) const;
  /// Every prime power n <= x (primes included), ascending, with Lambda(n).
  std::vector<std::pair<u64, double>> prime_powers(u64 x) const;

 private:
  u64 x_max_ = 0;
  std::vector<u64> bits_;  // bit i <-> 2i+1
  void check(u64 n) const;
};

double lambda_sum_progression(const PrimeTable& table, u64 x, u64 q, u64 a);
LogSum lambda_sum_progression_exact(const PrimeTable& table, u64 x, u64 q, u64 a);

/// lambda_sum_progression - x/phi(q); gcd(a, q) = 1.
double error_term(const PrimeTable& table, u64 x, u64 q, u64 a);

struct WorstResidue {
  u64 a_star = 1;
  double E = 0;
};

/// Reduced residue (1 <= a <= q) maximising |E(x, q, a)|, smallest a on ties.
WorstResidue worst_residue(const PrimeTable& table, u64 x, u64 q);

/// psi(x) traversed upward and downward.
LogSum psi_ascending(const PrimeTable& table, u64 x);
LogSum psi_descending(const PrimeTable& table, u64 x);

/// sum over reduced a of (E(x,q,a) + x/phi(q)) against psi(x) minus the prime
/// powers of primes dividing q, compared exactly.
bool partition_identity_holds(const PrimeTable& table, u64 x, u64 q);

struct BVRow {
  u64 q = 0;
  u64 phi_q = 0;
  u64 a_star = 0;
  double E = 0;
};

struct BVReport {
  double alpha = 0;
  u64 x = 0;
  u64 R = 0;
  std::vector<BVRow> rows;
  double M_alpha = 0;
  double rho = 0;  // M_alpha R / (x * window size)
};

/// Moduli from the window floor(j^alpha) in [R, 2R]; rows ascending in q.
BVReport bv_sum(const PrimeTable& table, const Exponent& alpha, u64 x, u64 R, int threads = 1);

std::string to_csv(const BVReport& report);
nlohmann::json to_json(const BVReport& report);

/// Largest divisor of n of the form floor(j^alpha).
u64 ps_largest_divisor(u64 n, const Exponent& alpha);

struct ShiftedPrimeSearch {
  std::vector<std::pair<u64, u64>> hits;  // (p, PS_alpha(p - 1))
  /// Non-empty when theta is not below Phi(alpha).
  std::string warning;
};

/// Primes p <= x with PS_alpha(p - 1) >= p^theta.
ShiftedPrimeSearch shifted_prime_search(const PrimeTable& table, const Exponent& alpha,
                                        double theta, u64 x);

}  // namespace sievebench
