#include "sievebench/bv_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sievebench/arith.hpp"
#include "sievebench/bound_catalog.hpp"
#include "sievebench/moduli.hpp"

namespace sievebench {
namespace {

constexpr char kMagic[4] = {'S', 'B', 'P', 'T'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr u64 kSegment = u64(1) << 18;  // odd numbers per segment

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 phi64(u64 q) { return static_cast<u64>(arith::euler_phi(static_cast<i128>(q))); }

}  // namespace

i128 LogSum::to_units(double v) {
  if (v == 0) return 0;
  if (!(v >= 0.5) || !std::isfinite(v) || v > 0x1.0p60)
    throw DomainError("LogSum accepts 0 or finite values >= 0.5");
  int exp = 0;
  const double m = std::frexp(v, &exp);  // v = m 2^exp, m in [0.5, 1)
  const auto mant = static_cast<i128>(std::ldexp(m, 53));
  // v * 2^53 = mant * 2^exp with exp >= 0
  return mant << exp;
}

void LogSum::add(double v) { units_ += to_units(v); }

double LogSum::value() const { return std::ldexp(static_cast<double>(units_), -53); }

PrimeTable PrimeTable::build(u64 x, u64 budget) {
  if (x > budget) throw CapacityError("prime table for x=" + std::to_string(x) + " exceeds budget");
  PrimeTable t;
  t.x_max_ = x;
  const u64 odd_count = x / 2 + (x % 2);  // odd numbers 1..x
  t.bits_.assign((odd_count + 63) / 64, ~u64(0));
  if (odd_count == 0) {
    t.bits_.clear();
    return t;
  }
  // Trim past the end and clear 1.
  if (odd_count % 64) t.bits_.back() &= (u64(1) << (odd_count % 64)) - 1;
  t.bits_[0] &= ~u64(1);
  const u64 root = isqrt(x);
  // Base primes by a plain sieve.
  std::vector<bool> small(root + 1, true);
  std::vector<u64> base;
  for (u64 p = 3; p <= root; p += 2) {
    if (!small[p]) continue;
    base.push_back(p);
    for (u64 m = p * p; m <= root; m += 2 * p) small[m] = false;
  }
  for (u64 lo = 0; lo < odd_count; lo += kSegment) {
    const u64 hi = std::min(odd_count, lo + kSegment);  // odd indices [lo, hi)
    const u64 n_lo = 2 * lo + 1;
    const u64 n_hi = 2 * (hi - 1) + 1;
    for (u64 p : base) {
      if (p * p > n_hi) break;
      u64 start = std::max(p * p, (n_lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (u64 m = start; m <= n_hi; m += 2 * p) {
        const u64 i = m / 2;
        t.bits_[i / 64] &= ~(u64(1) << (i % 64));
      }
    }
  }
  return t;
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  out.write(reinterpret_cast<const char*>(&x_max_), sizeof x_max_);
  out.write(reinterpret_cast<const char*>(bits_.data()),
            static_cast<std::streamsize>(bits_.size() * sizeof(u64)));
  if (!out) throw IoError("failed writing " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  PrimeTable t;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&t.x_max_), sizeof t.x_max_);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a prime table: " + path.string());
  if (version != kCacheVersion) throw IoError("unsupported prime table version in " + path.string());
  const u64 odd_count = t.x_max_ / 2 + (t.x_max_ % 2);
  t.bits_.resize((odd_count + 63) / 64);
  in.read(reinterpret_cast<char*>(t.bits_.data()),
          static_cast<std::streamsize>(t.bits_.size() * sizeof(u64)));
  if (!in) throw IoError("truncated prime table: " + path.string());
  return t;
}

PrimeTable PrimeTable::load_or_build(const std::filesystem::path& dir, u64 x) {
  const auto path = dir / ("primes_" + std::to_string(x) + ".sbpt");
  if (std::filesystem::exists(path)) {
    auto t = load(path);
    if (t.x_max() == x) return t;
  }
  auto t = build(x);
  std::filesystem::create_directories(dir);
  t.save(path);
  return t;
}

void PrimeTable::check(u64 n) const {
  if (n > x_max_) throw RangeError("n=" + std::to_string(n) + " exceeds prime table limit " +
                                   std::to_string(x_max_));
}

bool PrimeTable::is_prime(u64 n) const {
  check(n);
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  const u64 i = n / 2;
  return (bits_[i / 64] >> (i % 64)) & 1;
}

double PrimeTable::mangoldt(u64 n) const {
  check(n);
  if (n < 2) return 0;
  if (is_prime(n)) return std::log(static_cast<double>(n));
  for (int e = 2; (u64(1) << e) <= n; ++e) {
    const auto r = static_cast<u64>(arith::integer_root(n, e));
    if (static_cast<u64>(arith::checked_pow(r, e)) == n && is_prime(r))
      return std::log(static_cast<double>(r));
  }
  return 0;
}

u64 PrimeTable::prime_count(u64 x) const {
  check(x);
  if (x < 2) return 0;
  const u64 odd_count = x / 2 + (x % 2);
  u64 count = 1;  // 2
  const u64 full = odd_count / 64;
  for (u64 w = 0; w < full; ++w) count += static_cast<u64>(__builtin_popcountll(bits_[w]));
  if (odd_count % 64)
    count += static_cast<u64>(
        __builtin_popcountll(bits_[full] & ((u64(1) << (odd_count % 64)) - 1)));
  return count;
}

std::vector<u64> PrimeTable::primes(u64 x) const {
  check(x);
  std::vector<u64> out;
  if (x >= 2) out.push_back(2);
  for (u64 n = 3; n <= x; n += 2)
    if (is_prime(n)) out.push_back(n);
  return out;
}

std::vector<std::pair<u64, double>> PrimeTable::prime_powers(u64 x) const {
  std::vector<std::pair<u64, double>> out;
  for (u64 p : primes(x)) {
    const double lp = std::log(static_cast<double>(p));
    for (u64 n = p;; n *= p) {
      out.emplace_back(n, lp);
      if (n > x / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LogSum lambda_sum_progression_exact(const PrimeTable& table, u64 x, u64 q, u64 a) {
  if (q < 1 || a < 1) throw PreconditionError("need q >= 1 and a >= 1");
  LogSum s;
  for (u64 n = (a - 1) % q + 1; n <= x; n += q) s.add(table.mangoldt(n));
  return s;
}

double lambda_sum_progression(const PrimeTable& table, u64 x, u64 q, u64 a) {
  return lambda_sum_progression_exact(table, x, q, a).value();
}

double error_term(const PrimeTable& table, u64 x, u64 q, u64 a) {
  if (q < 1) throw PreconditionError("q must be at least 1");
  if (std::gcd(a, q) != 1) throw PreconditionError("error term needs gcd(a, q) = 1");
  return lambda_sum_progression(table, x, q, a) -
         static_cast<double>(x) / static_cast<double>(phi64(q));
}

namespace {

std::vector<LogSum> residue_buckets(const std::vector<std::pair<u64, double>>& powers, u64 x, u64 q) {
  std::vector<LogSum> b(q);
  for (const auto& [n, lp] : powers) {
    if (n > x) break;
    b[n % q].add(lp);
  }
  return b;
}

WorstResidue pick_worst(const std::vector<LogSum>& buckets, u64 x, u64 q) {
  const double main = static_cast<double>(x) / static_cast<double>(phi64(q));
  WorstResidue best;
  double best_abs = -1;
  for (u64 a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const double E = buckets[a % q].value() - main;
    if (std::abs(E) > best_abs) {
      best_abs = std::abs(E);
      best = {a, E};
    }
  }
  return best;
}

}  // namespace

WorstResidue worst_residue(const PrimeTable& table, u64 x, u64 q) {
  if (q < 1) throw PreconditionError("q must be at least 1");
  return pick_worst(residue_buckets(table.prime_powers(std::min(x, table.x_max())), x, q), x, q);
}

LogSum psi_ascending(const PrimeTable& table, u64 x) {
  LogSum s;
  for (u64 n = 2; n <= x; ++n) s.add(table.mangoldt(n));
  return s;
}

LogSum psi_descending(const PrimeTable& table, u64 x) {
  LogSum s;
  for (u64 n = x; n >= 2; --n) s.add(table.mangoldt(n));
  return s;
}

bool partition_identity_holds(const PrimeTable& table, u64 x, u64 q) {
  LogSum lhs;
  for (u64 a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) lhs.add_units(lambda_sum_progression_exact(table, x, q, a).units());
  LogSum rhs = psi_ascending(table, x);
  for (const auto& pp : arith::factorize(q)) {
    const auto p = static_cast<u64>(pp.prime);
    for (u64 n = p; n <= x; n *= p) {
      rhs.add_units(-LogSum::to_units(std::log(static_cast<double>(p))));
      if (n > x / p) break;
    }
  }
  return lhs == rhs;
}

BVReport bv_sum(const PrimeTable& table, const Exponent& alpha, u64 x, u64 R, int threads) {
  if (R > x) throw PreconditionError("bv_sum needs R <= x");
  if (x > table.x_max()) throw RangeError("x exceeds the prime table");
  const auto win = window(alpha, static_cast<i64>(R));
  if (win.members.empty()) throw DomainError("empty Piatetski-Shapiro window at R=" + std::to_string(R));
  BVReport out;
  out.alpha = alpha.value();
  out.x = x;
  out.R = R;
  const auto powers = table.prime_powers(x);
  out.rows.resize(win.members.size());
  parallel_for(out.rows.size(), threads, [&](std::size_t i) {
    const auto q = static_cast<u64>(win.members[i]);
    const auto w = pick_worst(residue_buckets(powers, x, q), x, q);
    out.rows[i] = {q, phi64(q), w.a_star, w.E};
  });
  CompensatedSum m;
  for (const auto& r : out.rows) m.add(std::abs(r.E));
  out.M_alpha = m.value();
  out.rho = out.M_alpha * static_cast<double>(R) /
            (static_cast<double>(x) * static_cast<double>(out.rows.size()));
  return out;
}

std::string to_csv(const BVReport& report) {
  std::ostringstream os;
  os << "# schema=v1\nq,phi_q,a_star,E,abs_E\n";
  for (const auto& r : report.rows)
    os << r.q << ',' << r.phi_q << ',' << r.a_star << ',' << format_double(r.E) << ','
       << format_double(std::abs(r.E)) << '\n';
  return os.str();
}

nlohmann::json to_json(const BVReport& report) {
  return {{"alpha", report.alpha},
          {"x", report.x},
          {"R", report.R},
          {"window_size", report.rows.size()},
          {"M_alpha", report.M_alpha},
          {"rho", report.rho}};
}

u64 ps_largest_divisor(u64 n, const Exponent& alpha) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  const auto divs = arith::divisors(arith::factorize(n));
  for (auto it = divs.rbegin(); it != divs.rend(); ++it)
    if (ps_index(*it, alpha)) return static_cast<u64>(*it);
  return 1;
}

ShiftedPrimeSearch shifted_prime_search(const PrimeTable& table, const Exponent& alpha,
                                        double theta, u64 x) {
  ShiftedPrimeSearch out;
  const double a = alpha.value();
  if (a > 1 && a < 2.25) {
    const double phi = phi_alpha(a);
    if (theta >= phi)
      out.warning = "theta=" + format_double(theta) + " is not below Phi(alpha)=" + format_double(phi);
  } else {
    out.warning = "Phi(alpha) is only defined for 1 < alpha < 9/4";
  }
  for (u64 p : table.primes(x)) {
    const u64 d = ps_largest_divisor(p - 1, alpha);
    if (static_cast<double>(d) >= std::pow(static_cast<double>(p), theta)) out.hits.emplace_back(p, d);
  }
  return out;
}

}  // namespace sievebench
