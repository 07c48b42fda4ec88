#include "sievebench/additive_energy.hpp"

#include <algorithm>
#include <unordered_map>

namespace sievebench {

namespace {

// Counts fit 64 bits as long as n^3 < 2^63.
constexpr std::size_t kMaxSetSize = std::size_t(1) << 21;
constexpr i128 kMaxMagnitude = i128(1) << 124;

struct I128Hash {
  std::size_t operator()(i128 v) const noexcept {
    const u128 u = static_cast<u128>(v);
    const u64 lo = static_cast<u64>(u), hi = static_cast<u64>(u >> 64);
    return std::hash<u64>{}(lo ^ (hi * 0x9E3779B97F4A7C15ULL));
  }
};

// ---------------------------------------------------------------------------
// Exact convolution modulo the prime 2^64 - 2^32 + 1.

constexpr u64 kNttPrime = 0xFFFFFFFF00000001ULL;
constexpr u64 kNttGenerator = 7;

u64 mul_mod(u64 a, u64 b) { return static_cast<u64>((u128(a) * b) % kNttPrime); }
u64 add_mod(u64 a, u64 b) {
  const u128 s = u128(a) + b;
  return static_cast<u64>(s >= kNttPrime ? s - kNttPrime : s);
}
u64 sub_mod(u64 a, u64 b) { return a >= b ? a - b : a + (kNttPrime - b); }
u64 pow_mod(u64 base, u64 e) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, base);
    base = mul_mod(base, base);
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<u64>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u64 w = pow_mod(kNttGenerator, (kNttPrime - 1) / len);
    if (inverse) w = pow_mod(w, kNttPrime - 2);
    std::vector<u64> powers(len / 2);
    powers[0] = 1;
    for (std::size_t k = 1; k < len / 2; ++k) powers[k] = mul_mod(powers[k - 1], w);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const u64 u = a[i + k];
        const u64 v = mul_mod(a[i + k + len / 2], powers[k]);
        a[i + k] = add_mod(u, v);
        a[i + k + len / 2] = sub_mod(u, v);
      }
    }
  }
  if (inverse) {
    const u64 inv_n = pow_mod(n % kNttPrime, kNttPrime - 2);
    for (auto& x : a) x = mul_mod(x, inv_n);
  }
}

std::vector<u64> convolve_exact(const std::vector<u64>& a, const std::vector<u64>& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<u64> fa(a), fb(b);
  fa.resize(n, 0);
  fb.resize(n, 0);
  ntt(fa, false);
  ntt(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mul_mod(fa[i], fb[i]);
  ntt(fa, true);
  fa.resize(out_len);
  return fa;
}

// ---------------------------------------------------------------------------
// Sparse shift table over the distinct pairwise sums.

struct ShiftScan {
  Count e_plus = 0;
  Count e_star = 0;
  std::optional<i128> h_star;
  std::optional<std::vector<std::pair<i128, Count>>> positive_table;
};

std::size_t count_pairs_in(const std::vector<std::pair<i128, Count>>& r, i128 lo, i128 hi) {
  // Pairs i > j with lo <= s_i - s_j <= hi.
  std::size_t total = 0;
  std::size_t left = 0, right = 0;  // window of j with s_j in [s_i - hi, s_i - lo]
  for (std::size_t i = 0; i < r.size(); ++i) {
    while (left < i && r[left].first < r[i].first - hi) ++left;
    while (right < i && r[right].first <= r[i].first - lo) ++right;
    if (right > left) total += right - left;
  }
  return total;
}

ShiftScan scan_shifts_sparse(const std::vector<std::pair<i128, Count>>& r,
                             const EnergyOptions& options) {
  ShiftScan scan;
  for (const auto& [s, c] : r) scan.e_plus += c * c;
  const std::size_t D = r.size();
  if (D < 2) {
    scan.positive_table = std::vector<std::pair<i128, Count>>{};
    return scan;
  }
  const i128 max_diff = r.back().first - r.front().first;
  const std::size_t half_limit = options.table_limit / 2;
  std::vector<std::pair<i128, Count>> table;
  bool keep_table = true;

  const int threads = std::max(1, options.threads);
  i128 lo = 1;
  while (lo <= max_diff) {
    // Widest [lo, hi] whose pair count fits the chunk budget (at least one h).
    i128 hi = max_diff;
    if (count_pairs_in(r, lo, hi) > options.sparse_chunk_pairs) {
      i128 good = lo, bad = max_diff;
      while (bad - good > 1) {
        const i128 mid = good + (bad - good) / 2;
        if (count_pairs_in(r, lo, mid) <= options.sparse_chunk_pairs) good = mid;
        else bad = mid;
      }
      hi = good;
    }
    // Contiguous blocks of i per worker, concatenated in block order.
    const std::size_t blocks = static_cast<std::size_t>(threads);
    std::vector<std::vector<std::pair<i128, Count>>> parts(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
      const std::size_t begin = D * b / blocks, end = D * (b + 1) / blocks;
      auto& out = parts[b];
      for (std::size_t i = begin; i < end; ++i) {
        const i128 si = r[i].first;
        auto first = std::lower_bound(r.begin(), r.begin() + i, si - hi,
                                      [](const auto& e, i128 v) { return e.first < v; });
        for (auto it = first; it != r.begin() + i && si - it->first >= lo; ++it)
          out.emplace_back(si - it->first, r[i].second * it->second);
      }
    });
    std::vector<std::pair<i128, Count>> diffs;
    for (auto& p : parts) {
      diffs.insert(diffs.end(), p.begin(), p.end());
      std::vector<std::pair<i128, Count>>().swap(p);
    }
    std::sort(diffs.begin(), diffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < diffs.size();) {
      const i128 h = diffs[i].first;
      Count total = 0;
      for (; i < diffs.size() && diffs[i].first == h; ++i) total += diffs[i].second;
      if (total > scan.e_star) {
        scan.e_star = total;
        scan.h_star = h;
      }
      if (keep_table) {
        if (table.size() >= half_limit) {
          keep_table = false;
          std::vector<std::pair<i128, Count>>().swap(table);
        } else {
          table.emplace_back(h, total);
        }
      }
    }
    if (hi == max_diff) break;
    lo = hi + 1;
  }
  if (keep_table) scan.positive_table = std::move(table);
  return scan;
}

std::vector<std::pair<i128, Count>> symmetric_table(const std::vector<std::pair<i128, Count>>& pos,
                                                    Count e_plus) {
  std::vector<std::pair<i128, Count>> out;
  out.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.emplace_back(-it->first, it->second);
  out.emplace_back(0, e_plus);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

EnergyReport energy_dense(const std::vector<i128>& s, const EnergyOptions& options) {
  const i128 lo = s.front();
  const i128 span = s.back() - lo;
  if (span > kDenseRangeLimit)
    throw CapacityError("dense energy backend: range " + to_string(span) + " exceeds 2^26; use the sparse backend");
  const std::size_t W = static_cast<std::size_t>(span) + 1;
  std::vector<u64> indicator(W, 0);
  for (const i128 v : s) indicator[static_cast<std::size_t>(v - lo)] = 1;
  const std::vector<u64> r = convolve_exact(indicator, indicator);
  const std::vector<u64> r_rev(r.rbegin(), r.rend());
  const std::vector<u64> corr = convolve_exact(r, r_rev);
  const std::size_t zero = r.size() - 1;  // corr[zero + h] = E_h

  EnergyReport rep;
  rep.n = s.size();
  rep.e_plus = corr[zero];
  std::size_t achievable = 0;
  for (const u64 c : corr) achievable += c != 0;
  for (std::size_t h = 1; zero + h < corr.size(); ++h) {
    if (corr[zero + h] > rep.e_star) {
      rep.e_star = corr[zero + h];
      rep.h_star = i128(h);
    }
  }
  if (achievable <= options.table_limit) {
    std::vector<std::pair<i128, Count>> table;
    for (std::size_t i = 0; i < corr.size(); ++i)
      if (corr[i] != 0) table.emplace_back(i128(i) - i128(zero), corr[i]);
    rep.h_table = std::move(table);
  }
  return rep;
}

}  // namespace

std::vector<i128> normalize_set(std::span<const i128> set) {
  std::vector<i128> s(set.begin(), set.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() > kMaxSetSize)
    throw CapacityError("set of size " + std::to_string(s.size()) + " exceeds 2^21 (exact 64-bit counts)");
  for (const i128 v : s)
    if (v >= kMaxMagnitude || v <= -kMaxMagnitude)
      throw RangeError("element " + to_string(v) + " too large for exact pairwise sums");
  return s;
}

RepresentationFunction::RepresentationFunction(std::span<const i128> set) {
  const std::vector<i128> s = normalize_set(set);
  std::vector<std::pair<i128, Count>> sums;
  sums.reserve(s.size() * (s.size() + 1) / 2);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i; j < s.size(); ++j) sums.emplace_back(s[i] + s[j], i == j ? 1 : 2);
  std::sort(sums.begin(), sums.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [v, c] : sums) {
    if (!entries_.empty() && entries_.back().first == v) entries_.back().second += c;
    else entries_.emplace_back(v, c);
  }
}

Count RepresentationFunction::at(i128 s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const auto& e, i128 v) { return e.first < v; });
  return (it != entries_.end() && it->first == s) ? it->second : 0;
}

Count RepresentationFunction::total() const {
  Count t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

Count RepresentationFunction::sum_of_squares() const {
  Count t = 0;
  for (const auto& e : entries_) t += e.second * e.second;
  return t;
}

EnergyReport energy_oracle(std::span<const i128> set) {
  const std::vector<i128> s = normalize_set(set);
  if (s.size() > kOracleSizeLimit)
    throw CapacityError("energy_oracle: |S| = " + std::to_string(s.size()) + " exceeds 64");
  std::unordered_map<i128, Count, I128Hash> counts;
  for (const i128 s1 : s)
    for (const i128 t1 : s)
      for (const i128 s2 : s)
        for (const i128 t2 : s) ++counts[s1 + t1 - s2 - t2];
  std::vector<std::pair<i128, Count>> table(counts.begin(), counts.end());
  std::sort(table.begin(), table.end());
  EnergyReport rep;
  rep.n = s.size();
  for (const auto& [h, c] : table) {
    if (h == 0) {
      rep.e_plus = c;
      continue;
    }
    const auto magnitude = [](i128 v) { return v < 0 ? -v : v; };
    const bool better =
        c > rep.e_star ||
        (c == rep.e_star && rep.h_star &&
         (magnitude(h) < magnitude(*rep.h_star) ||
          (magnitude(h) == magnitude(*rep.h_star) && h > 0)));
    if (better) {
      rep.e_star = c;
      rep.h_star = h;
    }
  }
  rep.h_table = std::move(table);
  return rep;
}

Count additive_energy(std::span<const i128> set) {
  return RepresentationFunction(set).sum_of_squares();
}

Count asymmetric_energy(std::span<const i128> set, i128 h) {
  const RepresentationFunction r(set);
  Count total = 0;
  for (const auto& [s, c] : r.entries()) total += c * r.at(s - h);
  return total;
}

std::pair<i128, Count> max_asymmetric_energy(std::span<const i128> set, const EnergyOptions& options) {
  const RepresentationFunction r(set);
  if (r.entries().size() < 2)
    throw DomainError("max_asymmetric_energy: need |S| >= 2");
  EnergyOptions opts = options;
  opts.table_limit = 0;
  const ShiftScan scan = scan_shifts_sparse(r.entries(), opts);
  return {*scan.h_star, scan.e_star};
}

EnergyReport energy_fast(std::span<const i128> set, EnergyBackend backend,
                         const EnergyOptions& options) {
  const std::vector<i128> s = normalize_set(set);
  if (s.empty()) throw DomainError("energy_fast: empty set");
  if (backend == EnergyBackend::Dense) return energy_dense(s, options);
  const RepresentationFunction r(s);
  const ShiftScan scan = scan_shifts_sparse(r.entries(), options);
  EnergyReport rep;
  rep.n = s.size();
  rep.e_plus = scan.e_plus;
  rep.e_star = scan.e_star;
  rep.h_star = scan.h_star;
  if (scan.positive_table && 2 * scan.positive_table->size() + 1 <= options.table_limit)
    rep.h_table = symmetric_table(*scan.positive_table, scan.e_plus);
  return rep;
}

nlohmann::json to_json(const EnergyReport& report) {
  nlohmann::json j{{"n", report.n}, {"e_plus", report.e_plus}, {"e_star", report.e_star}};
  j["h_star"] = report.h_star ? nlohmann::json(static_cast<i64>(*report.h_star)) : nlohmann::json();
  if (report.h_star && (*report.h_star > INT64_MAX || *report.h_star < INT64_MIN))
    j["h_star"] = to_string(*report.h_star);
  return j;
}

std::string h_table_csv(const EnergyReport& report) {
  std::string out = "# schema=v1\nh,E_h\n";
  if (report.h_table)
    for (const auto& [h, c] : *report.h_table) out += to_string(h) + "," + std::to_string(c) + "\n";
  return out;
}

}  // namespace sievebench
