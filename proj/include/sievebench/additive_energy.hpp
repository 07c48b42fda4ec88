#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"

namespace sievebench {

/// Additive energy data of a finite integer set S.
///
/// e_plus counts (s1,t1,s2,t2) in S^4 with s1+t1 = s2+t2; e_star is the
/// maximum over h != 0 of the shifted count s1+t1 = s2+t2+h, attained at
/// h_star (smallest |h|, positive first). h_table, when present, lists every
/// achievable shift h with its count, ascending in h.
struct EnergyReport {
  std::size_t n = 0;
  Count e_plus = 0;
  Count e_star = 0;
  std::optional<i128> h_star;
  std::optional<std::vector<std::pair<i128, Count>>> h_table;
};

/// r(s) = #{(i, j) ordered : m_i + m_j = s}, sorted by s.
class RepresentationFunction {
 public:
  explicit RepresentationFunction(std::span<const i128> set);

  const std::vector<std::pair<i128, Count>>& entries() const noexcept { return entries_; }
  Count at(i128 s) const;
  Count total() const;
  Count sum_of_squares() const;

 private:
  std::vector<std::pair<i128, Count>> entries_;
};

enum class EnergyBackend { Sparse, Dense };

struct EnergyOptions {
  int threads = 1;
  /// h_table is emitted only when the number of achievable shifts is at most this.
  std::size_t table_limit = 1'000'000;
  /// Pair differences materialised per pass by the sparse backend.
  std::size_t sparse_chunk_pairs = std::size_t(1) << 23;
};

/// Largest span max(S) - min(S) the dense backend accepts.
inline constexpr i128 kDenseRangeLimit = i128(1) << 26;
/// Largest brute-force input.
inline constexpr std::size_t kOracleSizeLimit = 64;

/// Sorted, deduplicated copy; rejects values whose sums could overflow.
std::vector<i128> normalize_set(std::span<const i128> set);

/// Literal quadruple enumeration (|S| <= 64) with the full shift table.
EnergyReport energy_oracle(std::span<const i128> set);

/// E+(S) = sum_s r(s)^2.
Count additive_energy(std::span<const i128> set);

/// E+_h(S) = sum_s r(s) r(s - h).
Count asymmetric_energy(std::span<const i128> set, i128 h);

/// (h_star, e_star) over h != 0; |S| >= 2.
std::pair<i128, Count> max_asymmetric_energy(std::span<const i128> set,
                                             const EnergyOptions& options = {});

EnergyReport energy_fast(std::span<const i128> set, EnergyBackend backend,
                         const EnergyOptions& options = {});

nlohmann::json to_json(const EnergyReport& report);
/// Two-column CSV (h, E_h) of the shift table.
std::string h_table_csv(const EnergyReport& report);

}  // namespace sievebench
