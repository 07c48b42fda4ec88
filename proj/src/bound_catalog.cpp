#include "sievebench/bound_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace sievebench {
namespace {

template <class T>
T frac(i64 p, i64 q) {
  if constexpr (std::is_same_v<T, double>)
    return static_cast<double>(p) / static_cast<double>(q);
  else
    return Rational(p, q);
}

template <class T>
T max3(T a, T b, T c) {
  return std::max(a, std::max(b, c));
}

void require_valid(BoundId id, int k) {
  if (!bound_valid(id, k))
    throw DomainError("bound " + to_string(id) + " does not apply at k=" + std::to_string(k));
}

// Exponents with N = Q^nu. Returns nullopt only for the sqrt(k) bounds in
// rational mode.
template <class T>
std::optional<T> evaluate(BoundId id, int k, T nu) {
  require_valid(id, k);
  const T K = frac<T>(k, 1);
  const T one = frac<T>(1, 1);
  switch (id) {
    case BoundId::Classical:
      return std::max(frac<T>(2, 1), nu);
    case BoundId::Trivial:
      return std::min(std::max(2 * K, nu), one + std::max(K, nu));
    case BoundId::Conjecture:
      return std::max(K + one, nu);
    case BoundId::Zhao:
    case BoundId::ThmF: {
      const T inv = frac<T>(1, kappa(k));
      return max3<T>(K + one, nu + one - inv, nu * (one - inv) + one + K * inv);
    }
    case BoundId::BaierZhao:
      return max3<T>(K + one, nu, nu / 2 + K);
    case BoundId::BaierZhaoK3:
      return max3<T>(frac<T>(4, 1), nu * frac<T>(9, 10) + frac<T>(6, 5), nu + frac<T>(6, 7));
    case BoundId::Halupczok: {
      const T inv = frac<T>(1, static_cast<i64>(k) * (k - 1));
      const T a = std::max(nu + one - inv, nu * (one - inv) + frac<T>(k, k - 1));
      const Rational w = omega(k);
      const T om = frac<T>(w.numerator(), w.denominator());
      const T b = nu * (one - om) + one + frac<T>(2 * k - 1, 1) * om;
      return std::max(K + one, std::min(a, b));
    }
    case BoundId::Munsch:
      return frac<T>(k + 2, k + 1) + nu * (one - frac<T>(1, static_cast<i64>(k) * (k + 1)));
    case BoundId::ThmK5:
      if constexpr (std::is_same_v<T, double>) {
        const double sk = std::sqrt(static_cast<double>(k));
        return std::max(nu + 0.5, 0.75 * nu + k / 2.0 + 0.25 + 1 / (2 * sk));
      } else {
        return std::nullopt;
      }
    case BoundId::ThmEnergy:
      if constexpr (std::is_same_v<T, double>) {
        const double e_star = std::min(2.0, 1 + 2 / std::sqrt(static_cast<double>(k)));
        return energy_theorem_exponent(k, nu, 2.0, e_star);
      } else {
        return std::nullopt;
      }
  }
  throw DomainError("unknown bound");
}

}  // namespace

const std::vector<BoundId>& all_bounds() {
  static const std::vector<BoundId> order = {
      BoundId::Classical, BoundId::Trivial,     BoundId::Conjecture, BoundId::Zhao,
      BoundId::BaierZhao, BoundId::BaierZhaoK3, BoundId::Halupczok,  BoundId::Munsch,
      BoundId::ThmK5,     BoundId::ThmEnergy,   BoundId::ThmF,
  };
  return order;
}

std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::Classical: return "classical";
    case BoundId::Trivial: return "trivial";
    case BoundId::Conjecture: return "conjecture";
    case BoundId::Zhao: return "zhao";
    case BoundId::BaierZhao: return "baier_zhao";
    case BoundId::BaierZhaoK3: return "baier_zhao_k3";
    case BoundId::Halupczok: return "halupczok";
    case BoundId::Munsch: return "munsch";
    case BoundId::ThmK5: return "thm_k5";
    case BoundId::ThmEnergy: return "thm_energy";
    case BoundId::ThmF: return "thm_f";
  }
  return "unknown";
}

BoundId parse_bound_id(const std::string& name) {
  for (BoundId id : all_bounds())
    if (to_string(id) == name) return id;
  throw ValidationError("unknown bound id: " + name);
}

bool bound_valid(BoundId id, int k) {
  switch (id) {
    case BoundId::Classical: return k == 1;
    case BoundId::Trivial:
    case BoundId::Conjecture: return k >= 1 && k <= 40;
    case BoundId::BaierZhaoK3: return k == 3;
    case BoundId::ThmK5: return k >= 5 && k <= 40;
    default: return k >= 2 && k <= 40;
  }
}

bool bound_proven(BoundId id) { return id != BoundId::Conjecture; }

i64 kappa(int k) {
  if (k < 2 || k > 62) throw DomainError("kappa needs 2 <= k <= 62");
  return i64(1) << (k - 1);
}

Rational omega(int k) {
  if (k < 2) throw DomainError("omega needs k >= 2");
  return Rational(1, static_cast<i64>(k - 1) * (k - 2) + 2);
}

double delta_exponent(BoundId id, int k, double nu) { return *evaluate<double>(id, k, nu); }

std::optional<Rational> delta_exponent_exact(BoundId id, int k, Rational nu) {
  return evaluate<Rational>(id, k, nu);
}

double energy_theorem_exponent(double alpha, double nu, double e_plus, double e_star) {
  return std::max(nu + e_plus / 4, 0.75 * nu + alpha / 2 + e_star / 4);
}

std::vector<NuInterval> crossover(BoundId a, BoundId b, int k, double lo, double hi) {
  require_valid(a, k);
  require_valid(b, k);
  if (!(lo < hi)) return {};
  auto beats = [&](double nu) { return delta_exponent(a, k, nu) < delta_exponent(b, k, nu); };
  // Bisect a sign change between x0 (state s0) and x1.
  auto refine = [&](double x0, double x1, bool s0) {
    while (x1 - x0 > 1e-12) {
      const double mid = 0.5 * (x0 + x1);
      if (beats(mid) == s0)
        x0 = mid;
      else
        x1 = mid;
    }
    return 0.5 * (x0 + x1);
  };
  constexpr int kSteps = 4096;
  std::vector<NuInterval> out;
  bool inside = beats(lo);
  double start = lo;
  double prev = lo;
  for (int i = 1; i <= kSteps; ++i) {
    const double x = lo + (hi - lo) * i / kSteps;
    const bool s = beats(x);
    if (s != inside) {
      const double edge = refine(prev, x, inside);
      if (inside)
        out.push_back({start, edge});
      else
        start = edge;
      inside = s;
    }
    prev = x;
  }
  if (inside) out.push_back({start, hi});
  return out;
}

std::vector<WinnerEntry> winner_map(int k, const std::vector<double>& nu_grid) {
  std::vector<BoundId> candidates;
  for (BoundId id : all_bounds())
    if (bound_proven(id) && bound_valid(id, k)) candidates.push_back(id);
  if (candidates.empty()) throw DomainError("no proven bound applies at k=" + std::to_string(k));
  std::vector<WinnerEntry> out;
  for (double nu : nu_grid) {
    WinnerEntry best{nu, candidates.front(), delta_exponent(candidates.front(), k, nu)};
    for (BoundId id : candidates) {
      const double e = delta_exponent(id, k, nu);
      if (e < best.exponent - 1e-12) best = {nu, id, e};
    }
    out.push_back(best);
  }
  return out;
}

CrossoverReport crossover_report(int k) {
  if (k < 2) throw DomainError("crossover report needs k >= 2");
  CrossoverReport r;
  r.k = k;
  const double lo = k;
  const double hi = 2.0 * k;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto end_of_range_from = [&](BoundId a, BoundId b, double from) {
    for (const auto& iv : crossover(a, b, k, lo, hi))
      if (iv.hi > from) return iv.hi;
    return nan;
  };
  r.lambda = end_of_range_from(BoundId::Munsch, BoundId::BaierZhao, lo);
  r.mu = end_of_range_from(BoundId::Munsch, BoundId::Halupczok, k + 1 + 2.0 / (k - 1));
  r.tau = std::min(r.lambda, r.mu);
  if (k >= 5) {
    const auto iv = crossover(BoundId::ThmK5, BoundId::Munsch, k, lo, hi);
    if (!iv.empty()) {
      r.sigma = iv.front().lo;
      r.gamma = iv.front().lo;
    }
  }
  return r;
}

nlohmann::json to_json(const CrossoverReport& report) {
  nlohmann::json j = {{"k", report.k},
                      {"lambda", report.lambda},
                      {"mu", report.mu},
                      {"tau", report.tau}};
  j["sigma"] = report.sigma ? nlohmann::json(*report.sigma) : nlohmann::json(nullptr);
  j["gamma"] = report.gamma ? nlohmann::json(*report.gamma) : nlohmann::json(nullptr);
  return j;
}

Rational phi_alpha_exact(Rational alpha) {
  if (alpha <= Rational(1) || alpha >= kPhiUpperAlpha)
    throw DomainError("Phi(alpha) needs 1 < alpha < 9/4");
  if (alpha < kPhiBreak1) return 3 * alpha / (10 * alpha - 4);
  if (alpha < kPhiBreak2) return Rational(13, 28);
  if (alpha < kPhiBreak3) return 13 * alpha / (34 * alpha - 12);
  return 7 * alpha / (20 * alpha - 10);
}

double phi_alpha(double alpha) {
  if (!(alpha > 1) || !(alpha < 2.25)) throw DomainError("Phi(alpha) needs 1 < alpha < 9/4");
  if (alpha < 26.0 / 23) return 3 * alpha / (10 * alpha - 4);
  if (alpha < 2) return 13.0 / 28;
  if (alpha < 23.0 / 11) return 13 * alpha / (34 * alpha - 12);
  return 7 * alpha / (20 * alpha - 10);
}

std::pair<Rational, Rational> phi_alpha_limits(Rational b) {
  // Each piece is a rational function continuous on a neighbourhood of the
  // breakpoint, so the one-sided limits are the neighbouring pieces evaluated at b.
  if (b == kPhiBreak1) return {3 * b / (10 * b - 4), Rational(13, 28)};
  if (b == kPhiBreak2) return {Rational(13, 28), 13 * b / (34 * b - 12)};
  if (b == kPhiBreak3) return {13 * b / (34 * b - 12), 7 * b / (20 * b - 10)};
  throw DomainError("not a breakpoint of Phi");
}

double composition_identity_gap(int k, const std::vector<double>& nus) {
  if (k < 5) throw DomainError("the k >= 5 bound has no counterpart for k < 5");
  const double sk = std::sqrt(static_cast<double>(k));
  const double e_star = 1 + 2 / sk;
  double gap = 0;
  for (double nu : nus) {
    const double energy1 = nu + 2.0 / 4;
    const double energy2 = 0.75 * nu + k / 2.0 + e_star / 4;
    const double direct1 = nu + 0.5;
    const double direct2 = 0.75 * nu + k / 2.0 + 0.25 + 1 / (2 * sk);
    gap = std::max({gap, std::abs(energy1 - direct1), std::abs(energy2 - direct2),
                    std::abs(energy_theorem_exponent(k, nu, 2, e_star) -
                             delta_exponent(BoundId::ThmK5, k, nu))});
  }
  return gap;
}

bool composition_identity_check(int k, const std::vector<double>& nus, double tol) {
  return composition_identity_gap(k, nus) <= tol;
}

}  // namespace sievebench
