#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"

namespace sievebench {

using Rational = boost::rational<i64>;

/// Large sieve bounds for the moduli q^k, q <= Q, as exponents of Q at N = Q^nu.
enum class BoundId {
  Classical,
  Trivial,
  Conjecture,
  Zhao,
  BaierZhao,
  BaierZhaoK3,
  Halupczok,
  Munsch,
  ThmK5,
  ThmEnergy,
  ThmF,
};

/// Catalog order; it also breaks ties in winner maps.
const std::vector<BoundId>& all_bounds();
std::string to_string(BoundId id);
BoundId parse_bound_id(const std::string& name);

bool bound_valid(BoundId id, int k);
/// Everything except the conjecture.
bool bound_proven(BoundId id);

/// kappa_k = 2^{k-1}; k >= 2.
i64 kappa(int k);
/// omega_k = 1/((k-1)(k-2)+2); k >= 2.
Rational omega(int k);

/// Exponent of Q in the bound with N = Q^nu, o(1) terms dropped.
/// DomainError when the bound does not apply at k.
double delta_exponent(BoundId id, int k, double nu);

/// Exact value for rational nu; empty for bounds whose exponent involves sqrt(k).
std::optional<Rational> delta_exponent_exact(BoundId id, int k, Rational nu);

/// max(nu + e_plus/4, 3 nu/4 + alpha/2 + e_star/4) for energies E+ = Q^{e_plus}
/// and E* = Q^{e_star} of the first Q moduli, which grow like j^alpha.
double energy_theorem_exponent(double alpha, double nu, double e_plus, double e_star);

struct NuInterval {
  double lo;
  double hi;
};

/// Maximal subintervals of [lo, hi] where bound a is strictly smaller than b.
/// Interior endpoints are located by bisection to 1e-12.
std::vector<NuInterval> crossover(BoundId a, BoundId b, int k, double lo, double hi);

struct WinnerEntry {
  double nu;
  BoundId id;
  double exponent;
};

/// Smallest proven valid bound at each nu; ties go to the earlier catalog entry.
std::vector<WinnerEntry> winner_map(int k, const std::vector<double>& nu_grid);

struct CrossoverReport {
  int k = 0;
  /// End of the range starting at nu = k where munsch beats baier_zhao.
  double lambda = 0;
  /// End of the range starting at nu = k+1+2/(k-1) where munsch beats halupczok.
  double mu = 0;
  /// Where thm_k5 starts to beat munsch (k >= 5); also reported as gamma.
  std::optional<double> sigma;
  double tau = 0;
  std::optional<double> gamma;
};

CrossoverReport crossover_report(int k);
nlohmann::json to_json(const CrossoverReport& report);

/// Level of distribution Phi(alpha) for 1 < alpha < 9/4.
double phi_alpha(double alpha);
Rational phi_alpha_exact(Rational alpha);

/// Left and right limits of Phi at a breakpoint, exactly.
std::pair<Rational, Rational> phi_alpha_limits(Rational breakpoint);

inline const Rational kPhiBreak1{26, 23};
inline const Rational kPhiBreak2{2, 1};
inline const Rational kPhiBreak3{23, 11};
inline const Rational kPhiUpperAlpha{9, 4};
/// Range x^{9/20} <= R <= x^{1/2} for the level of distribution.
inline const Rational kLevelLower{9, 20};
inline const Rational kLevelUpper{1, 2};
/// Threshold for prime Piatetski-Shapiro moduli.
inline const Rational kAlpha0{243, 205};

/// Largest difference, over the given nu and both terms, between the energy
/// theorem with E+ = Q^2, E* = Q^{1+2/sqrt(k)} and the k >= 5 bound.
/// DomainError for k < 5.
double composition_identity_gap(int k, const std::vector<double>& nus);
bool composition_identity_check(int k, const std::vector<double>& nus, double tol = 1e-12);

}  // namespace sievebench
