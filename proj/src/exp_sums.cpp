#include "sievebench/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

extern "C" {
#include <quadmath.h>
}

#include "sievebench/arith.hpp"

namespace sievebench {
namespace {

std::complex<double> e(double x) {
  const double a = 2 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

double frac_q(__float128 v) { return static_cast<double>(v - floorq(v)); }

// J/2 < j <= J for J = R^{1/alpha}, i.e. j^alpha <= R < (2j)^alpha.
std::pair<i64, i64> sim_range(const Exponent& alpha, i64 R) {
  const double J = std::pow(static_cast<double>(R), 1 / alpha.value());
  i64 hi = std::max<i64>(1, static_cast<i64>(J) + 2);
  while (hi >= 1 && power_exceeds(hi, alpha, R)) --hi;
  i64 lo = std::max<i64>(1, static_cast<i64>(J / 2) - 2);
  while (lo <= hi && !power_exceeds(2 * lo, alpha, R)) ++lo;
  return {lo, hi};
}

// The j with R/2 < j^alpha <= R.
std::pair<i64, i64> power_sim_range(const Exponent& alpha, i64 R) {
  auto above_half = [&](i64 j) {
    if (R % 2 == 0) return power_exceeds(j, alpha, R / 2);
    // j^alpha is never a half-integer, so the extended-precision comparison decides.
    return 2 * powq(static_cast<__float128>(j), alpha.quad()) > static_cast<__float128>(R);
  };
  const double J = std::pow(static_cast<double>(R), 1 / alpha.value());
  i64 hi = std::max<i64>(1, static_cast<i64>(J) + 2);
  while (hi >= 1 && power_exceeds(hi, alpha, R)) --hi;
  i64 lo = std::max<i64>(1, static_cast<i64>(J / std::pow(2.0, 1 / alpha.value())) - 2);
  while (lo <= hi && !above_half(lo)) ++lo;
  return {lo, hi};
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw ValidationError("polynomial needs at least one coefficient");
}

double RealPolynomial::phase(i64 u) const {
  __float128 acc = 0;
  const __float128 x = static_cast<__float128>(u);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + static_cast<__float128>(*it);
    acc -= floorq(acc);
  }
  return frac_q(acc);
}

nlohmann::json to_json(const ExpSumValue& v) {
  return {{"re", v.value.real()}, {"im", v.value.imag()}, {"abs", std::abs(v.value)}, {"terms", v.terms}};
}

ExpSumValue weyl_sum(const RealPolynomial& F, i64 U) {
  if (U < 1) throw PreconditionError("U must be at least 1");
  CompensatedComplexSum s;
  for (i64 u = 1; u <= U; ++u) s.add(e(F.phase(u)));
  return {s.value(), U};
}

double weyl_bound_rhs(const RealPolynomial& F, i64 U, int threads) {
  const int k = F.degree();
  if (k < 2) throw DomainError("Weyl bound needs degree >= 2");
  if (U < 1) throw PreconditionError("U must be at least 1");
  const double side = 2.0 * static_cast<double>(U) - 1;
  if (std::pow(side, k - 1) > kWeylLatticeBudget)
    throw CapacityError("Weyl lattice has more than 1e8 points");
  __float128 scale = static_cast<__float128>(F.leading());
  for (int i = 2; i <= k; ++i) scale *= i;
  const i64 width = 2 * U - 1;
  const double cap = static_cast<double>(U);
  // Outer coordinate in parallel, remaining k-2 coordinates enumerated inside.
  std::vector<double> partial(static_cast<std::size_t>(width));
  parallel_for(partial.size(), threads, [&](std::size_t idx) {
    const i64 l1 = static_cast<i64>(idx) - (U - 1);
    std::vector<i64> rest(static_cast<std::size_t>(k - 2), -(U - 1));
    CompensatedSum s;
    while (true) {
      __float128 prod = static_cast<__float128>(l1);
      for (i64 l : rest) prod *= l;
      const __float128 v = scale * prod;
      const double f = frac_q(v);
      const double dist = std::min(f, 1 - f);
      s.add(dist * cap > 1 ? 1 / dist : cap);
      std::size_t pos = 0;
      while (pos < rest.size() && rest[pos] == U - 1) rest[pos++] = -(U - 1);
      if (pos == rest.size()) break;
      ++rest[pos];
    }
    partial[idx] = s.value();
  });
  CompensatedSum total;
  for (double p : partial) total.add(p);
  const double kap = std::ldexp(1.0, k - 1);
  return std::pow(cap, 1 - k / kap) * std::pow(total.value(), 1 / kap);
}

ExpSumValue sh_sum(const Exponent& alpha, i64 t, i64 h, i64 R) {
  if (t < 1) throw PreconditionError("t must be at least 1");
  if (R < 1) throw PreconditionError("R must be at least 1");
  const auto [lo, hi] = sim_range(alpha, R);
  CompensatedComplexSum s;
  i64 terms = 0;
  for (i64 j = lo; j <= hi; ++j) {
    s.add(e(power_phase(j, alpha, h, t)));
    ++terms;
  }
  return {s.value(), terms};
}

PsDivisible ps_divisible_count(const Exponent& alpha, i64 t, i64 R) {
  if (t < 1) throw PreconditionError("t must be at least 1");
  if (!(alpha.value() > 1)) throw DomainError("alpha must exceed 1");
  PsDivisible out;
  if (R < 1) return out;
  const double J = std::pow(static_cast<double>(R), 1 / alpha.value());
  i64 j = std::max<i64>(1, static_cast<i64>(J / std::pow(2.0, 1 / alpha.value())) - 2);
  for (;; ++j) {
    const i128 m = certified_floor_power(j, alpha).floor;
    if (m > R) break;
    if (2 * m <= R) continue;
    if (m % t == 0) {
      out.quotients.push_back(m / t);
      out.indices.push_back(j);
    }
  }
  out.count = static_cast<i64>(out.quotients.size());
  return out;
}

CardAudit card_bound_audit(const Exponent& alpha, const std::vector<i64>& t_grid,
                           const std::vector<i64>& R_grid) {
  auto Rs = R_grid;
  auto ts = t_grid;
  std::sort(Rs.begin(), Rs.end());
  std::sort(ts.begin(), ts.end());
  CardAudit out;
  for (i64 R : Rs) {
    for (i64 t : ts) {
      CardRow row;
      row.alpha = alpha.value();
      row.t = t;
      row.R = R;
      // t <= R^{1/6} decided in integers
      const i128 t6 = arith::checked_pow(t, 6);
      row.flagged = t6 > R;
      row.count = ps_divisible_count(alpha, t, R).count;
      row.rhs = std::pow(static_cast<double>(R), 1 / alpha.value()) / static_cast<double>(t) +
                std::sqrt(static_cast<double>(R));
      row.ratio = static_cast<double>(row.count) / row.rhs;
      // {j^alpha/t} < 1/t holds exactly when t divides floor(j^alpha); the
      // closed reading adds integer j^alpha = 1 mod t.
      const auto [lo, hi] = power_sim_range(alpha, R);
      for (i64 j = lo; j <= hi; ++j) {
        const auto f = certified_floor_power(j, alpha);
        if (f.floor % t == 0) {
          ++row.phase_count;
          ++row.closed_count;
        } else if (f.exact_integer && f.floor % t == 1) {
          ++row.closed_count;
        }
      }
      out.max_discrepancy = std::max<i64>(
          {out.max_discrepancy, std::abs(row.count - row.phase_count),
           std::abs(row.count - row.closed_count)});
      out.rows.push_back(row);
    }
  }
  for (const auto& row : out.rows) {
    if (row.flagged) continue;
    if (out.frozen_C == 0) out.frozen_C = row.ratio;
    if (row.ratio > 1.25 * out.frozen_C) out.within_tolerance = false;
  }
  return out;
}

ErdosTuranResult erdos_turan_count(const std::vector<double>& points, double a, double b, i64 H) {
  if (!(0 <= a && a <= b && b <= 1)) throw PreconditionError("need 0 <= a <= b <= 1");
  if (H < 1) throw PreconditionError("H must be at least 1");
  ErdosTuranResult out;
  for (double g : points)
    if (g >= a && g <= b) ++out.exact;
  const double U = static_cast<double>(points.size());
  out.expected = U * (b - a);
  CompensatedSum rhs;
  rhs.add(U / static_cast<double>(H));
  for (i64 h = 1; h <= H; ++h) {
    CompensatedComplexSum s;
    for (double g : points) {
      const double x = static_cast<double>(h) * g;
      s.add(e(x - std::floor(x)));
    }
    const double hd = static_cast<double>(h);
    rhs.add((1 / static_cast<double>(H) + std::min(b - a, 1 / hd)) * std::abs(s.value()));
  }
  out.rhs = rhs.value();
  return out;
}

VdcAudit vdc_audit(const Exponent& alpha, const std::vector<i64>& R_grid) {
  auto Rs = R_grid;
  std::sort(Rs.begin(), Rs.end());
  VdcAudit out;
  for (i64 R : Rs) {
    for (i64 t = 1; arith::checked_pow(t, 6) <= R; ++t) {
      for (i64 h = 1; h <= t; ++h) {
        VdcRow row;
        row.alpha = alpha.value();
        row.t = t;
        row.R = R;
        row.h = h;
        row.measured = std::abs(sh_sum(alpha, t, h, R).value);
        const double hd = static_cast<double>(h), td = static_cast<double>(t),
                     Rd = static_cast<double>(R);
        row.rhs = std::sqrt(hd * Rd / td) +
                  std::sqrt(td / hd) * std::pow(Rd, 1 / alpha.value() - 0.5);
        row.ratio = row.measured / row.rhs;
        out.rows.push_back(row);
      }
    }
  }
  if (out.rows.empty()) return out;
  const i64 first_R = out.rows.front().R;
  for (const auto& row : out.rows)
    if (row.R == first_R) out.frozen_C = std::max(out.frozen_C, row.ratio);
  for (const auto& row : out.rows)
    if (row.ratio > 1.25 * out.frozen_C) out.within_tolerance = false;
  return out;
}

std::string to_csv(const CardAudit& audit) {
  std::ostringstream os;
  os << "# schema=v1\nalpha,t,R,h,measured,rhs,ratio,flagged,phase_count,closed_count\n";
  for (const auto& r : audit.rows)
    os << format_double(r.alpha) << ',' << r.t << ',' << r.R << ",," << r.count << ','
       << format_double(r.rhs) << ',' << format_double(r.ratio) << ',' << (r.flagged ? 1 : 0) << ','
       << r.phase_count << ',' << r.closed_count << '\n';
  return os.str();
}

std::string to_csv(const VdcAudit& audit) {
  std::ostringstream os;
  os << "# schema=v1\nalpha,t,R,h,measured,rhs,ratio\n";
  for (const auto& r : audit.rows)
    os << format_double(r.alpha) << ',' << r.t << ',' << r.R << ',' << r.h << ','
       << format_double(r.measured) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio)
       << '\n';
  return os.str();
}

}  // namespace sievebench
