#include "sievebench/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "sievebench/additive_energy.hpp"
#include "sievebench/arith.hpp"
#include "sievebench/bound_catalog.hpp"
#include "sievebench/bv_experiment.hpp"
#include "sievebench/exp_sums.hpp"
#include "sievebench/moduli.hpp"
#include "sievebench/sieve_sums.hpp"

namespace sievebench {
namespace {

// Concatenates tables that share the schema and header lines.
void append_csv(std::string& acc, const std::string& table) {
  if (acc.empty()) {
    acc = table;
    return;
  }
  std::size_t pos = 0;
  for (int i = 0; i < 2 && pos != std::string::npos; ++i) pos = table.find('\n', pos) + 1;
  acc += table.substr(pos);
}

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (passed) detail.str("");
    passed = false;
    detail << why << "; ";
  }
  void note(const std::string& what) {
    if (passed) detail << what << "; ";
  }
};

void write_file(const AcceptanceOptions& o, const std::string& name, const std::string& text) {
  if (!o.out_dir) return;
  std::filesystem::create_directories(*o.out_dir);
  std::ofstream(*o.out_dir / name) << text;
}

std::string fmt(double v) { return format_double(v); }

// 1. sigma_k >= tau_k for k = 5, 6 and sigma_k < tau_k for k = 7..12;
// |sigma_k - (2k-3)| sqrt(k) and |lambda_k - (2k-2)| k bounded by 10, k <= 20.
void crossovers(const AcceptanceOptions& o, Outcome& out) {
  double worst_sigma = 0, worst_lambda = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 2; k <= 20; ++k) {
    const auto r = crossover_report(k);
    rows.push_back(to_json(r));
    if (std::isfinite(r.lambda)) worst_lambda = std::max(worst_lambda, std::abs(r.lambda - (2 * k - 2)) * k);
    else if (k >= 3) out.fail("lambda_" + std::to_string(k) + " missing");
    if (k < 5) continue;
    if (!r.sigma) {
      out.fail("sigma_" + std::to_string(k) + " missing");
      continue;
    }
    worst_sigma = std::max(worst_sigma, std::abs(*r.sigma - (2 * k - 3)) * std::sqrt(double(k)));
    if (k <= 6 && !(*r.sigma >= r.tau))
      out.fail("k=" + std::to_string(k) + ": sigma < tau");
    if (k >= 7 && k <= 12 && !(*r.sigma < r.tau))
      out.fail("k=" + std::to_string(k) + ": sigma >= tau");
  }
  if (worst_sigma > 10) out.fail("sigma gap * sqrt(k) = " + fmt(worst_sigma));
  if (worst_lambda > 10) out.fail("lambda gap * k = " + fmt(worst_lambda));
  out.note("max |sigma-(2k-3)|sqrt(k) = " + fmt(worst_sigma));
  out.note("max |lambda-(2k-2)|k = " + fmt(worst_lambda));
  write_file(o, "crossovers.json", rows.dump(2));
}

// 2. Exact continuity of Phi at its breakpoints; Phi > 9/20 on a grid.
void phi_checks(const AcceptanceOptions&, Outcome& out) {
  for (const Rational& b : {kPhiBreak1, kPhiBreak2, kPhiBreak3}) {
    const auto [left, right] = phi_alpha_limits(b);
    if (left != right || phi_alpha_exact(b) != right)
      out.fail("discontinuity at " + std::to_string(b.numerator()) + "/" + std::to_string(b.denominator()));
  }
  const double lo = 1 + 1e-3, hi = 2.25 - 1e-3;
  double least = 1;
  for (int i = 0; i < 1000; ++i) {
    const double a = lo + (hi - lo) * i / 999;
    const double v = phi_alpha(a);
    least = std::min(least, v);
    if (!(v > 0.45)) out.fail("Phi(" + fmt(a) + ") = " + fmt(v));
  }
  out.note("min Phi on grid = " + fmt(least));
}

bool same_energy(const EnergyReport& a, const EnergyReport& b) {
  return a.e_plus == b.e_plus && a.e_star == b.e_star && a.h_star == b.h_star;
}

// 3. Oracle, additive_energy and both fast backends agree exactly.
void energy_oracles(const AcceptanceOptions& o, Outcome& out) {
  std::vector<std::vector<i128>> sets;
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const i64 span = 5 + static_cast<i64>(rng() % 200);
    std::vector<i128> s;
    for (int j = 0; j < n; ++j) s.push_back(static_cast<i128>(rng() % static_cast<u64>(2 * span + 1)) - span);
    sets.push_back(s);
  }
  for (int k = 1; k <= 5; ++k)
    for (i64 U = 1; U <= 8; ++U) sets.push_back(generate_power(k, U).values());
  int checked = 0;
  for (const auto& s : sets) {
    const auto oracle = energy_oracle(s);
    const auto sparse = energy_fast(s, EnergyBackend::Sparse);
    const auto dense = energy_fast(s, EnergyBackend::Dense);
    const bool ok = same_energy(oracle, sparse) && same_energy(oracle, dense) &&
                    additive_energy(s) == oracle.e_plus;
    if (!ok) {
      std::string text;
      for (auto v : s) text += to_string(v) + " ";
      out.fail("mismatch on {" + text + "}");
    }
    ++checked;
  }
  out.note(std::to_string(checked) + " sets agree");
}

// 4. Naive vs fast sieve forms, Parseval closure, scaling invariance.
void sieve_oracles(const AcceptanceOptions& o, Outcome& out) {
  std::mt19937_64 rng(o.seed ^ 0x51e7e);
  double worst_fast = 0, worst_parseval = 0, worst_scale = 0;
  for (int i = 0; i < 100; ++i) {
    const i64 Q = 1 + static_cast<i64>(rng() % 8);
    const i64 N = 1 + static_cast<i64>(rng() % 64);
    const i64 M = static_cast<i64>(rng() % 1000) - 500;
    ModuliSequence seq;
    switch (i % 5) {
      case 0: seq = generate_power(1, Q); break;
      case 1: seq = generate_power(2, Q); break;
      case 2: seq = generate_power(3, Q); break;
      case 3: seq = generate_polynomial(IntPolynomial({1, 1, 1}), Q); break;
      default: seq = generate_piatetski_shapiro(Exponent::rational(3, 2), Q); break;
    }
    const auto a = CoefficientVector::random(M, N, rng());
    const auto naive = sieve_sum_naive(a, seq, Q);
    const auto fast = sieve_sum_fast(a, seq, Q);
    worst_fast = std::max(worst_fast, std::abs(fast.total - naive.total) / std::max(1.0, naive.total));
    const i128 m = seq.at(static_cast<std::size_t>(Q));
    const double full = full_form_naive(a, m);
    const double buckets = full_form_buckets(a, m);
    CompensatedSum by_divisor;
    for (i128 d : arith::divisors(arith::factorize(m))) by_divisor.add(coprime_form_fast(a, d));
    const double scale = std::max(1.0, full);
    worst_parseval = std::max({worst_parseval, std::abs(full - buckets) / scale,
                               std::abs(by_divisor.value() - full) / scale});
    auto b = a;
    const Complex c = std::polar(1.7, 0.3 + i);
    for (auto& v : b.values) v *= c;
    const auto scaled = sieve_sum_fast(b, seq, Q);
    if (fast.ratio > 0)
      worst_scale = std::max(worst_scale, std::abs(scaled.ratio - fast.ratio) / fast.ratio);
  }
  if (worst_fast > 1e-9) out.fail("naive/fast relative gap " + fmt(worst_fast));
  if (worst_parseval > 1e-9) out.fail("Parseval relative gap " + fmt(worst_parseval));
  if (worst_scale > 1e-12) out.fail("scaling relative gap " + fmt(worst_scale));
  out.note("naive/fast " + fmt(worst_fast) + ", Parseval " + fmt(worst_parseval) + ", scaling " +
           fmt(worst_scale));
}

// 5. Certificates and monotone Rayleigh quotients.
void sieve_certificates(const AcceptanceOptions& o, Outcome& out) {
  struct Case {
    std::string name;
    ModuliSequence seq;
  };
  std::vector<Case> cases = {
      {"squares", generate_power(2, 16)},
      {"cubes", generate_power(3, 16)},
      {"linear", generate_power(1, 16)},
      {"ps1.5", generate_piatetski_shapiro(Exponent::rational(3, 2), 16)},
      {"x^2+x+1", generate_polynomial(IntPolynomial({1, 1, 1}), 16)},
      {"[2]", ModuliSequence::explicit_values({2})},
  };
  int runs = 0;
  double worst_drop = 0;
  for (const auto& c : cases) {
    const i64 Qmax = static_cast<i64>(c.seq.size());
    for (i64 Q : {i64(1), i64(4), i64(16)}) {
      if (Q > Qmax) continue;
      for (i64 N : {i64(1), i64(16), i64(128), i64(512)}) {
        SieveConstantOptions opts;
        opts.seed = o.seed + static_cast<u64>(runs);
        opts.threads = o.threads;
        opts.tol = 1e-9;
        opts.max_iter = 300;
        const auto est = estimate_sieve_constant(c.seq, Q, N, 0, opts);
        ++runs;
        if (est.delta_star_lower < est.certificate - opts.tol * est.certificate)
          out.fail(c.name + " Q=" + std::to_string(Q) + " N=" + std::to_string(N) + ": quotient " +
                   fmt(est.delta_star_lower) + " below " + fmt(est.certificate));
        for (std::size_t i = 1; i < est.history.size(); ++i) {
          const double drop = (est.history[i - 1] - est.history[i]) / est.history[i - 1];
          worst_drop = std::max(worst_drop, drop);
        }
      }
    }
  }
  if (worst_drop > 1e-12) out.fail("Rayleigh quotient decreased by " + fmt(worst_drop) + " relative");
  out.note(std::to_string(runs) + " runs, largest relative decrease " + fmt(worst_drop));
}

// 6. Energy theorem + energy bounds reproduce the k >= 5 exponents.
void composition(const AcceptanceOptions&, Outcome& out) {
  double worst = 0;
  for (int k = 5; k <= 12; ++k) {
    std::vector<double> nus;
    for (int i = 0; i < 100; ++i) nus.push_back(k + k * i / 99.0);
    worst = std::max(worst, composition_identity_gap(k, nus));
  }
  if (worst > 1e-12) out.fail("identity gap " + fmt(worst));
  out.note("max gap " + fmt(worst));
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return fit_slope(lx, ly);
}

// 7. Energy slopes and the cardinality constant.
void slope_audits(const AcceptanceOptions& o, Outcome& out) {
  EnergyOptions eo;
  eo.threads = o.threads;
  eo.table_limit = 0;
  for (const auto& alpha : {Exponent::rational(3, 2), Exponent::rational(5, 2)}) {
    std::vector<double> qs, es;
    for (i64 Q = 128; Q <= 2048; Q *= 2) {
      const auto seq = generate_piatetski_shapiro(alpha, Q);
      qs.push_back(static_cast<double>(Q));
      es.push_back(static_cast<double>(additive_energy(seq.values())));
    }
    const double s = slope_of(qs, es);
    const double cap = std::max(2.0, 4 - alpha.value()) + 0.2;
    if (s > cap) out.fail("PS alpha=" + alpha.to_string() + " energy slope " + fmt(s) + " > " + fmt(cap));
    out.note("(a) alpha=" + alpha.to_string() + " slope " + fmt(s) + " <= " + fmt(cap));
  }
  {
    std::vector<double> us, es;
    for (i64 U = 16; U <= 128; U *= 2) {
      const auto seq = generate_power(5, U);
      us.push_back(static_cast<double>(U));
      es.push_back(static_cast<double>(max_asymmetric_energy(seq.values(), eo).second));
    }
    const double s = slope_of(us, es);
    const double cap = 1 + 2 / std::sqrt(5.0) + 0.25;
    if (s > cap) out.fail("k=5 E* slope " + fmt(s) + " > " + fmt(cap));
    out.note("(b) k=5 E* slope " + fmt(s) + " <= " + fmt(cap));
  }
  std::vector<i64> Rs, ts;
  for (i64 R = 1 << 10; R <= (1 << 18); R *= 2) Rs.push_back(R);
  for (i64 t = 1; t <= 8; ++t) ts.push_back(t);
  std::string csv;
  for (const auto& alpha : {Exponent::rational(13, 10), Exponent::rational(17, 10)}) {
    const auto audit = card_bound_audit(alpha, ts, Rs);
    append_csv(csv, to_csv(audit));
    double worst = 0;
    for (const auto& r : audit.rows)
      if (!r.flagged) worst = std::max(worst, r.ratio / audit.frozen_C);
    if (!audit.within_tolerance)
      out.fail("card constant alpha=" + alpha.to_string() + " grew by " + fmt(worst));
    out.note("(c) alpha=" + alpha.to_string() + " C=" + fmt(audit.frozen_C) + " max growth " + fmt(worst) +
             " reading discrepancy " + std::to_string(audit.max_discrepancy));
  }
  write_file(o, "card_audit.csv", csv);
}

// 8. Desk-scale BV run.
void bv_run(const AcceptanceOptions& o, Outcome& out) {
  const u64 x = 1'000'000;
  const auto table = PrimeTable::build(x);
  if (table.prime_count(x) != 78498) out.fail("pi(10^6) = " + std::to_string(table.prime_count(x)));
  for (u64 q = 1; q <= 50; ++q)
    for (u64 xx : {u64(1000), u64(10000)})
      if (!partition_identity_holds(table, xx, q))
        out.fail("partition identity q=" + std::to_string(q) + " x=" + std::to_string(xx));
  for (u64 xx : {u64(1000), u64(10000), u64(100000)})
    if (!(psi_ascending(table, xx) == psi_descending(table, xx)))
      out.fail("psi traversal orders differ at x=" + std::to_string(xx));
  const auto alpha = Exponent::rational(6, 5);
  const u64 R = static_cast<u64>(std::floor(std::pow(double(x), 0.4)));
  const auto r1 = bv_sum(table, alpha, x, R, 1);
  const auto r2 = bv_sum(table, alpha, x, R, 1);
  const auto r4 = bv_sum(table, alpha, x, R, 4);
  const std::string c1 = to_csv(r1) + to_json(r1).dump();
  if (c1 != to_csv(r2) + to_json(r2).dump()) out.fail("repeat run differs");
  if (c1 != to_csv(r4) + to_json(r4).dump()) out.fail("4-thread run differs");
  double worst_bt = 0;
  for (const auto& row : r1.rows)
    worst_bt = std::max(worst_bt, std::abs(row.E) * static_cast<double>(row.phi_q) / static_cast<double>(x));
  if (worst_bt > 2) out.fail("Brun-Titchmarsh ceiling exceeded: " + fmt(worst_bt));
  out.note("R=" + std::to_string(R) + ", " + std::to_string(r1.rows.size()) + " moduli, rho=" + fmt(r1.rho) +
           ", max |E|phi/x=" + fmt(worst_bt));
  write_file(o, "bv_report.csv", to_csv(r1));
  write_file(o, "bv_report.json", to_json(r1).dump(2));
}

// 9. Theorem audits with the constant frozen at the smallest Q.
void theorem_audits(const AcceptanceOptions& o, Outcome& out) {
  std::vector<AuditFamily> families = {AuditFamily::monomial(2), AuditFamily::monomial(3),
                                       AuditFamily::monomial(5),
                                       AuditFamily::polynomial(IntPolynomial({1, 1, 1}))};
  SieveConstantOptions opts;
  opts.seed = o.seed;
  opts.threads = o.threads;
  opts.tol = 1e-7;
  opts.max_iter = 200;
  opts.budget = 1e9;
  std::string csv;
  for (const auto& f : families) {
    std::vector<std::pair<i64, double>> grid;
    const double k = f.exponent();
    for (i64 Q : {i64(4), i64(6), i64(8)})
      for (double frac : {1.0, 1.25, 1.5}) grid.emplace_back(Q, frac * k);
    const auto audit = bound_audit(f, grid, opts);
    append_csv(csv, to_csv(audit));
    double worst = 0;
    for (const auto& r : audit.rows)
      if (r.in_range) worst = std::max(worst, r.fitted_C / r.frozen_C);
    if (!audit.within_tolerance)
      out.fail(f.name() + " k=" + std::to_string(f.k) + " constant grew by " + fmt(worst));
    out.note(f.name() + " k=" + std::to_string(f.k) + " max growth " + fmt(worst));
  }
  write_file(o, "theorem_audits.csv", csv);
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  void (*run)(const AcceptanceOptions&, Outcome&);
};

const Criterion kCriteria[] = {
    {1, "crossover reproduction", 5, crossovers},
    {2, "Phi(alpha) checks", 1, phi_checks},
    {3, "energy oracle equivalence", 30, energy_oracles},
    {4, "sieve-form oracle equivalence", 60, sieve_oracles},
    {5, "sieve-constant certificates", 60, sieve_certificates},
    {6, "composition identity", 1, composition},
    {7, "slope audits", 600, slope_audits},
    {8, "BV desk run", 300, bv_run},
    {9, "theorem energy / theorem f audits", 600, theorem_audits},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  for (const auto& c : kCriteria) {
    if (!options.only.empty() && !options.only.count(c.id)) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(options, out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > c.limit) out.fail("runtime " + fmt(r.seconds) + " s over limit");
    r.passed = out.passed;
    r.detail = out.detail.str();
    if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
    if (options.log) *options.log << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << ") "
     << std::fixed;
  os.precision(2);
  os << r.seconds << "s/" << r.limit_seconds << "s: " << r.detail;
  return os.str();
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"seconds", r.seconds},
                   {"limit_seconds", r.limit_seconds},
                   {"detail", r.detail}});
  return arr;
}

}  // namespace sievebench
