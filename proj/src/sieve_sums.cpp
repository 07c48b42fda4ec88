#include "sievebench/sieve_sums.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "sievebench/additive_energy.hpp"
#include "sievebench/arith.hpp"

namespace sievebench {
namespace {

double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// e(r/m) for r = 0..m-1.
std::vector<Complex> root_table(i128 m) {
  std::vector<Complex> t(static_cast<std::size_t>(m));
  const double md = static_cast<double>(m);
  for (std::size_t r = 0; r < t.size(); ++r) {
    const double x = 2 * std::numbers::pi * static_cast<double>(r) / md;
    t[r] = {std::cos(x), std::sin(x)};
  }
  return t;
}

// |sum_n a_n e(a n / m)|^2 for a single a; residues stepped exactly.
double point_value(const CoefficientVector& c, const std::vector<Complex>& table, i128 a, i128 m) {
  const i128 step = arith::mod(a, m);
  i128 r = arith::mulmod(step, arith::mod(c.M + 1, m), m);
  CompensatedComplexSum s;
  for (const auto& v : c.values) {
    s.add(v * table[static_cast<std::size_t>(r)]);
    r += step;
    if (r >= m) r -= m;
  }
  return std::norm(s.value());
}

// sum_r |sum_{n = r mod q} a_n|^2.
double bucket_energy(const CoefficientVector& c, i128 q) {
  const i64 N = c.N();
  if (q >= N) return c.norm_sq();
  std::vector<Complex> buckets(static_cast<std::size_t>(q));
  i128 r = arith::mod(c.M + 1, q);
  for (const auto& v : c.values) {
    buckets[static_cast<std::size_t>(r)] += v;
    if (++r == q) r = 0;
  }
  CompensatedSum s;
  for (const auto& b : buckets) s.add(std::norm(b));
  return s.value();
}

double coprime_from_factors(const CoefficientVector& c, i128 m,
                            const std::vector<arith::PrimePower>& factors) {
  CompensatedSum s;
  for (const auto& [d, mu] : arith::squarefree_divisors(factors)) {
    const i128 q = m / d;
    s.add(mu * static_cast<double>(q) * bucket_energy(c, q));
  }
  return std::max(0.0, s.value());
}

SieveResult finish(const CoefficientVector& c, std::vector<std::pair<i128, double>> per) {
  SieveResult out;
  CompensatedSum total;
  for (const auto& p : per) total.add(p.second);
  out.total = total.value();
  out.norm_sq = c.norm_sq();
  out.ratio = out.norm_sq > 0 ? out.total / out.norm_sq : 0.0;
  out.per_modulus = std::move(per);
  return out;
}

void check_q(const ModuliSequence& seq, i64 Q) {
  if (Q < 1 || static_cast<std::size_t>(Q) > seq.size())
    throw PreconditionError("Q must lie in [1, length of sequence]");
}

// FFTW plans are not thread-safe to create; build them all up front.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [m, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }
  void ensure(std::size_t m) {
    if (plans_.count(m)) return;
    fftw_complex* in = fftw_alloc_complex(m);
    fftw_complex* out = fftw_alloc_complex(m);
    Pair p;
    p.forward = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_[m] = p;
  }
  fftw_plan forward(std::size_t m) const { return plans_.at(m).forward; }
  fftw_plan backward(std::size_t m) const { return plans_.at(m).backward; }

 private:
  struct Pair {
    fftw_plan forward;
    fftw_plan backward;
  };
  std::map<std::size_t, Pair> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(std::max<std::size_t>(n, 1))), size(n) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

// A and A^* for the nodes a/m_j, j <= Q.
class SieveOperator {
 public:
  SieveOperator(const ModuliSequence& seq, i64 Q, i64 N, i64 M, int threads)
      : N_(N), M_(M), threads_(threads) {
    for (i64 j = 1; j <= Q; ++j) {
      const i128 m = seq.at(static_cast<std::size_t>(j));
      moduli_.push_back(static_cast<std::size_t>(m));
      residues_.push_back(reduced_residues(m));
      offsets_.push_back(nodes_);
      nodes_ += residues_.back().size();
      plans_.ensure(moduli_.back());
    }
  }

  std::size_t node_count() const noexcept { return nodes_; }

  std::vector<Complex> apply(const std::vector<Complex>& a) const {
    std::vector<Complex> c(nodes_);
    parallel_for(moduli_.size(), threads_, [&](std::size_t j) {
      const std::size_t m = moduli_[j];
      FftwBuffer in(m), out(m);
      std::fill_n(reinterpret_cast<double*>(in.data), 2 * m, 0.0);
      std::size_t r = static_cast<std::size_t>(arith::mod(M_ + 1, static_cast<i128>(m)));
      for (const auto& v : a) {
        in.data[r][0] += v.real();
        in.data[r][1] += v.imag();
        if (++r == m) r = 0;
      }
      // c_a = sum_r B_r e(a r / m)
      fftw_execute_dft(plans_.backward(m), in.data, out.data);
      const auto& res = residues_[j];
      for (std::size_t i = 0; i < res.size(); ++i) {
        const auto idx = static_cast<std::size_t>(res[i]);
        c[offsets_[j] + i] = {out.data[idx][0], out.data[idx][1]};
      }
    });
    return c;
  }

  std::vector<Complex> adjoint(const std::vector<Complex>& c) const {
    std::vector<std::vector<Complex>> parts(moduli_.size());
    parallel_for(moduli_.size(), threads_, [&](std::size_t j) {
      const std::size_t m = moduli_[j];
      FftwBuffer in(m), out(m);
      std::fill_n(reinterpret_cast<double*>(in.data), 2 * m, 0.0);
      const auto& res = residues_[j];
      for (std::size_t i = 0; i < res.size(); ++i) {
        const auto idx = static_cast<std::size_t>(res[i]);
        in.data[idx][0] = c[offsets_[j] + i].real();
        in.data[idx][1] = c[offsets_[j] + i].imag();
      }
      // D_r = sum_a c_a e(-a r / m)
      fftw_execute_dft(plans_.forward(m), in.data, out.data);
      parts[j].resize(m);
      for (std::size_t r = 0; r < m; ++r) parts[j][r] = {out.data[r][0], out.data[r][1]};
    });
    std::vector<Complex> b(static_cast<std::size_t>(N_));
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
      const std::size_t m = moduli_[j];
      std::size_t r = static_cast<std::size_t>(arith::mod(M_ + 1, static_cast<i128>(m)));
      for (auto& v : b) {
        v += parts[j][r];
        if (++r == m) r = 0;
      }
    }
    return b;
  }

  // Node (j, a) for the flat node index.
  std::pair<std::size_t, i128> node(std::size_t flat) const {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    const std::size_t j = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {j, residues_[j][flat - offsets_[j]]};
  }
  std::size_t modulus(std::size_t j) const { return moduli_[j]; }

 private:
  i64 N_;
  i64 M_;
  int threads_;
  std::vector<std::size_t> moduli_;
  std::vector<std::vector<i128>> residues_;
  std::vector<std::size_t> offsets_;
  std::size_t nodes_ = 0;
  PlanCache plans_;
};

double norm_sq(const std::vector<Complex>& v) {
  CompensatedSum s;
  for (const auto& z : v) s.add(std::norm(z));
  return s.value();
}

void normalize(std::vector<Complex>& v) {
  const double n = std::sqrt(norm_sq(v));
  for (auto& z : v) z /= n;
}

struct PowerRun {
  double quotient = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
  std::vector<Complex> image;
};

PowerRun power_iterate(const SieveOperator& op, std::vector<Complex> v, double tol, int max_iter) {
  PowerRun run;
  normalize(v);
  for (int it = 0; it < max_iter; ++it) {
    auto c = op.apply(v);
    const double q = norm_sq(c);
    run.history.push_back(q);
    run.iterations = it + 1;
    const bool settled = it > 0 && std::abs(q - run.quotient) < tol * q;
    run.quotient = q;
    run.image = c;
    if (settled) {
      run.converged = true;
      break;
    }
    auto next = op.adjoint(c);
    if (norm_sq(next) == 0) {
      run.converged = true;
      break;
    }
    v = std::move(next);
    normalize(v);
  }
  return run;
}

std::vector<Complex> random_start(i64 N, u64 seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> v(static_cast<std::size_t>(N));
  for (auto& z : v) {
    const double x = 2 * std::numbers::pi * unit_real(rng);
    z = {std::cos(x), std::sin(x)};
  }
  return v;
}

}  // namespace

double CoefficientVector::norm_sq() const {
  CompensatedSum s;
  for (const auto& v : values) s.add(std::norm(v));
  return s.value();
}

CoefficientVector CoefficientVector::ones(i64 M, i64 N) {
  if (N < 1) throw PreconditionError("N must be at least 1");
  return {M, std::vector<Complex>(static_cast<std::size_t>(N), Complex(1, 0))};
}

CoefficientVector CoefficientVector::random(i64 M, i64 N, u64 seed) {
  if (N < 1) throw PreconditionError("N must be at least 1");
  std::mt19937_64 rng(seed);
  CoefficientVector c{M, std::vector<Complex>(static_cast<std::size_t>(N))};
  for (auto& v : c.values) {
    const double r = unit_real(rng);
    const double x = 2 * std::numbers::pi * unit_real(rng);
    v = std::polar(r, x);
  }
  return c;
}

nlohmann::json to_json(const SieveResult& result) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [m, v] : result.per_modulus) per.push_back({{"m", int_to_json(m)}, {"value", v}});
  return {{"total", result.total},
          {"norm_sq", result.norm_sq},
          {"ratio", result.ratio},
          {"per_modulus", per}};
}

std::vector<i128> reduced_residues(i128 m) {
  if (m < 1) throw PreconditionError("modulus must be positive");
  if (m == 1) return {0};
  std::vector<i128> out;
  for (i128 a = 1; a < m; ++a)
    if (arith::gcd(a, m) == 1) out.push_back(a);
  return out;
}

double full_form_naive(const CoefficientVector& coeffs, i128 m) {
  if (m < 1) throw PreconditionError("modulus must be positive");
  const auto table = root_table(m);
  CompensatedSum s;
  for (i128 a = 0; a < m; ++a) s.add(point_value(coeffs, table, a, m));
  return s.value();
}

double full_form_buckets(const CoefficientVector& coeffs, i128 m) {
  if (m < 1) throw PreconditionError("modulus must be positive");
  return static_cast<double>(m) * bucket_energy(coeffs, m);
}

double coprime_form_naive(const CoefficientVector& coeffs, i128 m) {
  const auto table = root_table(m);
  CompensatedSum s;
  for (i128 a : reduced_residues(m)) s.add(point_value(coeffs, table, a, m));
  return s.value();
}

double coprime_form_fast(const CoefficientVector& coeffs, i128 m) {
  if (m < 1) throw PreconditionError("modulus must be positive");
  return coprime_from_factors(coeffs, m, arith::factorize(m));
}

SieveResult sieve_sum_naive(const CoefficientVector& coeffs, const ModuliSequence& seq, i64 Q,
                            double budget) {
  check_q(seq, Q);
  double work = 0;
  for (i64 j = 1; j <= Q; ++j) work += static_cast<double>(seq.at(static_cast<std::size_t>(j)));
  work *= static_cast<double>(coeffs.N());
  if (work > budget)
    throw CapacityError("naive sieve sum needs about " + format_double(work) +
                        " operations; use sieve_sum_fast");
  std::vector<std::pair<i128, double>> per;
  for (i64 j = 1; j <= Q; ++j) {
    const i128 m = seq.at(static_cast<std::size_t>(j));
    per.emplace_back(m, coprime_form_naive(coeffs, m));
  }
  return finish(coeffs, std::move(per));
}

SieveResult sieve_sum_fast(const CoefficientVector& coeffs, const ModuliSequence& seq, i64 Q,
                           int threads) {
  check_q(seq, Q);
  std::vector<std::pair<i128, double>> per(static_cast<std::size_t>(Q));
  parallel_for(per.size(), threads, [&](std::size_t i) {
    const i128 m = seq.at(i + 1);
    per[i] = {m, coprime_form_fast(coeffs, m)};
  });
  return finish(coeffs, std::move(per));
}

SieveConstantEstimate estimate_sieve_constant(const ModuliSequence& seq, i64 Q, i64 N, i64 M,
                                              const SieveConstantOptions& options) {
  check_q(seq, Q);
  if (N < 1) throw PreconditionError("N must be at least 1");
  if (!(options.tol > 0)) throw PreconditionError("tol must be positive");
  if (options.max_iter < 1) throw PreconditionError("max_iter must be at least 1");
  double work = static_cast<double>(Q) * static_cast<double>(N);
  for (i64 j = 1; j <= Q; ++j) work += static_cast<double>(seq.at(static_cast<std::size_t>(j)));
  if (work > options.budget || seq.at(static_cast<std::size_t>(Q)) > (i128(1) << 30))
    throw CapacityError("sieve constant estimate exceeds the work budget");

  const SieveOperator op(seq, Q, N, M, options.threads);
  SieveConstantEstimate out;
  out.node_count = op.node_count();
  out.certificate = std::max(static_cast<double>(N), static_cast<double>(out.node_count));
  const double floor = out.certificate * (1 - 1e-12);

  PowerRun run = power_iterate(op, random_start(N, options.seed), options.tol, options.max_iter);
  out.start = "random";
  if (run.quotient < floor) {
    run = power_iterate(op, random_start(N, options.seed ^ 0x9e3779b97f4a7c15ULL), options.tol,
                        options.max_iter);
    out.start = "restart";
  }
  if (run.quotient < floor) {
    std::vector<Complex> w(static_cast<std::size_t>(N));
    if (static_cast<double>(N) >= static_cast<double>(out.node_count)) {
      // a_n = e(-x n) at the node x = 1/m_Q (or 0 when m_Q = 1)
      const auto [j, a] = op.node(out.node_count - 1);
      const double md = static_cast<double>(op.modulus(j));
      for (i64 n = 0; n < N; ++n) {
        const double r = static_cast<double>(arith::mod(a * (M + 1 + n), static_cast<i128>(md)));
        const double x = -2 * std::numbers::pi * r / md;
        w[static_cast<std::size_t>(n)] = {std::cos(x), std::sin(x)};
      }
    } else {
      w[0] = 1;
    }
    run = power_iterate(op, std::move(w), options.tol, options.max_iter);
    out.start = "witness";
  }
  out.delta_star_lower = run.quotient;
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.history = std::move(run.history);
  double top = 0;
  for (const auto& z : run.image) top = std::max(top, std::norm(z));
  out.node_concentration = run.quotient > 0 ? top / run.quotient : 0.0;
  return out;
}

AuditFamily AuditFamily::monomial(int k) {
  if (k < 1) throw DomainError("monomial family needs k >= 1");
  AuditFamily f;
  f.kind = AuditFamilyKind::Monomial;
  f.k = k;
  f.alpha = Exponent::rational(k, 1);
  return f;
}

AuditFamily AuditFamily::piatetski_shapiro(const Exponent& alpha) {
  if (!(alpha.value() > 1)) throw DomainError("Piatetski-Shapiro family needs alpha > 1");
  AuditFamily f;
  f.kind = AuditFamilyKind::PiatetskiShapiro;
  f.alpha = alpha;
  f.k = static_cast<int>(std::ceil(alpha.value()));
  return f;
}

AuditFamily AuditFamily::polynomial(const IntPolynomial& p) {
  if (p.degree() < 2) throw DomainError("polynomial family needs degree >= 2");
  AuditFamily f;
  f.kind = AuditFamilyKind::Polynomial;
  f.poly = p;
  f.k = p.degree();
  f.alpha = Exponent::rational(f.k, 1);
  return f;
}

std::string AuditFamily::name() const {
  switch (kind) {
    case AuditFamilyKind::Monomial: return "monomial";
    case AuditFamilyKind::PiatetskiShapiro: return "piatetski_shapiro";
    case AuditFamilyKind::Polynomial: return "polynomial";
  }
  return "unknown";
}

double AuditFamily::exponent() const {
  return kind == AuditFamilyKind::PiatetskiShapiro ? alpha.value() : static_cast<double>(k);
}

ModuliSequence AuditFamily::moduli(i64 Q) const {
  switch (kind) {
    case AuditFamilyKind::Monomial: return generate_power(k, Q);
    case AuditFamilyKind::PiatetskiShapiro: return generate_piatetski_shapiro(alpha, Q);
    case AuditFamilyKind::Polynomial: return generate_polynomial(poly, Q);
  }
  throw DomainError("unknown family");
}

BoundAudit bound_audit(const AuditFamily& family, const std::vector<std::pair<i64, double>>& grid,
                       const SieveConstantOptions& options) {
  BoundAudit out;
  out.family = family;
  auto cells = grid;
  std::sort(cells.begin(), cells.end());
  const double e = family.exponent();
  std::map<i64, std::pair<Count, Count>> energies;
  for (const auto& [Q, nu] : cells) {
    if (Q < 1) throw PreconditionError("Q must be at least 1");
    AuditRow row;
    row.Q = Q;
    row.nu = nu;
    const double q = static_cast<double>(Q);
    row.N = static_cast<i64>(std::ceil(std::pow(q, nu) * (1 - 1e-12)));
    const double n = static_cast<double>(row.N);
    row.in_range = nu >= e - 1e-12 && nu <= 2 * e + 1e-12;
    const auto seq = family.moduli(Q);
    row.measured = estimate_sieve_constant(seq, Q, row.N, 0, options).delta_star_lower;
    if (family.kind == AuditFamilyKind::Polynomial) {
      const double kappa = std::ldexp(1.0, family.k - 1);
      row.rhs_term1 = std::pow(q, family.k + 1) + n * std::pow(q, 1 - 1 / kappa);
      row.rhs_term2 = std::pow(n, 1 - 1 / kappa) * std::pow(q, 1 + family.k / kappa);
    } else {
      auto it = energies.find(Q);
      if (it == energies.end()) {
        const auto prefix = seq.prefix(static_cast<std::size_t>(Q));
        const Count ep = additive_energy(prefix);
        const Count es = prefix.size() >= 2 ? max_asymmetric_energy(prefix).second : 0;
        it = energies.emplace(Q, std::make_pair(ep, es)).first;
      }
      row.rhs_term1 = n * std::pow(static_cast<double>(it->second.first), 0.25);
      row.rhs_term2 = std::pow(n, 0.75) * std::pow(q, e / 2) *
                      std::pow(static_cast<double>(it->second.second), 0.25);
    }
    row.fitted_C = row.measured / (row.rhs_term1 + row.rhs_term2);
    out.rows.push_back(row);
  }
  // Rows are sorted by Q, so the first in-range row per nu is the smallest Q.
  std::map<double, double> frozen;
  for (auto& row : out.rows) {
    if (!row.in_range) continue;
    const double c = frozen.emplace(row.nu, row.fitted_C).first->second;
    row.frozen_C = c;
    if (row.fitted_C > kAuditGrowthTolerance * c) out.within_tolerance = false;
  }
  return out;
}

std::string to_csv(const BoundAudit& audit) {
  std::ostringstream os;
  os << "# schema=v1\nfamily,k_or_alpha,Q,nu,N,measured,rhs_term1,rhs_term2,fitted_C,in_range\n";
  const std::string param = audit.family.kind == AuditFamilyKind::PiatetskiShapiro
                                ? audit.family.alpha.to_string()
                                : std::to_string(audit.family.k);
  for (const auto& r : audit.rows)
    os << audit.family.name() << ',' << param << ',' << r.Q << ',' << format_double(r.nu) << ','
       << r.N << ',' << format_double(r.measured) << ',' << format_double(r.rhs_term1) << ','
       << format_double(r.rhs_term2) << ',' << format_double(r.fitted_C) << ','
       << (r.in_range ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace sievebench
