#include "sievebench/moduli.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sievebench/arith.hpp"

namespace sievebench {

IntPolynomial::IntPolynomial(std::vector<i64> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0);
}

i128 IntPolynomial::operator()(i128 x) const {
  i128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = arith::checked_add(arith::checked_mul(acc, x), *it);
  return acc;
}

std::string IntPolynomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    const i64 c = coeffs_[d];
    if (c == 0 && degree() > 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    const i64 mag = c < 0 ? -c : c;
    if (mag != 1 || d == 0) out << mag;
    if (d >= 1) out << "X";
    if (d >= 2) out << "^" << d;
    first = false;
  }
  return out.str();
}

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Power: return "power";
    case SequenceKind::Polynomial: return "polynomial";
    case SequenceKind::PiatetskiShapiro: return "piatetski_shapiro";
    case SequenceKind::Explicit: return "explicit";
  }
  return "unknown";
}

namespace {

void require_strictly_increasing(const std::vector<i128>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1)
      throw ValidationError("moduli must be positive: m_" + std::to_string(i + 1) + " = " +
                            to_string(values[i]));
    if (i > 0 && values[i] <= values[i - 1])
      throw ValidationError("moduli must be strictly increasing: m_" + std::to_string(i + 1) +
                            " = " + to_string(values[i]) + " <= m_" + std::to_string(i) + " = " +
                            to_string(values[i - 1]));
  }
}

}  // namespace

ModuliSequence ModuliSequence::explicit_values(std::vector<i128> values) {
  require_strictly_increasing(values);
  ModuliSequence s;
  s.kind_ = SequenceKind::Explicit;
  s.values_ = std::move(values);
  s.alpha_hint_ = s.values_.size() >= 8 ? growth_exponent(s) : 1.0;
  return s;
}

i128 ModuliSequence::at(std::size_t j) const {
  if (j < 1 || j > values_.size())
    throw DomainError("index j=" + std::to_string(j) + " outside 1.." + std::to_string(values_.size()));
  return values_[j - 1];
}

std::vector<i128> ModuliSequence::prefix(std::size_t Q) const {
  if (Q > values_.size())
    throw PreconditionError("prefix length " + std::to_string(Q) + " exceeds sequence length " +
                            std::to_string(values_.size()));
  return {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(Q)};
}

ModuliSequence generate_power(int k, i64 Q) {
  if (k < 1) throw DomainError("generate_power: k must be >= 1");
  if (Q < 1) throw DomainError("generate_power: Q must be >= 1");
  ModuliSequence s;
  s.kind_ = SequenceKind::Power;
  s.power_k_ = k;
  s.alpha_hint_ = k;
  s.values_.reserve(static_cast<std::size_t>(Q));
  for (i64 j = 1; j <= Q; ++j) {
    i128 v = 1;
    for (int i = 0; i < k; ++i) {
      // Keep moduli below 2^126 so pairwise sums and differences stay exact.
      if (__builtin_mul_overflow(v, i128(j), &v) || v > (i128(1) << 125))
        throw RangeError("generate_power: j^k overflows the exact integer range at j=" +
                         std::to_string(j));
    }
    s.values_.push_back(v);
  }
  return s;
}

ModuliSequence generate_polynomial(const IntPolynomial& f, i64 Q) {
  if (f.degree() < 1) throw DomainError("generate_polynomial: degree must be >= 1");
  if (f.leading() <= 0) throw DomainError("generate_polynomial: leading coefficient must be positive");
  if (Q < 1) throw DomainError("generate_polynomial: Q must be >= 1");
  ModuliSequence s;
  s.kind_ = SequenceKind::Polynomial;
  s.poly_ = f;
  s.alpha_hint_ = f.degree();
  for (i64 j = 1; j <= Q; ++j) {
    const i128 v = f(j);
    if (v < 1)
      throw ValidationError("generate_polynomial: f(" + std::to_string(j) + ") = " + to_string(v) +
                            " < 1");
    if (!s.values_.empty() && v <= s.values_.back())
      throw ValidationError("generate_polynomial: sequence not strictly increasing at j=" +
                            std::to_string(j));
    s.values_.push_back(v);
  }
  return s;
}

ModuliSequence generate_piatetski_shapiro(const Exponent& alpha, i64 jmax) {
  if (!(alpha.value() > 1)) throw DomainError("generate_piatetski_shapiro: alpha must exceed 1");
  if (jmax < 1) throw DomainError("generate_piatetski_shapiro: jmax must be >= 1");
  ModuliSequence s;
  s.kind_ = SequenceKind::PiatetskiShapiro;
  s.ps_alpha_ = alpha;
  s.alpha_hint_ = alpha.value();
  s.values_.reserve(static_cast<std::size_t>(jmax));
  for (i64 j = 1; j <= jmax; ++j) s.values_.push_back(certified_floor_power(j, alpha).floor);
  require_strictly_increasing(s.values_);
  return s;
}

DyadicWindow window(const Exponent& alpha, i64 R) {
  if (!(alpha.value() > 1)) throw DomainError("window: alpha must exceed 1");
  if (R < 1) throw DomainError("window: R must be >= 1");
  DyadicWindow w;
  w.alpha = alpha;
  w.R = R;
  // Smallest j with floor(j^alpha) >= R, starting just below the real root.
  i64 j = std::max<i64>(1, static_cast<i64>(std::pow(double(R), 1.0 / alpha.value())) - 2);
  while (j > 1 && certified_floor_power(j, alpha).floor >= R) --j;
  while (certified_floor_power(j, alpha).floor < R) ++j;
  for (;; ++j) {
    const i128 m = certified_floor_power(j, alpha).floor;
    if (m > i128(2) * R) break;
    w.members.push_back(m);
    w.indices.push_back(j);
  }
  return w;
}

bool is_convex(const ModuliSequence& seq) {
  const auto& v = seq.values();
  if (v.size() < 3) throw DomainError("is_convex: need at least 3 values");
  for (std::size_t i = 2; i < v.size(); ++i)
    if (!(v[i - 1] - v[i - 2] < v[i] - v[i - 1])) return false;
  return true;
}

double growth_exponent(const ModuliSequence& seq) {
  const auto& v = seq.values();
  if (v.size() < 8) throw DomainError("growth_exponent: need at least 8 values");
  std::vector<double> x, y;
  for (std::size_t j = v.size() / 2 + 1; j <= v.size(); ++j) {
    x.push_back(std::log(double(j)));
    y.push_back(std::log(static_cast<double>(v[j - 1])));
  }
  return fit_slope(x, y);
}

nlohmann::json int_to_json(i128 v) {
  if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max())
    return static_cast<i64>(v);
  return to_string(v);
}

std::string to_csv(const ModuliSequence& seq) {
  std::string out = "# schema=v1\nm_j\n";
  for (const i128 v : seq.values()) out += to_string(v) + "\n";
  return out;
}

nlohmann::json to_json(const ModuliSequence& seq) {
  nlohmann::json params = nlohmann::json::object();
  switch (seq.kind()) {
    case SequenceKind::Power: params["k"] = seq.power_k(); break;
    case SequenceKind::Polynomial: params["coefficients"] = seq.polynomial().coefficients(); break;
    case SequenceKind::PiatetskiShapiro: params["alpha"] = seq.ps_alpha().to_string(); break;
    case SequenceKind::Explicit: break;
  }
  nlohmann::json values = nlohmann::json::array();
  for (const i128 v : seq.values()) values.push_back(int_to_json(v));
  return {{"kind", to_string(seq.kind())}, {"params", params}, {"values", values}};
}

}  // namespace sievebench
