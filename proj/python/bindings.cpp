#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sievebench/acceptance.hpp"
#include "sievebench/additive_energy.hpp"
#include "sievebench/bound_catalog.hpp"
#include "sievebench/bv_experiment.hpp"
#include "sievebench/congruence_boxes.hpp"
#include "sievebench/exp_sums.hpp"
#include "sievebench/moduli.hpp"
#include "sievebench/sieve_sums.hpp"

namespace py = pybind11;
using namespace sievebench;

namespace {

// JSON crosses the boundary as text; the package wrapper decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

std::vector<i128> wide(const std::vector<long long>& xs) { return {xs.begin(), xs.end()}; }

std::vector<long long> narrow(const std::vector<i128>& xs) {
  std::vector<long long> out;
  out.reserve(xs.size());
  for (i128 x : xs) {
    if (x > INT64_MAX || x < INT64_MIN) throw RangeError("value exceeds 64 bits: " + to_string(x));
    out.push_back(static_cast<long long>(x));
  }
  return out;
}

ModuliSequence family(const std::string& kind, const py::object& param, i64 length) {
  if (kind == "power") return generate_power(param.cast<int>(), length);
  if (kind == "poly") return generate_polynomial(IntPolynomial(param.cast<std::vector<i64>>()), length);
  if (kind == "ps") return generate_piatetski_shapiro(Exponent::parse(py::str(param).cast<std::string>()), length);
  if (kind == "explicit") return ModuliSequence::explicit_values(wide(param.cast<std::vector<long long>>()));
  throw ValidationError("unknown family: " + kind);
}

}  // namespace

PYBIND11_MODULE(_sievebench, m) {
  auto base = py::register_exception<Error>(m, "SievebenchError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<PrecisionError>(m, "PrecisionError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("moduli", [](const std::string& kind, const py::object& param, i64 length) {
    return narrow(family(kind, param, length).values());
  }, py::arg("kind"), py::arg("param"), py::arg("length"));
  m.def("window", [](const std::string& alpha, i64 R) {
    return narrow(window(Exponent::parse(alpha), R).members);
  }, py::arg("alpha"), py::arg("R"));

  m.def("additive_energy", [](const std::vector<long long>& s) { return additive_energy(wide(s)); });
  m.def("asymmetric_energy", [](const std::vector<long long>& s, long long h) {
    return asymmetric_energy(wide(s), h);
  });
  m.def("energy_report", [](const std::vector<long long>& s, const std::string& backend, int threads) {
    const auto set = wide(s);
    if (backend == "oracle") return dump(to_json(energy_oracle(set)));
    EnergyOptions opt;
    opt.threads = threads;
    const auto b = backend == "dense" ? EnergyBackend::Dense : EnergyBackend::Sparse;
    if (backend != "dense" && backend != "sparse") throw ValidationError("unknown backend: " + backend);
    return dump(to_json(energy_fast(set, b, opt)));
  }, py::arg("set"), py::arg("backend") = "sparse", py::arg("threads") = 1);

  m.def("spacing_count", [](const std::string& kind, const py::object& param, i64 N, i64 Q) {
    return spacing_count(family(kind, param, 2 * Q), N, Q);
  }, py::arg("kind"), py::arg("param"), py::arg("N"), py::arg("Q"));
  m.def("count_box_solutions", [](long long a, long long mod, const std::vector<long long>& seq, i64 U, long long V) {
    return count_box_solutions(a, mod, ModuliSequence::explicit_values(wide(seq)), U, V);
  });

  m.def("sieve_sum", [](const std::string& kind, const py::object& param, i64 Q, i64 M,
                        const std::vector<std::complex<double>>& coeffs, bool fast) {
    CoefficientVector a;
    a.M = M;
    a.values = coeffs;
    const auto seq = family(kind, param, Q);
    return dump(to_json(fast ? sieve_sum_fast(a, seq, Q) : sieve_sum_naive(a, seq, Q)));
  }, py::arg("kind"), py::arg("param"), py::arg("Q"), py::arg("M"), py::arg("coefficients"), py::arg("fast") = true);

  m.def("delta_exponent", [](const std::string& id, int k, double nu) {
    return delta_exponent(parse_bound_id(id), k, nu);
  });
  m.def("crossovers", [](int k) { return dump(to_json(crossover_report(k))); });
  m.def("phi_alpha", &phi_alpha);

  m.def("weyl_sum", [](const std::vector<double>& coeffs, i64 U) {
    return weyl_sum(RealPolynomial(coeffs), U).value;
  });
  m.def("sh_sum", [](const std::string& alpha, i64 t, i64 h, i64 R) {
    const auto v = sh_sum(Exponent::parse(alpha), t, h, R);
    return std::make_pair(v.value, v.terms);
  });

  m.def("bv_report", [](const std::string& alpha, u64 x, u64 R, int threads) {
    const auto table = PrimeTable::build(x);
    return dump(to_json(bv_sum(table, Exponent::parse(alpha), x, R, threads)));
  }, py::arg("alpha"), py::arg("x"), py::arg("R"), py::arg("threads") = 1);
  m.def("error_term", [](u64 x, u64 q, u64 a) { return error_term(PrimeTable::build(x), x, q, a); });

  m.def("acceptance", [](const std::vector<int>& only) {
    AcceptanceOptions opt;
    opt.only = std::set<int>(only.begin(), only.end());
    py::gil_scoped_release release;
    return dump(to_json(run_acceptance(opt)));
  }, py::arg("only") = std::vector<int>{});
}
