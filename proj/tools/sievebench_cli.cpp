// sievebench command-line tool. Every subcommand writes its artifacts and a
// run_manifest.json into --out.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <nlohmann/json.hpp>

#include "sievebench/acceptance.hpp"
#include "sievebench/additive_energy.hpp"
#include "sievebench/bound_catalog.hpp"
#include "sievebench/bv_experiment.hpp"
#include "sievebench/congruence_boxes.hpp"
#include "sievebench/exp_sums.hpp"
#include "sievebench/moduli.hpp"
#include "sievebench/sieve_sums.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sievebench;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::string config;
  std::string out = "out";
  u64 seed = 1;
  int threads = 1;
  double budget_ops = 2e8;
};

// Moduli family selection shared by several subcommands.
struct FamilyArgs {
  std::string family = "power";
  int k = 2;
  std::vector<i64> coeffs;
  std::string alpha = "1.5";
  std::vector<std::string> values;

  void add(CLI::App* app) {
    app->add_option("--family", family, "power | poly | ps | explicit")
        ->check(CLI::IsMember({"power", "poly", "ps", "explicit"}));
    app->add_option("--k", k, "exponent of the power family")->check(CLI::Range(1, 64));
    app->add_option("--coeffs", coeffs, "integer polynomial, constant term first")->delimiter(',');
    app->add_option("--alpha", alpha, "Piatetski-Shapiro exponent, e.g. 1.5 or 3/2");
    app->add_option("--values", values, "explicit moduli")->delimiter(',');
  }

  ModuliSequence make(i64 length) const {
    if (family == "power") return generate_power(k, length);
    if (family == "poly") {
      if (coeffs.empty()) throw ValidationError("--coeffs is required for --family poly");
      return generate_polynomial(IntPolynomial(coeffs), length);
    }
    if (family == "ps") return generate_piatetski_shapiro(Exponent::parse(alpha), length);
    std::vector<i128> v;
    for (const auto& s : values) v.push_back(parse_i128(s));
    if (v.empty()) throw ValidationError("--values is required for --family explicit");
    return ModuliSequence::explicit_values(std::move(v));
  }

  double exponent(const ModuliSequence& seq) const {
    if (family == "power") return k;
    if (family == "poly") return static_cast<double>(coeffs.size() - 1);
    if (family == "ps") return Exponent::parse(alpha).value();
    return seq.alpha_hint();
  }
};

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw IoError("cannot write " + (dir_ / name).string());
    f << content;
    files_.push_back(name);
  }
  void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  // A file produced by library code directly in the output directory.
  void record(const std::string& name) { files_.push_back(name); }
  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

u64 parse_count(const std::string& name, double v) {
  if (!(v >= 0) || v > 1.8e19 || std::floor(v) != v)
    throw ValidationError(name + " must be a non-negative integer, got " + format_double(v));
  return static_cast<u64>(v);
}

// Parameters recorded in the manifest: every option that has a value.
json collect_params(const CLI::App* app) {
  json p = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name().empty() || opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto res = opt->results();
    std::string key = opt->get_name();
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (opt->get_items_expected_max() <= 1)
      p[key] = res.back();
    else
      p[key] = res;
  }
  return p;
}

// JSON config entries become command-line arguments placed before the user's
// own, so explicit flags win (options keep their last value).
std::vector<std::string> config_arguments(const std::string& path, std::string& command) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config: cannot read " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("--config: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw ValidationError("--config: top level must be an object");
  std::vector<std::string> args;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      if (command.empty()) command = value.get<std::string>();
      continue;
    }
    const std::string flag = "--" + key;
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return format_double(v.get<double>());
      throw ValidationError("--config: unsupported value for '" + key + "'");
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      if (value.empty()) throw ValidationError("--config: grid '" + key + "' must be nonempty");
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

// ---------------------------------------------------------------- commands

struct ModuliCmd {
  FamilyArgs fam;
  i64 length = 16;
  i64 window_R = 0;
  void add(CLI::App* app) {
    fam.add(app);
    app->add_option("--length", length, "number of terms")->check(CLI::PositiveNumber);
    app->add_option("--window-R", window_R, "also emit the window (R, 2R] of the PS family");
  }
  void run(const Globals&, Outputs& out) {
    const auto seq = fam.make(length);
    out.write("moduli.csv", to_csv(seq));
    json j = to_json(seq);
    if (seq.size() >= 3) j["convex"] = is_convex(seq);
    if (seq.size() >= 8) j["growth_exponent"] = growth_exponent(seq);
    out.write("moduli.json", j);
    if (window_R > 0) {
      const auto w = window(Exponent::parse(fam.alpha), window_R);
      json members = json::array();
      for (i128 m : w.members) members.push_back(int_to_json(m));
      out.write("window.json", json{{"alpha", w.alpha.to_string()}, {"R", w.R}, {"members", members},
                                    {"indices", w.indices}});
    }
    std::cout << "moduli: " << seq.size() << " terms\n";
  }
};

struct EnergyCmd {
  std::vector<std::string> set;
  FamilyArgs fam;
  i64 Q = 16;
  std::string backend = "sparse";
  void add(CLI::App* app) {
    app->add_option("--set", set, "explicit integer set")->delimiter(',');
    fam.add(app);
    app->add_option("--Q", Q, "use m_1..m_Q of the family when --set is absent")->check(CLI::PositiveNumber);
    app->add_option("--backend", backend, "oracle | sparse | dense")
        ->check(CLI::IsMember({"oracle", "sparse", "dense"}));
  }
  void run(const Globals& g, Outputs& out) {
    std::vector<i128> s;
    if (!set.empty())
      for (const auto& x : set) s.push_back(parse_i128(x));
    else
      s = fam.make(Q).values();
    EnergyOptions opt;
    opt.threads = g.threads;
    const EnergyReport r = backend == "oracle" ? energy_oracle(s)
                           : backend == "dense" ? energy_fast(s, EnergyBackend::Dense, opt)
                                                : energy_fast(s, EnergyBackend::Sparse, opt);
    out.write("energy.json", to_json(r));
    if (r.h_table) out.write("h_table.csv", h_table_csv(r));
    std::cout << "e_plus = " << r.e_plus << "\ne_star = " << r.e_star << "\n";
  }
};

struct BoxesCmd {
  FamilyArgs fam;
  i64 Q = 4;
  std::vector<i64> N{16};
  std::string a, m;
  i64 U = 0;
  std::string V = "0";
  void add(CLI::App* app) {
    fam.add(app);
    app->add_option("--Q", Q, "Farey set over m_Q..m_2Q")->check(CLI::PositiveNumber);
    app->add_option("--N", N, "spacing parameters")->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--a", a, "box congruence multiplier");
    app->add_option("--m", m, "box congruence modulus");
    app->add_option("--U", U, "box congruence length");
    app->add_option("--V", V, "box half-width");
  }
  void run(const Globals&, Outputs& out) {
    const i64 length = std::max<i64>(2 * Q, U);
    const auto seq = fam.make(length);
    const double alpha = fam.exponent(seq);
    const auto fs_ = farey_set(seq, Q);
    std::ostringstream sp;
    sp << "# schema=v1\nQ,N,spacing\n";
    std::vector<FracgenAudit> audits;
    for (i64 n : N) {
      sp << Q << ',' << n << ',' << spacing_count(fs_, n) << '\n';
      const double lo = std::pow(static_cast<double>(Q), alpha);
      if (n >= lo * (1 - 1e-12) && n <= lo * lo * (1 + 1e-12))
        audits.push_back(lemma_fracgen_audit(seq, n, Q, alpha));
    }
    out.write("spacing.csv", sp.str());
    if (!audits.empty()) out.write("fracgen_audit.csv", to_csv(audits));
    json summary{{"Q", Q}, {"labelled_count", fs_.labelled_count}, {"distinct_count", fs_.distinct_count}};
    if (!a.empty() || !m.empty()) {
      if (a.empty() || m.empty() || U < 1) throw ValidationError("--a, --m and --U >= 1 are required together");
      const i128 ai = parse_i128(a), mi = parse_i128(m), Vi = parse_i128(V);
      const auto b = boxesgen_audit(seq, ai, mi, U, Vi, alpha);
      summary["box"] = {{"a", int_to_json(ai)}, {"m", int_to_json(mi)}, {"U", U},     {"V", int_to_json(Vi)},
                        {"count", b.measured},  {"rhs", b.rhs},          {"ratio", b.ratio}};
      std::cout << "T = " << b.measured << "\n";
    }
    out.write("boxes.json", summary);
  }
};

struct SieveCmd {
  FamilyArgs fam;
  std::string mode = "fast";
  i64 Q = 4, N = 16, M = 0;
  std::string coeffs_kind = "random";
  std::vector<i64> Qs;
  std::vector<double> nus;
  double tol = 1e-10;
  int max_iter = 500;
  void add(CLI::App* app) {
    fam.add(app);
    app->add_option("--mode", mode, "naive | fast | delta | audit")
        ->check(CLI::IsMember({"naive", "fast", "delta", "audit"}));
    app->add_option("--Q", Q)->check(CLI::PositiveNumber);
    app->add_option("--N", N)->check(CLI::PositiveNumber);
    app->add_option("--M", M);
    app->add_option("--coefficients", coeffs_kind, "ones | random")->check(CLI::IsMember({"ones", "random"}));
    app->add_option("--Q-grid", Qs, "audit grid of Q")->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--nu-grid", nus, "audit grid of nu")->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--tol", tol)->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  }
  AuditFamily audit_family() const {
    if (fam.family == "power") return AuditFamily::monomial(fam.k);
    if (fam.family == "ps") return AuditFamily::piatetski_shapiro(Exponent::parse(fam.alpha));
    if (fam.family == "poly") return AuditFamily::polynomial(IntPolynomial(fam.coeffs));
    throw ValidationError("--family explicit has no bound audit");
  }
  void run(const Globals& g, Outputs& out) {
    SieveConstantOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    opt.seed = g.seed;
    opt.threads = g.threads;
    opt.budget = g.budget_ops;
    if (mode == "audit") {
      if (Qs.empty() || nus.empty()) throw ValidationError("--Q-grid and --nu-grid are required for --mode audit");
      std::vector<std::pair<i64, double>> grid;
      for (i64 q : Qs)
        for (double nu : nus) grid.push_back({q, nu});
      const auto a = bound_audit(audit_family(), grid, opt);
      out.write("bound_audit.csv", to_csv(a));
      std::cout << "within tolerance: " << (a.within_tolerance ? "yes" : "no") << "\n";
      return;
    }
    const auto seq = fam.make(Q);
    if (mode == "delta") {
      const auto e = estimate_sieve_constant(seq, Q, N, M, opt);
      out.write("sieve_constant.json",
                json{{"delta_star_lower", e.delta_star_lower}, {"iterations", e.iterations},
                     {"converged", e.converged}, {"certificate", e.certificate}, {"node_count", e.node_count},
                     {"node_concentration", e.node_concentration}, {"start", e.start}, {"history", e.history}});
      std::cout << "delta_star_lower = " << format_double(e.delta_star_lower) << "\n";
      return;
    }
    const auto c = coeffs_kind == "ones" ? CoefficientVector::ones(M, N) : CoefficientVector::random(M, N, g.seed);
    const auto r = mode == "naive" ? sieve_sum_naive(c, seq, Q, g.budget_ops) : sieve_sum_fast(c, seq, Q, g.threads);
    out.write("sieve.json", to_json(r));
    std::cout << "total = " << format_double(r.total) << "\nratio = " << format_double(r.ratio) << "\n";
  }
};

struct BoundsCmd {
  int k = 5;
  bool crossovers = false;
  double nu_step = 0.05;
  std::vector<std::string> phi;
  void add(CLI::App* app) {
    app->add_option("--k", k)->check(CLI::Range(2, 62));
    app->add_flag("--crossovers", crossovers, "emit the crossover summary");
    app->add_option("--nu-step", nu_step, "winner-map grid step on [k, 2k]")->check(CLI::PositiveNumber);
    app->add_option("--phi", phi, "alphas at which to print Phi(alpha)")->delimiter(',');
  }
  void run(const Globals&, Outputs& out) {
    std::vector<double> grid;
    const int steps = static_cast<int>(std::llround(k / nu_step));
    for (int i = 0; i <= steps; ++i) grid.push_back(k + k * static_cast<double>(i) / steps);
    std::ostringstream os;
    os << "# schema=v1\nk,nu,winner,exponent\n";
    for (const auto& w : winner_map(k, grid))
      os << k << ',' << format_double(w.nu) << ',' << to_string(w.id) << ',' << format_double(w.exponent) << '\n';
    out.write("winner_map.csv", os.str());
    if (crossovers) {
      const auto r = crossover_report(k);
      out.write("crossovers.json", to_json(r));
      std::cout << "lambda = " << format_double(r.lambda) << "\nmu = " << format_double(r.mu) << "\n";
      if (r.sigma) std::cout << "sigma = " << format_double(*r.sigma) << "\n";
      std::cout << "tau = " << format_double(r.tau) << "\n";
      if (r.sigma) std::cout << (*r.sigma < r.tau ? "sigma < tau" : "sigma >= tau") << "\n";
    }
    if (!phi.empty()) {
      std::ostringstream ps;
      ps << "# schema=v1\nalpha,phi\n";
      for (const auto& a : phi) ps << a << ',' << format_double(phi_alpha(Exponent::parse(a).value())) << '\n';
      out.write("phi.csv", ps.str());
    }
  }
};

struct ExpSumsCmd {
  std::string mode = "card";
  std::vector<double> poly{0, 0, 0.5};
  i64 U = 16;
  std::string alpha = "1.5";
  i64 t = 1, h = 1, R = 1024;
  std::vector<i64> t_grid{1, 2, 3};
  std::vector<i64> R_grid{1 << 12, 1 << 14, 1 << 16};
  void add(CLI::App* app) {
    app->add_option("--mode", mode, "weyl | sh | card | vdc")->check(CLI::IsMember({"weyl", "sh", "card", "vdc"}));
    app->add_option("--poly", poly, "real polynomial, constant term first")->delimiter(',');
    app->add_option("--U", U)->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha);
    app->add_option("--t", t)->check(CLI::PositiveNumber);
    app->add_option("--h", h);
    app->add_option("--R", R)->check(CLI::PositiveNumber);
    app->add_option("--t-grid", t_grid)->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--R-grid", R_grid)->delimiter(',')->check(CLI::PositiveNumber);
  }
  void run(const Globals& g, Outputs& out) {
    const auto a = Exponent::parse(alpha);
    if (mode == "weyl") {
      const RealPolynomial F(poly);
      if (std::pow(2.0 * U - 1, F.degree() - 1) > g.budget_ops)
        throw CapacityError("--budget-ops: Weyl lattice exceeds the budget");
      json j = to_json(weyl_sum(F, U));
      j["rhs"] = weyl_bound_rhs(F, U, g.threads);
      out.write("weyl.json", j);
      std::cout << "|S| = " << format_double(j["abs"].get<double>()) << "\n";
    } else if (mode == "sh") {
      if (std::pow(static_cast<double>(R), 1 / a.value()) / 2 > g.budget_ops)
        throw CapacityError("--R: S_h has more terms than --budget-ops");
      const auto v = sh_sum(a, t, h, R);
      out.write("sh_sum.json", to_json(v));
      std::cout << "|S_h| = " << format_double(std::abs(v.value)) << " over " << v.terms << " terms\n";
    } else if (mode == "card") {
      const auto c = card_bound_audit(a, t_grid, R_grid);
      out.write("card_audit.csv", to_csv(c));
      out.write("card_audit.json", json{{"frozen_C", c.frozen_C}, {"within_tolerance", c.within_tolerance},
                                        {"max_discrepancy", c.max_discrepancy}});
      std::cout << "within tolerance: " << (c.within_tolerance ? "yes" : "no") << "\n";
    } else {
      const auto v = vdc_audit(a, R_grid);
      out.write("vdc_audit.csv", to_csv(v));
      std::cout << "within tolerance: " << (v.within_tolerance ? "yes" : "no") << "\n";
    }
  }
};

struct BvCmd {
  std::string alpha = "1.2";
  double x = 1e5;
  double R = 0;
  double R_exp = 0.4;
  double theta = -1;
  std::string cache;
  void add(CLI::App* app) {
    app->add_option("--alpha", alpha);
    app->add_option("--x", x, "upper limit, e.g. 1e6")->check(CLI::PositiveNumber);
    app->add_option("--R", R, "window start; overrides --R-exp");
    app->add_option("--R-exp", R_exp, "R = floor(x^R_exp)")->check(CLI::Range(0.0, 1.0));
    app->add_option("--theta", theta, "also run the shifted-prime search with this theta");
    app->add_option("--cache", cache, "directory for the prime table cache");
  }
  void run(const Globals& g, Outputs& out) {
    const u64 xi = parse_count("--x", x);
    const u64 Ri = R > 0 ? parse_count("--R", R) : static_cast<u64>(std::floor(std::pow(x, R_exp)));
    if (x > g.budget_ops * 10) throw CapacityError("--x exceeds ten times --budget-ops");
    const auto table = cache.empty() ? PrimeTable::build(xi) : PrimeTable::load_or_build(cache, xi);
    const auto a = Exponent::parse(alpha);
    const auto rep = bv_sum(table, a, xi, Ri, g.threads);
    out.write("bv_report.csv", to_csv(rep));
    out.write("bv_report.json", to_json(rep));
    std::cout << "M_alpha = " << format_double(rep.M_alpha) << "\nrho = " << format_double(rep.rho) << "\n";
    if (theta >= 0) {
      const auto s = shifted_prime_search(table, a, theta, xi);
      std::ostringstream os;
      os << "# schema=v1\np,ps_divisor\n";
      for (auto [p, d] : s.hits) os << p << ',' << d << '\n';
      out.write("shifted_primes.csv", os.str());
      if (!s.warning.empty()) std::cerr << "warning: " << s.warning << "\n";
    }
  }
};

struct AuditAllCmd {
  std::vector<int> only;
  int failed = 0;
  void add(CLI::App* app) {
    app->add_option("--only", only, "criterion numbers to run")->delimiter(',')->check(CLI::Range(1, 9));
  }
  void run(const Globals& g, Outputs& out) {
    AcceptanceOptions opt;
    opt.seed = g.seed;
    opt.threads = g.threads;
    opt.only = {only.begin(), only.end()};
    opt.out_dir = out.dir();
    opt.log = &std::cout;
    const auto results = run_acceptance(opt);
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out.write("acceptance.json", to_json(results));
    for (const char* f : {"crossovers.json", "card_audit.csv", "bv_report.csv", "bv_report.json", "theorem_audits.csv"})
      if (fs::exists(out.dir() / f)) out.record(f);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sievebench: large sieve experiments over sparse moduli"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Globals g;
  app.add_option("--config", g.config, "JSON file with option values");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "seed for randomized steps");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget-ops", g.budget_ops, "work budget")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", kVersion);

  ModuliCmd moduli;
  EnergyCmd energy;
  BoxesCmd boxes;
  SieveCmd sieve;
  BoundsCmd bounds;
  ExpSumsCmd expsums;
  BvCmd bv;
  AuditAllCmd audit;
  std::vector<std::pair<CLI::App*, std::function<void(Outputs&)>>> commands;
  auto reg = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help)->fallthrough();
    // -h stays free for the expsums shift parameter --h
    sub->set_help_flag("--help", "print this help message and exit");
    cmd.add(sub);
    commands.push_back({sub, [&cmd, &g](Outputs& o) { cmd.run(g, o); }});
  };
  reg("moduli", "dump a moduli sequence", moduli);
  reg("energy", "additive energies", energy);
  reg("boxes", "box congruence counts and Farey spacing", boxes);
  reg("sieve", "sieve sums, the sieve constant, bound audits", sieve);
  reg("bounds", "bound catalog, winner maps, crossovers, Phi", bounds);
  reg("expsums", "Weyl sums, S_h, cardinality and van der Corput audits", expsums);
  reg("bv", "Bombieri-Vinogradov report and shifted-prime search", bv);
  reg("audit-all", "run every acceptance criterion", audit);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // --config is expanded before parsing so its values act as defaults.
    std::string command;
    for (const auto& s : args)
      for (const auto& [sub, fn] : commands)
        if (s == sub->get_name() && command.empty()) command = s;
    std::string config;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") config = args[i + 1];
    for (const auto& s : args)
      if (s.rfind("--config=", 0) == 0) config = s.substr(9);
    std::vector<std::string> full;
    if (!config.empty()) {
      const bool had_command = !command.empty();
      auto extra = config_arguments(config, command);
      if (command.empty()) throw ValidationError("no subcommand given on the command line or in --config");
      full.push_back(command);
      full.insert(full.end(), extra.begin(), extra.end());
      for (const auto& s : args)
        if (!(had_command && s == command)) full.push_back(s);
    } else {
      full = args;
    }
    std::vector<std::string> reversed(full.rbegin(), full.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    try {
      Outputs out(g.out);
      const auto start = std::chrono::system_clock::now();
      fn(out);
      const std::time_t ts = std::chrono::system_clock::to_time_t(start);
      char stamp[32];
      std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&ts));
      json params = collect_params(sub);
      params.update(collect_params(&app));
      json manifest{{"command", sub->get_name()},
                    {"params", params},
                    {"seed", g.seed},
                    {"versions",
                     {{"sievebench", kVersion},
                      {"boost", BOOST_LIB_VERSION},
                      {"compiler", __VERSION__},
                      {"schema", "v1"}}},
                    {"output_files", out.files()},
                    {"timestamp", stamp}};
      out.write("run_manifest.json", manifest);
      if (sub->get_name() == "audit-all" && audit.failed) return 1;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_code_for(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}
