#include "commands.hpp"

#include "rootscat/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ios>
#include <random>
#include <sstream>

namespace rootscat::cli {

namespace {

const char* kExitCodes =
    "Exit codes:\n"
    "  0   success\n"
    "  1   a verification check failed\n"
    "  2   parameter rejected (invalid root system, c-function parameters, packet, or singular point)\n"
    "  3   config parse error (syntax, unknown key, bad value, bad --tol)\n"
    "  4   budget exceeded (Weyl group order, quadrature grid, Gram conditioning)\n"
    "  5   I/O error (config unreadable, output not writable)\n"
    "  6   lattice window leakage or wave table depth error\n"
    "  64  usage error\n"
    "  70  internal error\n";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string key(const IVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<IVec> ball(const RootSystem& rs, int h) {
  if (h < 0) return {};
  return weights_up_to_height(rs, h);
}

std::vector<double> random_point(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

double max_abs(const LatticeFunction& f) {
  double m = 0;
  for (const auto& [k, c] : f.values()) m = std::max(m, std::abs(c));
  return m;
}

ModelParams validated(const RunConfig& cfg, const RootSystem& rs) {
  auto p = cfg.params();
  p.validate(rs);
  return p;
}

// expansion of a W-invariant polynomial in Weyl characters, peeling off the
// highest dominant term
LatticeFunction character_expansion(const RootSystem& rs, LaurentPoly f) {
  LatticeFunction out;
  for (int guard = 0; guard < 100000; ++guard) {
    f.prune(1e-13);
    if (f.empty()) return out;
    const IVec* top = nullptr;
    for (const auto& [v, c] : f.terms())
      if (rs.is_dominant(v) && (!top || rs.height(v) > rs.height(*top))) top = &v;
    if (!top) throw std::logic_error("character expansion: no dominant term left");
    IVec mu = *top;
    cplx c = f.coeff(mu);
    out.add(mu, c);
    f -= weyl_character(rs, mu) * c;
  }
  throw std::logic_error("character expansion did not terminate");
}

LatticeOperator explicit_operator(const RootSystem& rs, const ModelParams& p, const IVec& pi) {
  switch (p.kind) {
    case ModelParams::Kind::Unit:
      return [&rs, pi](const LatticeFunction& f) { return apply_free(rs, pi, f); };
    case ModelParams::Kind::Macdonald:
      return [&rs, pi, p](const LatticeFunction& f) { return apply_macdonald_ruijsenaars(rs, pi, f, p); };
    case ModelParams::Kind::Koornwinder:
      if (pi != rs.fundamental_weight(1)) throw std::invalid_argument("the Koornwinder operator uses pi = omega_1");
      return [&rs, p](const LatticeFunction& f) { return apply_koornwinder(rs, f, p); };
  }
  throw std::logic_error("unknown parameter kind");
}

class Suite {
 public:
  explicit Suite(const RunConfig& cfg) : cfg_(cfg) {}
  void add(const std::string& name, double residual, std::size_t cases, const std::string& tol_key) {
    if (!std::isfinite(residual)) residual = INFINITY;
    checks.push_back({name, residual, cfg_.tol.at(tol_key), cases});
  }
  std::vector<Check> checks;

 private:
  const RunConfig& cfg_;
};

void identities(const RunConfig& cfg, Suite& s) {
  auto rs = cfg.root_system();
  auto p = validated(cfg, rs);
  auto ws = ball(rs, cfg.height);
  std::mt19937 rng(cfg.seed);
  if (!ws.empty()) {
    auto sys = gram_schmidt(rs, ws, p.spec(), LinearOrder::GradedLex, 1e-10, cfg.grid_max);
    std::vector<LaurentPoly> polys;
    for (const auto& l : sys.weights) polys.push_back(sys.poly(l));
    auto G = weighted_gram(rs, polys, p.spec(), 1e-10, cfg.grid_max).G;
    double orth = 0;
    for (std::size_t i = 0; i < G.size(); ++i)
      for (std::size_t j = 0; j < G.size(); ++j) orth = std::max(orth, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));
    s.add("orthonormality", orth, G.size() * G.size(), "orthonormality");
    double norms = 0, spec = 0;
    for (const auto& l : sys.weights) {
      auto nd = norm_constants(rs, l, p);
      double expect = nd.N0 / nd.Delta;
      norms = std::max(norms, std::abs(nd.c_lambda * nd.c_lambda / std::pow(sys.leading(l), 2) - expect) / expect);
      spec = std::max(spec, specialization_residual(rs, l, p));
    }
    s.add("closed_form_norms", norms, sys.weights.size(), "norms");
    s.add("specialization", spec, sys.weights.size(), "specialization");
  }
  if (!rs.reduced()) return;
  auto dual = rs.dual();
  double sym = 0;
  std::size_t nsym = 0;
  for (const auto& l : ws)
    for (int r = 0; r <= rs.rank(); ++r) {
      IVec mu(rs.rank(), 0);
      if (r > 0) mu[r - 1] = 1;
      sym = std::max(sym, symmetry_residual(rs, l, mu, p));
      ++nsym;
    }
  s.add("symmetry", sym, nsym, "symmetry");
  double ident = 0;
  std::size_t nid = 0;
  for (const auto& pi : dual.minuscule_weights())
    for (int k = 0; k < cfg.samples; ++k, ++nid)
      ident = std::max(ident, macdonald_identity_residual(rs, pi, random_point(rs.rank(), rng), p));
  s.add("macdonald_identity", ident, nid, "identity");

  std::vector<IVec> dpis = dual.minuscule_weights(), pis = rs.minuscule_weights();
  dpis.push_back(dual.quasi_minuscule_weight());
  pis.push_back(rs.quasi_minuscule_weight());
  double diff = 0, pieri = 0;
  std::size_t ndiff = 0, npieri = 0;
  for (const auto& l : ball(rs, std::min(cfg.height, 2))) {
    std::vector<IVec> mx;
    for (const auto& pi : pis) {
      IVec m = l;
      for (int i = 0; i < rs.rank(); ++i) m[i] += pi[i];
      mx.push_back(m);
    }
    auto sys = gram_schmidt(rs, saturated_weights(rs, mx), p.spec(), LinearOrder::GradedLex, 1e-10, cfg.grid_max);
    for (int k = 0; k < cfg.samples; ++k) {
      auto x = random_point(rs.rank(), rng);
      for (const auto& pi : dpis) {
        diff = std::max(diff, difference_equation_residual(rs, sys, l, x, pi, p));
        ++ndiff;
      }
      for (const auto& pi : pis) {
        pieri = std::max(pieri, pieri_residual(rs, sys, l, x, pi, p));
        ++npieri;
      }
    }
  }
  s.add("difference_equation", diff, ndiff, "difference");
  s.add("pieri", pieri, npieri, "pieri");
}

void free_laplacian(const RunConfig& cfg, Suite& s) {
  auto rs = cfg.root_system();
  validated(cfg, rs);
  IVec pi = cfg.pi_or_default(rs);
  auto ws = ball(rs, cfg.height);
  auto E = E_hat(rs, pi);
  if (rs.reduced()) {
    double forms = 0, chars = 0;
    for (const auto& l : ws) {
      auto d = LatticeFunction::delta(l);
      auto a = apply_free(rs, pi, d);
      forms = std::max(forms, max_abs(a - apply_free_closed_form(rs, pi, d)));
      chars = std::max(chars, max_abs(a - character_expansion(rs, E * weyl_character(rs, l))));
    }
    s.add("closed_forms_agree", forms, ws.size(), "free_forms");
    s.add("character_oracle", chars, ws.size(), "character");
  } else if (rs.rank() == 1) {
    // phi_{-1} = 0: neighbours below zero are dropped
    double bc = 0;
    for (const auto& l : ws) {
      auto a = apply_free(rs, pi, LatticeFunction::delta(l));
      LatticeFunction expect;
      expect.add({l[0] + pi[0]}, 1.0);
      if (l[0] - pi[0] >= 0) expect.add({l[0] - pi[0]}, 1.0);
      bc = std::max(bc, max_abs(a - expect));
    }
    s.add("boundary_rule", bc, ws.size(), "free_forms");
  }
  double four = 0;
  auto small = ball(rs, std::min(cfg.height, 3));
  for (const auto& l : small) {
    auto d = LatticeFunction::delta(l);
    four = std::max(four, max_abs(apply_free(rs, pi, d) - apply_fourier_conjugated(rs, E, CFunctionSpec::unit(), d)));
  }
  s.add("fourier_conjugated", four, small.size(), "fourier");
}

LatticeFunction random_packet(const std::vector<IVec>& support, std::mt19937& rng) {
  std::normal_distribution<double> n;
  LatticeFunction f;
  for (const auto& l : support) f.set(l, {n(rng), n(rng)});
  return f;
}

void laplacian(const RunConfig& cfg, Suite& s) {
  auto rs = cfg.root_system();
  auto p = validated(cfg, rs);
  IVec pi = cfg.pi_or_default(rs);
  auto L = explicit_operator(rs, p, pi);
  auto E = E_hat(rs, pi);
  std::mt19937 rng(cfg.seed);
  auto support = ball(rs, std::min(cfg.height, 3));
  double four = 0, comm = 0;
  std::size_t n = 0, ncomm = 0;
  for (int k = 0; k < cfg.samples && !support.empty(); ++k, ++n) {
    auto phi = random_packet(support, rng);
    four = std::max(four, (L(phi) - apply_fourier_conjugated(rs, E, p.spec(), phi)).norm());
    if (rs.rank() >= 2 && k < 3) {
      comm = std::max(comm, commutator_residual(rs, p.spec(), E_hat(rs, rs.fundamental_weight(1)),
                                                E_hat(rs, rs.fundamental_weight(2)), phi));
      ++ncomm;
    }
  }
  s.add("fourier_conjugated", four, n, "fourier");
  if (rs.rank() >= 2) s.add("commutator", comm, ncomm, "commutator");
  auto ws = ball(rs, cfg.height);
  s.add("hermiticity", ws.empty() ? 0.0 : hermiticity_defect(truncate(L, ws)), ws.size(), "hermiticity");
}

void smatrix(const RunConfig& cfg, Suite& s) {
  auto rs = cfg.root_system();
  auto p = validated(cfg, rs);
  ScatteringContext ctx(rs, p.spec(), E_hat(rs, cfg.pi_or_default(rs)));
  const int nr1 = static_cast<int>(rs.positive_r1().size());
  QuadratureGrid g(rs.rank(), cfg.grid);
  double unit = 0, count = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto x = g.point(k);
    if (!ctx.is_regular(x)) continue;
    ++n;
    unit = std::max(unit, std::abs(std::abs(ctx.S_hat(x, 1.0)) - 1.0));
    if (S_w_sqrt(rs, p.spec(), ctx.w_hat(x), x).count != nr1) count += 1;
  }
  s.add("smatrix_unitarity", unit, n, "unitarity");
  s.add("factor_count_mismatches", count, n, "free_forms");
}

nlohmann::ordered_json header(const std::string& command, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool"] = "rootscat";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = to_json(cfg);
  return j;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

int cmd_verify(const std::string& suite, const RunConfig& cfg, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  auto checks = run_suite(suite, cfg);
  auto j = header("verify", cfg);
  j["suite"] = suite;
  bool ok = true;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass();
    j["checks"].push_back(
        {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"cases", c.cases}, {"pass", c.pass()}});
    if (!c.pass()) err << "check failed: " << c.name << " residual " << c.residual << " > " << c.tolerance << '\n';
  }
  j["pass"] = ok;
  emit(out_path, j.dump(2) + "\n", out);
  return ok ? kOk : kCheckFailed;
}

int cmd_scatter(bool ray_mode, const RunConfig& cfg, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  auto rs = cfg.root_system();
  auto p = validated(cfg, rs);
  if (ray_mode) {
    IVec dir = cfg.ray.empty() ? rs.rho() : cfg.ray;
    if (static_cast<int>(dir.size()) != rs.rank() || !rs.is_dominant(dir))
      throw std::invalid_argument("weights.ray must be a dominant weight of the right rank");
    std::vector<IVec> ray;
    for (int l = 1; l <= cfg.ray_length; ++l) {
      IVec v = dir;
      for (auto& c : v) c *= l;
      ray.push_back(v);
    }
    std::ostringstream os;
    write_csv(os, convergence_report(rs, p.spec(), ray));
    emit(out_path, os.str(), out);
    return kOk;
  }
  ScatteringContext ctx(rs, p.spec(), E_hat(rs, cfg.pi_or_default(rs)));
  WavePacket packet(ctx, cfg.packet());
  auto j = header("scatter", cfg);
  j["reports"] = nlohmann::ordered_json::array();
  std::string error;
  for (int sign : cfg.signs) {
    auto r = run_scattering_diagnostic(packet, sign, cfg.ladder);
    std::ostringstream os;
    write_json(os, r);
    j["reports"].push_back(nlohmann::ordered_json::parse(os.str()));
    if (!r.valid && error.empty()) error = r.error;
  }
  emit(out_path, j.dump(2) + "\n", out);
  if (!error.empty()) {
    err << error << '\n';
    return kLeakageOrDepth;
  }
  return kOk;
}

int cmd_export(const std::string& what, const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  auto rs = cfg.root_system();
  auto p = validated(cfg, rs);
  auto ws = ball(rs, cfg.height);
  std::ostringstream os;
  if (what == "polynomials") {
    auto j = header("export polynomials", cfg);
    j["root_system"] = rs.label();
    nlohmann::ordered_json polys = nlohmann::ordered_json::object();
    if (!ws.empty()) {
      auto sys = gram_schmidt(rs, ws, p.spec(), LinearOrder::GradedLex, 1e-10, cfg.grid_max);
      j["grid_M"] = sys.M;
      for (std::size_t i = 0; i < sys.weights.size(); ++i) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k <= i; ++k) terms[key(sys.weights[k])] = {sys.a[i][k].real(), sys.a[i][k].imag()};
        polys[key(sys.weights[i])] = terms;
      }
    }
    j["polynomials"] = polys;
    os << j.dump(2) << '\n';
  } else if (what == "operator") {
    auto L = explicit_operator(rs, p, cfg.pi_or_default(rs));
    write_csv(os, ws.empty() ? TruncatedMatrix{} : truncate(L, ws));
  } else {
    ScatteringContext ctx(rs, p.spec(), E_hat(rs, cfg.pi_or_default(rs)));
    write_smatrix_csv(os, ctx, cfg.grid);
  }
  emit(out_path, os.str(), out);
  return kOk;
}

}  // namespace

std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg) {
  Suite s(cfg);
  if (suite == "identities" || suite == "appendixA")
    identities(cfg, s);
  else if (suite == "free-laplacian")
    free_laplacian(cfg, s);
  else if (suite == "laplacian")
    laplacian(cfg, s);
  else if (suite == "smatrix")
    smatrix(cfg, s);
  else
    throw ConfigError("unknown suite '" + suite + "'");
  return s.checks;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rootscat: orthogonal polynomials, lattice Laplacians and scattering on root systems"};
  app.footer(kExitCodes);
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "identities", what;
  int workers = 0;
  std::vector<std::string> tols;
  bool ray = false, evolve = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML/JSON run configuration (defaults: A2 Macdonald, g=1.5, q=0.5)");
    sub->add_option("--out", out_path, "output file ('-' or absent: stdout)");
    sub->add_option("--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tols, "tolerance override name=value (repeatable)");
    sub->footer(kExitCodes);
  };
  auto* verify = app.add_subcommand("verify", "run an identity suite and write a JSON report");
  common(verify);
  verify->add_option("--suite", suite, "identities (alias appendixA) | free-laplacian | laplacian | smatrix")
      ->check(CLI::IsMember({"identities", "appendixA", "free-laplacian", "laplacian", "smatrix"}));
  auto* scatter = app.add_subcommand("scatter", "plane-wave convergence (CSV) or packet evolution (JSON)");
  common(scatter);
  auto* fray = scatter->add_flag("--ray", ray, "distance to plane-wave asymptotics along a ray (CSV)");
  scatter->add_flag("--evolve", evolve, "wave packet evolution diagnostics (JSON)")->excludes(fray);
  auto* exp = app.add_subcommand("export", "write polynomial tables, operator matrices or S-matrix samples");
  common(exp);
  exp->add_option("what", what, "polynomials | operator | smatrix")
      ->required()
      ->check(CLI::IsMember({"polynomials", "operator", "smatrix"}));

  std::vector<const char*> argv{"rootscat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (scatter->parsed() && !ray && !evolve) {
    err << "scatter: give --ray or --evolve\n";
    return kUsage;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& t : tols) apply_tolerance(cfg, t);
    if (workers > 0) cfg.workers = workers;
    set_workers(cfg.workers);
    if (verify->parsed()) return cmd_verify(suite, cfg, out_path, out, err);
    if (scatter->parsed()) return cmd_scatter(ray, cfg, out_path, out, err);
    return cmd_export(what, cfg, out_path, out);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const QuadratureError& e) {
    err << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const SingularGram& e) {
    err << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const LeakageError& e) {
    err << e.what() << '\n';
    return kLeakageOrDepth;
  } catch (const InsufficientDepth& e) {
    err << e.what() << '\n';
    return kLeakageOrDepth;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    err << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "parameter rejected: " << e.what() << '\n';
    return kParameterRejected;
  } catch (const std::domain_error& e) {
    err << "parameter rejected: " << e.what() << '\n';
    return kParameterRejected;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace rootscat::cli
