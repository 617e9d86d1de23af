// Acceptance run: one PASS/FAIL line per criterion.

#include "commands.hpp"
#include "rootscat/rank1.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

using namespace rootscat;
namespace r1 = rootscat::rank1;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b) {
  double m = 0;
  auto d = a - b;
  for (const auto& [k, c] : d.terms()) m = std::max(m, std::abs(c));
  return m;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

cli::RunConfig config(const std::string& label, const std::string& kind, double g, double g_long = -1) {
  cli::RunConfig c;
  auto i = label.find_first_of("0123456789");
  c.family = label.substr(0, i);
  c.rank = std::stoi(label.substr(i));
  c.kind = kind;
  c.q = 0.5;
  c.g = g;
  if (g_long > 0) c.g_long = g_long;
  return c;
}

cli::RunConfig koornwinder(const std::string& label) {
  auto c = config(label, "koornwinder", 1);
  c.ghat = 0.9;
  c.ghat4 = {0.8, 0.35, 0.6, 0.25};
  c.q = std::exp(-0.7);
  return c;
}

// runs a CLI suite over several configurations; every check must pass
Outcome suites(const std::string& suite, const std::vector<cli::RunConfig>& cfgs,
               const std::vector<std::string>& required) {
  std::map<std::string, double> worst;
  std::map<std::string, std::size_t> cases;
  bool ok = true;
  std::string failed;
  for (const auto& c : cfgs)
    for (const auto& ch : cli::run_suite(suite, c)) {
      worst[ch.name] = std::max(worst[ch.name], ch.residual);
      cases[ch.name] += ch.cases;
      if (!ch.pass()) {
        ok = false;
        failed += " " + c.family + std::to_string(c.rank) + ":" + ch.name;
      }
    }
  for (const auto& r : required)
    if (!cases[r]) {
      ok = false;
      failed += " missing:" + r;
    }
  std::string d;
  for (const auto& [k, v] : worst) d += (d.empty() ? "" : ", ") + k + " " + fmt(v);
  if (!failed.empty()) d += "; failed" + failed;
  return {ok, d};
}

Outcome weyl_characters() {
  double worst = 0;
  for (auto [label, n] : std::vector<std::pair<const char*, int>>{{"A", 1}, {"A", 2}, {"B", 2}, {"G", 2}}) {
    auto rs = RootSystem::build(label, n);
    auto sys = gram_schmidt(rs, weights_up_to_height(rs, 6), CFunctionSpec::unit());
    for (const auto& l : sys.weights) worst = std::max(worst, max_coeff_diff(sys.poly(l), weyl_character(rs, l)));
  }
  return {worst < 1e-12, "max coefficient difference " + fmt(worst)};
}

Outcome orthonormality() {
  double orth = 0, norms = 0;
  for (auto [label, n] : std::vector<std::pair<const char*, int>>{{"A", 1}, {"A", 2}, {"B", 2}})
    for (double g : {0.5, 1.5, 2.5}) {
      auto rs = RootSystem::build(label, n);
      auto p = ModelParams::macdonald(g, std::log(2.0));
      auto sys = gram_schmidt(rs, weights_up_to_height(rs, 6), p.spec());
      std::vector<LaurentPoly> polys;
      for (const auto& l : sys.weights) polys.push_back(sys.poly(l));
      auto G = weighted_gram(rs, polys, p.spec()).G;
      for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = 0; j < G.size(); ++j) orth = std::max(orth, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));
      for (const auto& l : sys.weights) {
        auto nd = norm_constants(rs, l, p);
        // Gram-Schmidt norm of the monic polynomial against N0 / Delta
        double gs = nd.c_lambda * nd.c_lambda / std::pow(sys.leading(l), 2);
        norms = std::max(norms, std::abs(gs - nd.N0 / nd.Delta) / (nd.N0 / nd.Delta));
      }
    }
  return {orth < 1e-8 && norms < 1e-8, "orthonormality " + fmt(orth) + ", norms " + fmt(norms)};
}

Outcome identity_suite() {
  std::vector<cli::RunConfig> cfgs;
  for (double g : {0.5, 1.5, 2.5}) cfgs.push_back(config("A2", "macdonald", g));
  cfgs.push_back(config("B2", "macdonald", 0.5, 1.5));
  cfgs.push_back(config("C2", "macdonald", 1.5, 0.5));
  cfgs.push_back(config("B2", "macdonald", 2.5, 2.5));
  for (auto& c : cfgs) c.samples = 20;
  return suites("identities", cfgs,
                {"specialization", "symmetry", "macdonald_identity", "difference_equation", "pieri"});
}

Outcome laplacians() {
  std::vector<cli::RunConfig> cfgs{config("A2", "unit", 1), config("B2", "unit", 1), config("A2", "macdonald", 1.5),
                                   config("B2", "macdonald", 0.5, 1.5), koornwinder("BC1"), koornwinder("BC2")};
  for (auto& c : cfgs) c.samples = 10;
  return suites("laplacian", cfgs, {"fourier_conjugated", "hermiticity", "commutator"});
}

Outcome free_laplacian() {
  std::vector<cli::RunConfig> cfgs;
  for (const char* label : {"A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"}) {
    auto base = config(label, "unit", 1);
    base.height = 8;
    auto rs = base.root_system();
    auto pis = rs.minuscule_weights();
    pis.push_back(rs.quasi_minuscule_weight());
    for (const auto& p : pis) {
      auto c = base;
      c.pi = p;
      cfgs.push_back(c);
    }
  }
  auto bc1 = config("BC1", "unit", 1);
  bc1.height = 8;
  cfgs.push_back(bc1);
  auto out = suites("free-laplacian", cfgs, {"closed_forms_agree", "character_oracle", "boundary_rule"});
  // A2, quasi-minuscule pi = alpha_1 + alpha_2, lambda = 0: the orbit sum is
  // chi_pi minus the zero-weight multiplicity of chi_pi
  auto a2 = RootSystem::build("A", 2);
  double got = apply_free(a2, {1, 1}, LatticeFunction::delta({0, 0})).at({0, 0}).real();
  double oracle = -weyl_character(a2, {1, 1}).coeff({0, 0}).real();
  out.pass = out.pass && got == oracle && got == -2.0;
  out.detail += "; A2 quasi-minuscule coefficient " + fmt(got) + " (oracle " + fmt(oracle) + ")";
  return out;
}

Outcome plane_waves() {
  auto a1 = RootSystem::build("A", 1);
  auto a2 = RootSystem::build("A", 2);
  std::vector<IVec> r1, r2;
  for (int l = 1; l <= 8; ++l) r1.push_back({l});
  for (int l = 1; l <= 4; ++l) r2.push_back({l, l});
  auto c1 = convergence_report(a1, ModelParams::macdonald(2.0, std::log(2.0)).spec(), r1);
  auto c2 = convergence_report(a2, ModelParams::macdonald(1.5, std::log(2.0)).spec(), r2);
  auto ok = [](const ConvergenceReport& c) { return c.strictly_decreasing && c.r2 > 0.9 && c.slope < 0; };
  return {ok(c1) && ok(c2), "A1 slope " + fmt(c1.slope) + " R2 " + fmt(c1.r2) + ", A2 slope " + fmt(c2.slope) +
                                " R2 " + fmt(c2.r2)};
}

Outcome wave_operators() {
  WavePacketSpec s;
  s.center = {pi / 2};
  s.radius = 1.4;
  auto a1 = RootSystem::build(Family::A, 1);
  auto bc1 = RootSystem::build(Family::BC, 1);
  std::vector<std::pair<std::string, WavePacket>> packets;
  packets.emplace_back("A1", WavePacket(ScatteringContext(a1, ModelParams::macdonald(2.0, std::log(2.0)).spec(),
                                                          E_hat(a1, {1})),
                                        s));
  packets.emplace_back("BC1", WavePacket(ScatteringContext(bc1,
                                                           ModelParams::koornwinder(0.9, {0.8, 0.35, 0.6, 0.25}, 0.7)
                                                               .spec(),
                                                           E_hat(bc1, {1})),
                                         s));
  bool ok = true;
  std::string d;
  const std::vector<double> ladder{4, 8, 16, 32};
  for (const auto& [name, p] : packets) {
    for (int sign : {1, -1}) {
      auto r = run_scattering_diagnostic(p, sign, ladder);
      bool pass = r.valid && r.decreasing && r.total.power.slope <= -1.0 && r.unitary;
      ok = ok && pass;
      d += (d.empty() ? "" : ", ") + name + (sign > 0 ? "+" : "-") + " exponent " + fmt(r.total.power.slope) +
           (r.unitary ? "" : " (unitarity)") + (r.valid ? "" : " (" + r.error + ")");
    }
  }
  return {ok, d};
}

Outcome rank_one() {
  auto bc1 = RootSystem::build(Family::BC, 1);
  r1::Params rp{0.7, {0.8, 0.35, 0.6, 0.25}};
  auto mp = ModelParams::koornwinder(0.9, rp.ghat, rp.s);
  ScatteringContext ctx(bc1, mp.spec(), E_hat(bc1, {1}));
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> U(0.01, pi - 0.01);
  std::vector<double> xs(50);
  for (auto& x : xs) x = U(rng);
  double poly = 0, wave = 0, op = 0, phase = 0;
  for (int l = 0; l <= 10; ++l) {
    auto P = macdonald_bold(bc1, {l}, mp);
    for (double x : xs) {
      poly = std::max(poly, std::abs(P({x}) - r1::askey_wilson(l, x, rp)));
      wave = std::max(wave, std::abs(wave_function(bc1, {l}, {x}, mp) - cplx(0, 1) * r1::wave(l, x, rp)));
    }
    std::vector<double> e(12, 0.0);
    e[l] = 1;
    auto a = apply_koornwinder(bc1, LatticeFunction::delta({l}), mp);
    auto b = r1::laplacian(e, rp);
    for (int m = 0; m < static_cast<int>(b.size()); ++m) op = std::max(op, std::abs(a.at({m}) - b[m]));
  }
  for (double x : xs) phase = std::max(phase, std::abs(ctx.S_hat({x}, 1.0) - r1::smatrix(x, rp)));
  double worst = std::max({poly, wave, op, phase});
  return {worst < 1e-10, "polynomials " + fmt(poly) + ", waves " + fmt(wave) + ", operator " + fmt(op) +
                             ", phase " + fmt(phase)};
}

Outcome smatrix() {
  std::vector<cli::RunConfig> cfgs{config("A1", "macdonald", 2.0),      config("A2", "macdonald", 1.5),
                                   config("B2", "macdonald", 0.5, 1.5), config("G2", "macdonald", 1.5, 0.5),
                                   koornwinder("BC1"),                  koornwinder("BC2")};
  for (auto& c : cfgs) c.grid = c.rank == 1 ? 512 : 64;
  auto out = suites("smatrix", cfgs, {"smatrix_unitarity", "factor_count_mismatches"});
  // every S_w, not only the selected one
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  std::size_t bad = 0, total = 0;
  for (const auto& c : cfgs) {
    auto rs = c.root_system();
    auto spec = c.params().spec();
    const int nr1 = static_cast<int>(rs.positive_r1().size());
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(rs.rank());
      for (auto& v : x) v = U(rng);
      for (const auto& w : rs.weyl_group()) {
        auto f = S_w_sqrt(rs, spec, w, x);
        ++total;
        if (f.count != nr1 || std::abs(std::abs(S_w(rs, spec, w, x)) - 1.0) > 1e-13) ++bad;
      }
    }
  }
  out.pass = out.pass && bad == 0;
  out.detail += "; all-w factor check " + std::to_string(total - bad) + "/" + std::to_string(total);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "Weyl-character reduction", 60, weyl_characters},
      {2, "orthonormality and closed-form norms", 300, orthonormality},
      {3, "identity suite", 300, identity_suite},
      {4, "Laplacian cross-validation", 0, laplacians},
      {5, "free-Laplacian boundary rule", 0, free_laplacian},
      {6, "plane-wave asymptotics", 600, plane_waves},
      {7, "wave-operator surrogate", 1800, wave_operators},
      {8, "rank-one oracle equivalence", 0, rank_one},
      {9, "S-matrix unitarity and factor count", 0, smatrix},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += "; runtime over " + fmt(c.limit_s) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s (%s) [%.1f s]\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
