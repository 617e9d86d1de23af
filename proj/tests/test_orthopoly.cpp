#include "doctest.h"
#include "rootscat/orthopoly.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

using namespace rootscat;

namespace {

std::vector<double> random_point(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b) {
  auto d = a - b;
  double m = 0.0;
  for (const auto& kv : d.terms()) m = std::max(m, std::abs(kv.second));
  return m;
}

// monic continuous q-ultraspherical polynomials from the three-term recurrence
// 2cos(x) p_n = p_{n+1} + b_n p_{n-1}, beta = q^g
std::vector<LaurentPoly> rogers_monic(double g, double q, int nmax) {
  const double beta = std::pow(q, g);
  std::vector<LaurentPoly> p;
  p.push_back(LaurentPoly::constant(1, 1.0));
  LaurentPoly x = LaurentPoly::monomial({1}) + LaurentPoly::monomial({-1});
  p.push_back(x);
  for (int n = 1; n < nmax; ++n) {
    double qn = std::pow(q, n);
    double b = (1 - qn) * (1 - beta * beta * qn / q) / ((1 - beta * qn / q) * (1 - beta * qn));
    p.push_back(x * p[n] - p[n - 1] * b);
  }
  return p;
}

const std::vector<std::pair<const char*, ModelParams>> kMacdonaldCases = {
    {"A", ModelParams::macdonald(1.3, 0.7)},
    {"B", ModelParams::macdonald(0.8, 1.6, 0.5)},
    {"C", ModelParams::macdonald(1.4, 0.6, 0.9)},
    {"G", ModelParams::macdonald(0.8, 1.6, 0.5)},
};

}  // namespace

TEST_CASE("weight sets and linear extensions") {
  auto a2 = RootSystem::build("A", 2);
  auto ws = saturated_weights(a2, {{2, 2}});
  // dominant weights below 2 rho in A2: 2rho, 3w1, 3w2, rho, 0
  CHECK(ws.size() == 5);
  for (const auto& w : ws) CHECK(a2.dominance_leq(w, {2, 2}));
  for (auto order : {LinearOrder::GradedLex, LinearOrder::GradedRevLex}) {
    auto h = weights_up_to_height(a2, 4);
    sort_linear_extension(a2, h, order);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = i + 1; j < h.size(); ++j) CHECK_FALSE(a2.dominance_leq(h[j], h[i]));
  }
  // downward closed
  auto b2 = RootSystem::build("B", 2);
  auto h = weights_up_to_height(b2, 5);
  for (const auto& w : h)
    for (const auto& v : saturated_weights(b2, {w})) CHECK(std::find(h.begin(), h.end(), v) != h.end());
}

TEST_CASE("unit measure: Gram-Schmidt reproduces Weyl characters") {
  for (auto label : {"A", "B", "G", "BC"}) {
    auto rs = RootSystem::build(label, 2);
    auto sys = gram_schmidt(rs, weights_up_to_height(rs, 4), CFunctionSpec::unit());
    for (const auto& w : sys.weights) CHECK(max_coeff_diff(sys.poly(w), weyl_character(rs, w)) < 1e-12);
    auto P0 = sys.poly(IVec(2, 0));
    CHECK(P0.size() == 1);
    CHECK(std::abs(inner_product(rs, P0, P0, CFunctionSpec::unit()).value - 1.0) < 1e-12);
  }
}

TEST_CASE("Gram-Schmidt output is orthonormal and triangular") {
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    auto sys = gram_schmidt(rs, weights_up_to_height(rs, 4), p.spec());
    std::vector<LaurentPoly> Ps;
    for (const auto& w : sys.weights) Ps.push_back(sys.poly(w));
    auto G = weighted_gram(rs, Ps, p.spec());
    for (std::size_t i = 0; i < Ps.size(); ++i) {
      CHECK(sys.a[i][i].real() > 0.0);
      for (std::size_t j = 0; j < Ps.size(); ++j) CHECK(std::abs(G.G[i][j] - (i == j ? 1.0 : 0.0)) < 1e-8);
      for (std::size_t j = 0; j < i; ++j)
        if (!rs.dominance_leq(sys.weights[j], sys.weights[i])) CHECK(std::abs(sys.a[i][j]) < 1e-9);
    }
  }
  auto bc2 = RootSystem::build("BC", 2);
  auto kp = ModelParams::koornwinder(1.2, {0.7, 0.4, 0.9, 0.3}, 0.6);
  auto sys = gram_schmidt(bc2, weights_up_to_height(bc2, 4), kp.spec());
  for (std::size_t i = 0; i < sys.weights.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!bc2.dominance_leq(sys.weights[j], sys.weights[i])) CHECK(std::abs(sys.a[i][j]) < 1e-9);
}

TEST_CASE("Macdonald polynomials do not depend on the linear extension") {
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    auto ws = weights_up_to_height(rs, 4);
    auto s1 = gram_schmidt(rs, ws, p.spec(), LinearOrder::GradedLex);
    auto s2 = gram_schmidt(rs, ws, p.spec(), LinearOrder::GradedRevLex);
    if (std::string(label) == "A") CHECK(s1.weights != s2.weights);
    for (const auto& w : ws) CHECK(max_coeff_diff(s1.poly(w), s2.poly(w)) < 1e-10);
  }
}

TEST_CASE("monic polynomials") {
  auto a2 = RootSystem::build("A", 2);
  auto p = ModelParams::macdonald(1.3, 0.7);
  // minuscule weights have nothing below them
  CHECK(max_coeff_diff(macdonald_monic(a2, {1, 0}, p), monomial_symmetric(a2, {1, 0})) < 1e-13);
  // A1 against the q-ultraspherical recurrence
  auto a1 = RootSystem::build("A", 1);
  for (auto [g, s] : std::vector<std::pair<double, double>>{{2.0, std::log(2.0)}, {0.6, 0.4}}) {
    auto ref = rogers_monic(g, std::exp(-s), 6);
    for (int l = 0; l <= 6; ++l)
      CHECK(max_coeff_diff(macdonald_monic(a1, {l}, ModelParams::macdonald(g, s)), ref[l]) < 1e-10);
  }
  // g = 1 gives Weyl characters
  for (auto label : {"A", "B", "G"}) {
    auto rs = RootSystem::build(label, 2);
    for (IVec lam : {IVec{1, 1}, IVec{2, 0}})
      CHECK(max_coeff_diff(macdonald_monic(rs, lam, ModelParams::macdonald(1.0, 0.8)), weyl_character(rs, lam)) <
            1e-11);
  }
  CHECK_THROWS_AS(macdonald_monic(a2, {1, 1}, ModelParams::macdonald(0.0, 0.7)), std::invalid_argument);
  CHECK_THROWS_AS(macdonald_monic(a2, {1, 1}, ModelParams::macdonald(1.0, -0.1)), std::invalid_argument);
  CHECK_THROWS_AS(macdonald_monic(a2, {1, 1}, ModelParams::koornwinder(1.0, {1, 1, 1, 1}, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("g close to one stays close to Weyl characters") {
  auto b2 = RootSystem::build("B", 2);
  for (double g : {1.0 - 1e-6, 1.0 + 1e-6}) {
    double d = max_coeff_diff(macdonald_monic(b2, {1, 1}, ModelParams::macdonald(g, 0.5)), weyl_character(b2, {1, 1}));
    CHECK(d > 0.0);
    CHECK(d < 1e-4);
  }
}

TEST_CASE("norm constants match Gram-Schmidt") {
  std::vector<std::pair<const char*, int>> systems = {{"A", 1}, {"A", 2}, {"B", 2}};
  for (auto [label, n] : systems) {
    auto rs = RootSystem::build(label, n);
    auto p = n == 1 ? ModelParams::macdonald(1.7, 0.6) : ModelParams::macdonald(0.8, 1.6, 0.5);
    auto nd0 = norm_constants(rs, IVec(n, 0), p);
    CHECK(std::abs(nd0.Delta - 1.0) < 1e-14);
    CHECK(std::abs(nd0.c_lambda - 1.0) < 1e-14);
    auto sys = gram_schmidt(rs, weights_up_to_height(rs, 6), p.spec());
    for (const auto& lam : sys.weights) {
      auto nd = norm_constants(rs, lam, p);
      CHECK(nd.Delta > 0.0);
      CHECK(nd.N0 > 0.0);
      auto bold = bold_from_system(sys, lam, p);
      // orthonormal P = N0^{-1/2} Delta^{1/2} bold
      CHECK(max_coeff_diff(sys.poly(lam), bold * std::sqrt(nd.Delta / nd.N0)) < 1e-8);
      CHECK(std::abs(nd.c_lambda * nd.c_lambda / std::pow(sys.leading(lam), 2) - nd.N0 / nd.Delta) <
            1e-8 * nd.N0 / nd.Delta);
    }
    for (std::size_t k = 0; k < 3 && k < sys.weights.size(); ++k) {
      const auto& lam = sys.weights[sys.weights.size() - 1 - k];
      auto bold = bold_from_system(sys, lam, p);
      auto nd = norm_constants(rs, lam, p);
      CHECK(std::abs(inner_product(rs, bold, bold, p.spec()).value - nd.N0 / nd.Delta) < 1e-8);
    }
  }
  // Koornwinder: (1,1) = N0
  auto bc2 = RootSystem::build("BC", 2);
  auto kp = ModelParams::koornwinder(1.2, {0.7, 0.4, 0.9, 0.3}, 0.6);
  auto one = LaurentPoly::constant(2, 1.0);
  CHECK(std::abs(inner_product(bc2, one, one, kp.spec()).value - norm_constants(bc2, {0, 0}, kp).N0) < 1e-8);
}

TEST_CASE("specialization formula") {
  auto a2 = RootSystem::build("A", 2);
  CHECK(specialization_residual(a2, {0, 0}, ModelParams::macdonald(1.3, 0.7)) == 0.0);
  CHECK(specialization_residual(a2, {1, 0}, ModelParams::macdonald(1.3, 0.7)) < 1e-10);
  CHECK(specialization_residual(RootSystem::build("B", 2), {0, 1}, ModelParams::macdonald(0.8, 1.6, 0.5)) < 1e-10);
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    for (IVec lam : {IVec{1, 1}, IVec{2, 1}}) CHECK(specialization_residual(rs, lam, p) < 1e-10);
  }
  auto bc2 = RootSystem::build("BC", 2);
  CHECK(specialization_residual(bc2, {1, 1}, ModelParams::koornwinder(1.2, {0.7, 0.4, 0.9, 0.3}, 0.6)) < 1e-10);
}

TEST_CASE("symmetry relation") {
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    for (IVec lam : {IVec{1, 0}, IVec{0, 1}, IVec{1, 1}}) {
      CHECK(std::abs(symmetry_residual(rs, lam, {0, 0}, p) - specialization_residual(rs, lam, p)) < 1e-10);
      for (IVec mu : {IVec{1, 0}, IVec{0, 1}}) CHECK(symmetry_residual(rs, lam, mu, p) < 1e-9);
    }
  }
}

TEST_CASE("Macdonald identity") {
  std::mt19937 rng(17);
  auto a1 = RootSystem::build("A", 1);
  auto a3 = RootSystem::build("A", 3);
  auto b3 = RootSystem::build("B", 3);
  // g = 0: every factor is one
  CHECK(macdonald_identity_residual(a3, {0, 1, 0}, {0.3, 0.5, 0.9}, ModelParams::macdonald(0.0, 0.5)) < 1e-14);
  for (int k = 0; k < 20; ++k) {
    CHECK(macdonald_identity_residual(a1, {1}, random_point(1, rng), ModelParams::macdonald(1.7, 0.4)) < 1e-12);
    CHECK(macdonald_identity_residual(a3, {0, 1, 0}, random_point(3, rng), ModelParams::macdonald(1.3, 0.7)) < 1e-12);
    for (const auto& pi : b3.dual().minuscule_weights())
      CHECK(macdonald_identity_residual(b3, pi, random_point(3, rng), ModelParams::macdonald(0.6, 1.9, 0.8)) < 1e-12);
  }
  CHECK_THROWS_AS(macdonald_identity_residual(a1, {1}, {0.0}, ModelParams::macdonald(1.7, 0.4)), std::domain_error);
}

TEST_CASE("difference equation and Pieri formula") {
  std::mt19937 rng(23);
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    auto dual = rs.dual();
    std::vector<IVec> dpis = dual.minuscule_weights(), pis = rs.minuscule_weights();
    dpis.push_back(dual.quasi_minuscule_weight());
    pis.push_back(rs.quasi_minuscule_weight());
    for (IVec lam : {IVec{0, 0}, IVec{1, 1}, IVec{2, 0}}) {
      std::vector<IVec> mx;
      for (const auto& pi : pis) mx.push_back({lam[0] + pi[0], lam[1] + pi[1]});
      auto sys = gram_schmidt(rs, saturated_weights(rs, mx), p.spec());
      for (int k = 0; k < 20; ++k) {
        auto x = random_point(2, rng);
        for (const auto& pi : dpis) {
          double r = difference_equation_residual(rs, sys, lam, x, pi, p);
          if (lam == IVec{0, 0})
            CHECK(r < 1e-14);
          else
            CHECK(r < 1e-8);
        }
        for (const auto& pi : pis) CHECK(pieri_residual(rs, sys, lam, x, pi, p) < 1e-8);
      }
    }
  }
}

TEST_CASE("minuscule Pieri coefficients sum to the eigenvalue") {
  // the constant parts of the two Pieri forms agree exactly when pi is minuscule
  for (const auto& [label, p] : kMacdonaldCases) {
    auto rs = RootSystem::build(label, 2);
    auto rgv = rho_g_vee(rs, p);
    auto rg = rho_g(rs, p);
    for (const auto& pi : rs.minuscule_weights())
      for (IVec lam : {IVec{0, 0}, IVec{1, 0}, IVec{0, 2}, IVec{3, 1}}) {
        double lhs = 0, rhs = 0;
        for (const auto& nu : rs.weyl_orbit(pi)) {
          lhs += std::pow(p.q(), dot(nu, rgv));
          IVec ln = {lam[0] + nu[0], lam[1] + nu[1]};
          if (rs.is_dominant(ln)) rhs += macdonald_V(rs, p, nu, {rg[0] + lam[0], rg[1] + lam[1]});
        }
        CHECK(std::abs(lhs - rhs) < 1e-12 * lhs);
      }
  }
}

TEST_CASE("asymptotic polynomials") {
  auto a2 = RootSystem::build("A", 2);
  for (IVec lam : {IVec{0, 0}, IVec{2, 1}})
    CHECK(max_coeff_diff(asymptotic_polynomial(a2, lam, CFunctionSpec::unit(), 5), weyl_character(a2, lam)) < 1e-14);
  auto p = ModelParams::macdonald(1.3, 0.7);
  auto spec = p.spec();
  IVec lam = {4, 4};
  CHECK(m_of(a2, lam) == 4);
  auto tr = taylor_truncated_asymptotic(a2, lam, spec);
  auto m_lam = monomial_symmetric(a2, lam);
  CHECK(std::abs(tr.coeff(lam) - 1.0) < 1e-12);
  for (const auto& [v, c] : tr.terms()) {
    auto d = a2.dominant_representative(v);
    CHECK(a2.dominance_leq(d.lambda, lam));
  }
  // pairing of the exact asymptotic function with monomials
  auto below = saturated_weights(a2, {lam});
  for (const auto& mu : below) {
    auto m = monomial_symmetric(a2, mu);
    auto r = torus_average(
        a2,
        [&](const std::vector<double>& x) {
          return asymptotic_times_delta(a2, lam, spec, x) * std::conj(eval_delta(a2, x) * m(x)) *
                 weight_function(a2, spec, x);
        },
        32, 1e-10);
    CHECK(std::abs(r.value - (mu == lam ? 1.0 : 0.0)) < 1e-6);
  }
  // leading coefficients approach one along the diagonal
  auto a1 = RootSystem::build("A", 1);
  auto sys = gram_schmidt(a1, weights_up_to_height(a1, 10), ModelParams::macdonald(1.8, 0.6).spec());
  double prev = 1e9;
  for (int l = 0; l <= 20; l += 4) {
    double dev = std::abs(sys.leading({l}) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("JSON export") {
  auto a1 = RootSystem::build("A", 1);
  auto sys = gram_schmidt(a1, weights_up_to_height(a1, 2), ModelParams::macdonald(2.0, 0.7).spec());
  auto j = nlohmann::json::parse(to_json(sys));
  CHECK(j["root_system"] == "A1");
  CHECK(j["polynomials"].size() == sys.weights.size());
  CHECK(std::abs(j["polynomials"][0]["coefficients"][0]["re"].get<double>() - sys.leading({0})) < 1e-15);
}
