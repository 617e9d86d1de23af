#include "rootscat/rank1.hpp"

#include "rootscat/qfun.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <stdexcept>

namespace rootscat::rank1 {

namespace {

template <class T>
std::array<T, 4> hadamard_half(const std::array<T, 4>& h) {
  T two(2);
  return {(h[0] + h[1] + h[2] + h[3]) / two, (h[0] + h[1] - h[2] - h[3]) / two, (h[0] - h[1] + h[2] - h[3]) / two,
          (h[0] - h[1] - h[2] + h[3]) / two};
}

double rpoch(double a, double q) { return qpochhammer_inf(cplx(a, 0.0), q).real(); }

}  // namespace

Params Params::a1(double g, double s) { return {s, {g / 2, g / 2, g / 2, g / 2}}; }

double Params::q() const { return std::exp(-s); }

std::array<double, 4> Params::g() const { return hadamard_half(ghat); }

std::array<double, 4> dual_params(const std::array<double, 4>& v) { return hadamard_half(v); }
std::array<Rational, 4> dual_params(const std::array<Rational, 4>& v) { return hadamard_half(v); }

cplx c_hat(cplx xi, const Params& p) {
  const double q = p.q();
  const auto& h = p.ghat;
  cplx z = std::exp(cplx(0, -1) * xi);
  cplx num = qpochhammer_inf(std::pow(q, h[0]) * z, q) * qpochhammer_inf(-std::pow(q, h[1]) * z, q) *
             qpochhammer_inf(std::pow(q, h[2] + 0.5) * z, q) * qpochhammer_inf(-std::pow(q, h[3] + 0.5) * z, q);
  return num / qpochhammer_inf(q * z * z, q);
}

double c_plus(double x, const Params& p) {
  const double q = p.q();
  auto g = p.g();
  double num = rpoch(std::pow(q, g[0] + x), q) * rpoch(-std::pow(q, g[1] + x), q) *
               rpoch(std::pow(q, g[2] + 0.5 + x), q) * rpoch(-std::pow(q, g[3] + 0.5 + x), q);
  return std::pow(q, (g[0] + g[1] + g[2] + g[3]) * x / 2) * num / rpoch(std::pow(q, 2 * x), q);
}

double c_minus(double x, const Params& p) {
  const double q = p.q();
  auto g = p.g();
  double den = rpoch(std::pow(q, 1 - g[0] + x), q) * rpoch(-std::pow(q, 1 - g[1] + x), q) *
               rpoch(std::pow(q, 0.5 - g[2] + x), q) * rpoch(-std::pow(q, 0.5 - g[3] + x), q);
  return std::pow(q, (g[0] + g[1] + g[2] + g[3]) * x / 2) * rpoch(std::pow(q, 1 + 2 * x), q) / den;
}

double N0(const Params& p) {
  double g0 = p.g()[0];
  return c_minus(g0, p) / c_plus(g0, p);
}

double Delta(int l, const Params& p) {
  double g0 = p.g()[0];
  return c_plus(g0, p) * c_minus(g0, p) / (c_plus(g0 + l, p) * c_minus(g0 + l, p));
}

double weight(double xi, const Params& p) { return 1.0 / std::norm(c_hat(xi, p)); }

namespace {

// the terms of the series grow like q^{-l^2/2} while the sum stays O(1), so
// the sum is formed at a working precision picked from the largest term
template <unsigned Digits>
cplx askey_wilson_mp(int l, cplx xi, const Params& p) {
  using R = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;
  using C = boost::multiprecision::number<boost::multiprecision::cpp_complex_backend<Digits>>;
  auto g = p.g();
  const R s(p.s);
  auto qp = [&](double e) { return R(exp(-s * R(e))); };
  const R q = qp(1.0);
  const C e = exp(C(R(-xi.imag()), R(xi.real())));
  const C a = C(qp(p.ghat[0]));
  C up[4] = {C(qp(-l)), C(qp(2 * g[0] + l)), a * e, a / e};
  R lo[3] = {-qp(g[0] + g[1]), qp(g[0] + g[2] + 0.5), -qp(g[0] + g[3] + 0.5)};
  C sum(1), term(1);
  R qn(1);
  for (int n = 0; n < l; ++n) {
    C num(1);
    for (auto& u : up) num *= C(1) - u * qn;
    R den(1);
    for (auto& b : lo) den *= R(1) - b * qn;
    den *= R(1) - q * qn;
    if (abs(den) < R(1e-300)) throw std::domain_error("askey_wilson: vanishing lower parameter Pochhammer");
    term *= num / C(den) * C(q);
    sum += term;
    qn *= q;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

cplx askey_wilson_mp_fast(int l, cplx xi, const Params& p) {
  using R = long double;
  using C = std::complex<long double>;
  auto g = p.g();
  const R s = p.s;
  auto qp = [&](R e) { return std::exp(-s * e); };
  const R q = qp(1);
  const C e = std::exp(C(-xi.imag(), xi.real()));
  const C a = qp(p.ghat[0]);
  C up[4] = {qp(-l), qp(2 * g[0] + l), a * e, a / e};
  R lo[3] = {-qp(g[0] + g[1]), qp(g[0] + g[2] + 0.5L), -qp(g[0] + g[3] + 0.5L)};
  C sum = 1, term = 1;
  R qn = 1;
  for (int n = 0; n < l; ++n) {
    C num = 1;
    for (auto& u : up) num *= R(1) - u * qn;
    R den = 1;
    for (auto b : lo) den *= 1 - b * qn;
    den *= 1 - q * qn;
    if (std::abs(den) < 1e-300L) throw std::domain_error("askey_wilson: vanishing lower parameter Pochhammer");
    term *= num / den * q;
    sum += term;
    qn *= q;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace

cplx askey_wilson(int l, cplx xi, const Params& p) {
  if (l < 0) throw std::invalid_argument("askey_wilson: negative degree");
  // log10 of the largest term, from magnitudes only
  const double q = p.q();
  auto g = p.g();
  const double a = std::pow(q, p.ghat[0]);
  cplx e = std::exp(cplx(0, 1) * xi);
  cplx up[4] = {std::pow(q, -l), std::pow(q, 2 * g[0] + l), a * e, a / e};
  double lo[3] = {-std::pow(q, g[0] + g[1]), std::pow(q, g[0] + g[2] + 0.5), -std::pow(q, g[0] + g[3] + 0.5)};
  double lg = 0, top = 0;
  for (int n = 0; n < l; ++n) {
    double qn = std::pow(q, n);
    for (auto u : up) lg += std::log10(std::abs(1.0 - u * qn) + 1e-300);
    for (double b : lo) lg -= std::log10(std::abs(1.0 - b * qn) + 1e-300);
    lg += std::log10(q) - std::log10(1.0 - q * qn);
    top = std::max(top, lg);
  }
  if (top < 2) return askey_wilson_mp_fast(l, xi, p);
  double need = top + 40;
  if (need <= 50) return askey_wilson_mp<50>(l, xi, p);
  if (need <= 100) return askey_wilson_mp<100>(l, xi, p);
  if (need <= 200) return askey_wilson_mp<200>(l, xi, p);
  if (need <= 400) return askey_wilson_mp<400>(l, xi, p);
  if (need <= 1000) return askey_wilson_mp<1000>(l, xi, p);
  if (need <= 2000) return askey_wilson_mp<2000>(l, xi, p);
  if (need <= 4000) return askey_wilson_mp<4000>(l, xi, p);
  throw std::range_error("askey_wilson: series terms exceed the supported working precision");
}

std::vector<cplx> askey_wilson_recurrence(int lmax, cplx xi, const Params& p) {
  const double q = p.q();
  const double a = std::pow(q, p.ghat[0]), b = -std::pow(q, p.ghat[1]), c = std::pow(q, p.ghat[2] + 0.5),
               d = -std::pow(q, p.ghat[3] + 0.5);
  const double abcd = a * b * c * d;
  auto A = [&](int n) {
    double qn = std::pow(q, n);
    return (1 - a * b * qn) * (1 - a * c * qn) * (1 - a * d * qn) * (1 - abcd * qn / q) /
           (a * (1 - abcd * qn * qn / q) * (1 - abcd * qn * qn));
  };
  auto C = [&](int n) {
    double qn = std::pow(q, n);
    return a * (1 - qn) * (1 - b * c * qn / q) * (1 - b * d * qn / q) * (1 - c * d * qn / q) /
           ((1 - abcd * qn * qn / (q * q)) * (1 - abcd * qn * qn / q));
  };
  cplx x2 = 2.0 * std::cos(xi);
  std::vector<cplx> r(lmax + 1);
  r[0] = 1.0;
  if (lmax >= 1) r[1] = (x2 - a - 1.0 / a + A(0)) / A(0);
  for (int n = 1; n < lmax; ++n) r[n + 1] = ((x2 - a - 1.0 / a + A(n) + C(n)) * r[n] - C(n) * r[n - 1]) / A(n);
  return r;
}

double wave(int l, double xi, const Params& p) {
  return std::sqrt(Delta(l, p) / N0(p) * weight(xi, p)) * 2.0 * std::sin(xi) * askey_wilson(l, xi, p).real();
}

std::vector<double> waves(int lmax, double xi, const Params& p) {
  auto P = askey_wilson_recurrence(lmax, xi, p);
  const double base = std::sqrt(weight(xi, p) / N0(p)) * 2.0 * std::sin(xi);
  std::vector<double> out(lmax + 1);
  for (int l = 0; l <= lmax; ++l) out[l] = base * std::sqrt(Delta(l, p)) * P[l].real();
  return out;
}

cplx shat(double xi, const Params& p) { return c_hat(xi, p) / c_hat(-xi, p); }

cplx shat_sqrt(double xi, const Params& p) {
  cplx c = c_hat(xi, p);
  return c / std::abs(c);
}

cplx smatrix(double xi, const Params& p) { return c_hat(-xi, p) / c_hat(xi, p); }

cplx asymptotic(int l, double xi, const Params& p) {
  cplx h = shat_sqrt(xi, p);
  cplx e = std::polar(1.0, (l + 1) * xi);
  return h * e - std::conj(e) / h;
}

double free_wave(int l, double xi) { return 2.0 * std::sin((l + 1) * xi); }

double V(double x, const Params& p) {
  const double s = p.s;
  auto g = p.g();
  return std::sinh(s / 2 * (g[0] + x)) / std::sinh(s / 2 * x) * std::cosh(s / 2 * (g[1] + x)) / std::cosh(s / 2 * x) *
         std::sinh(s / 2 * (g[2] + 0.5 + x)) / std::sinh(s / 2 * (0.5 + x)) * std::cosh(s / 2 * (g[3] + 0.5 + x)) /
         std::cosh(s / 2 * (0.5 + x));
}

std::vector<double> laplacian(const std::vector<double>& phi, const Params& p) {
  const double g0 = p.g()[0];
  const int n = static_cast<int>(phi.size());
  auto at = [&](int l) { return l >= 0 && l < n ? phi[l] : 0.0; };
  std::vector<double> out(n + 1, 0.0);
  for (int l = 0; l <= n; ++l) {
    double up = std::sqrt(V(g0 + l, p) * V(-g0 - l - 1, p));
    double down = l > 0 ? std::sqrt(V(-g0 - l, p) * V(g0 + l - 1, p)) : 0.0;
    double diag = 2 * std::cosh(p.s * p.ghat[0]) - V(g0 + l, p) - (l > 0 ? V(-g0 - l, p) : 0.0);
    out[l] = up * at(l + 1) + down * at(l - 1) + diag * at(l);
  }
  return out;
}

std::vector<double> free_laplacian(const std::vector<double>& phi) {
  const int n = static_cast<int>(phi.size());
  auto at = [&](int l) { return l >= 0 && l < n ? phi[l] : 0.0; };
  std::vector<double> out(n + 1, 0.0);
  for (int l = 0; l <= n; ++l) out[l] = at(l + 1) + at(l - 1);
  return out;
}

}  // namespace rootscat::rank1
