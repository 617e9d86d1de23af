#include "rootscat/orthopoly.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

namespace rootscat {

namespace {

using lcplx = std::complex<long double>;

double rat(const Rational& r) { return boost::rational_cast<double>(r); }

std::string vec_str(const IVec& v) {
  std::ostringstream o;
  o << "(";
  for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
  o << ")";
  return o.str();
}

std::vector<double> to_double(const IVec& v) { return std::vector<double>(v.begin(), v.end()); }

std::vector<double> plus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

double poch(double a, double q) { return qpochhammer_inf(cplx(a, 0.0), q).real(); }

// Unit parameters realized as the degenerate Macdonald/Koornwinder values
ModelParams effective(const RootSystem& rs, const ModelParams& p) {
  if (p.kind != ModelParams::Kind::Unit) return p;
  ModelParams e = p;
  if (rs.reduced()) {
    e.kind = ModelParams::Kind::Macdonald;
    e.g_short = e.g_long = 1.0;
  } else {
    e.kind = ModelParams::Kind::Koornwinder;
    e.ghat = 1.0;
    e.ghat4 = {1.0, 1.0, 0.0, 0.0};
  }
  return e;
}

// pairing of x (weight coordinates) with the root datum used by C^+-
double c_argument(const RootSystem& rs, const Root& a, const std::vector<double>& x) {
  if (rs.reduced()) return dot(a.coroot, x);
  double s = 0.0;
  const auto& G = rs.gram_weights();
  for (int i = 0; i < rs.rank(); ++i)
    for (int j = 0; j < rs.rank(); ++j) s += x[i] * rat(G[i][j]) * a.w[j];
  return s;
}

double c_factor(const RootSystem& rs, const ModelParams& p, const Root& a, double x, bool plus_sign) {
  const double q = p.q();
  auto check = [&](double den) {
    if (std::abs(den) < 1e-300 || !std::isfinite(den)) {
      std::ostringstream o;
      o << "pole of a c-function factor at root " << vec_str(a.w) << ", argument " << x;
      throw NormError(o.str());
    }
    return den;
  };
  const bool short_bc = !rs.reduced() && !rs.is_long_r1(a);
  if (!short_bc) {
    double g = p.kind == ModelParams::Kind::Koornwinder ? p.ghat : p.g_of(rs, a);
    double pre = std::pow(q, g * x / 2);
    if (plus_sign) return pre * poch(std::pow(q, g + x), q) / check(poch(std::pow(q, x), q));
    return pre * poch(std::pow(q, 1 + x), q) / check(poch(std::pow(q, 1 - g + x), q));
  }
  auto g = p.g4();
  double pre = std::pow(q, (g[0] + g[1] + g[2] + g[3]) * x / 2);
  if (plus_sign) {
    double num = poch(std::pow(q, g[0] + x), q) * poch(-std::pow(q, g[1] + x), q) *
                 poch(std::pow(q, g[2] + 0.5 + x), q) * poch(-std::pow(q, g[3] + 0.5 + x), q);
    return pre * num / check(poch(std::pow(q, 2 * x), q));
  }
  double den = poch(std::pow(q, 1 - g[0] + x), q) * poch(-std::pow(q, 1 - g[1] + x), q) *
               poch(std::pow(q, 0.5 - g[2] + x), q) * poch(-std::pow(q, 0.5 - g[3] + x), q);
  return pre * poch(std::pow(q, 1 + 2 * x), q) / check(den);
}

double C_pm(const RootSystem& rs, const ModelParams& p0, const std::vector<double>& x, bool plus_sign) {
  ModelParams p = effective(rs, p0);
  double c = 1.0;
  for (const auto& a : rs.reduced() ? rs.positive_roots() : rs.positive_r1())
    c *= c_factor(rs, p, a, c_argument(rs, a, x), plus_sign);
  return c;
}

// solve A x = d with A the Cartan matrix
std::vector<double> solve_cartan(const RootSystem& rs, const std::vector<double>& d) {
  const int n = rs.rank();
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A[i][j] = rs.cartan()[i][j];
    A[i][n] = d[i];
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = A[r][c] / A[c][c];
      for (int k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
  return x;
}

cplx csin_half(cplx z) { return std::sin(0.5 * z); }

void require_reduced(const RootSystem& rs, const char* what) {
  if (!rs.reduced()) throw RootSystemError(std::string(what) + ": reduced root system required");
}

// value scale for residuals
double scale_of(std::initializer_list<cplx> vs) {
  double s = 1.0;
  for (auto v : vs) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

ModelParams ModelParams::macdonald(double g_short, double g_long, double s) {
  ModelParams p;
  p.kind = Kind::Macdonald;
  p.g_short = g_short;
  p.g_long = g_long;
  p.s = s;
  return p;
}

ModelParams ModelParams::koornwinder(double ghat, const std::array<double, 4>& ghat4, double s) {
  ModelParams p;
  p.kind = Kind::Koornwinder;
  p.ghat = ghat;
  p.ghat4 = ghat4;
  p.s = s;
  return p;
}

double ModelParams::q() const { return std::exp(-s); }

std::array<double, 4> ModelParams::g4() const {
  const auto& h = ghat4;
  return {0.5 * (h[0] + h[1] + h[2] + h[3]), 0.5 * (h[0] + h[1] - h[2] - h[3]), 0.5 * (h[0] - h[1] + h[2] - h[3]),
          0.5 * (h[0] - h[1] - h[2] + h[3])};
}

double ModelParams::g_of(const RootSystem& rs, const Root& a) const {
  switch (kind) {
    case Kind::Unit:
      return 1.0;
    case Kind::Macdonald:
      return rs.is_long_r1(a) ? g_long : g_short;
    case Kind::Koornwinder:
      return ghat;
  }
  return 1.0;
}

void ModelParams::validate(const RootSystem& rs) const {
  if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("deformation parameter s must be positive");
  if (kind == Kind::Macdonald) {
    if (!rs.reduced()) throw std::invalid_argument("Macdonald parameters need a reduced root system");
    if (!(g_short > 0) || !(g_long > 0)) throw std::invalid_argument("Macdonald parameters g must be positive");
  }
  if (kind == Kind::Koornwinder) {
    if (rs.reduced()) throw std::invalid_argument("Koornwinder parameters need the BC root system");
    if (!(ghat > 0)) throw std::invalid_argument("Koornwinder parameter ghat must be positive");
    for (double v : ghat4)
      if (!(v > 0)) throw std::invalid_argument("Koornwinder parameters ghat_0..ghat_3 must be positive");
  }
}

CFunctionSpec ModelParams::spec() const {
  const double qq = q();
  switch (kind) {
    case Kind::Unit:
      return CFunctionSpec::unit();
    case Kind::Macdonald:
      return {CFunction::macdonald(g_short, qq), CFunction::macdonald(g_long, qq)};
    case Kind::Koornwinder:
      return {CFunction::koornwinder_short(ghat4, qq), CFunction::koornwinder_long(ghat, qq)};
  }
  return CFunctionSpec::unit();
}

ModelParams ModelParams::dual() const {
  ModelParams d = *this;
  if (kind == Kind::Macdonald) std::swap(d.g_short, d.g_long);
  if (kind == Kind::Koornwinder) d.ghat4 = g4();
  return d;
}

std::vector<double> rho_g(const RootSystem& rs, const ModelParams& p0) {
  ModelParams p = effective(rs, p0);
  std::vector<double> r(rs.rank(), 0.0);
  if (rs.reduced()) {
    for (const auto& a : rs.positive_roots())
      for (int i = 0; i < rs.rank(); ++i) r[i] += 0.5 * p.g_of(rs, a) * a.w[i];
    return r;
  }
  const double g0 = p.g4()[0];
  for (const auto& a : rs.positive_r1()) {
    double f = rs.is_long_r1(a) ? 0.5 * p.ghat : g0;
    for (int i = 0; i < rs.rank(); ++i) r[i] += f * a.w[i];
  }
  return r;
}

std::vector<double> rho_g_vee(const RootSystem& rs, const ModelParams& p0) {
  ModelParams p = effective(rs, p0);
  std::vector<double> r(rs.rank(), 0.0);
  if (rs.reduced()) {
    for (const auto& a : rs.positive_roots())
      for (int i = 0; i < rs.rank(); ++i) r[i] += 0.5 * p.g_of(rs, a) * a.coroot[i];
    return r;
  }
  std::vector<double> e(rs.rank(), 0.0);
  for (const auto& a : rs.positive_r1()) {
    double f = rs.is_long_r1(a) ? 0.5 * p.ghat : p.ghat4[0];
    for (int i = 0; i < rs.rank(); ++i) e[i] += f * a.w[i];
  }
  return rs.weights_to_spectral(e);
}

double C_plus(const RootSystem& rs, const ModelParams& p, const std::vector<double>& x) { return C_pm(rs, p, x, true); }
double C_minus(const RootSystem& rs, const ModelParams& p, const std::vector<double>& x) {
  return C_pm(rs, p, x, false);
}

NormData norm_constants(const RootSystem& rs, const IVec& lambda, const ModelParams& p) {
  if (!rs.is_dominant(lambda)) throw RootSystemError("norm_constants: weight is not dominant");
  NormData d;
  d.lambda = lambda;
  auto rg = rho_g(rs, p);
  double cp0, cm0;
  try {
    cp0 = C_plus(rs, p, rg);
    cm0 = C_minus(rs, p, rg);
    auto x = plus(rg, to_double(lambda));
    d.C_plus = C_plus(rs, p, x);
    d.C_minus = C_minus(rs, p, x);
  } catch (const NormError& e) {
    throw NormError(std::string(e.what()) + " for lambda " + vec_str(lambda));
  }
  d.Delta = cp0 * cm0 / (d.C_plus * d.C_minus);
  d.N0 = cm0 / cp0;
  d.c_lambda = d.C_plus / cp0;
  return d;
}

std::vector<IVec> saturated_weights(const RootSystem& rs, const std::vector<IVec>& maxima) {
  std::set<IVec> seen;
  std::vector<IVec> queue;
  for (const auto& m : maxima) {
    if (!rs.is_dominant(m)) throw RootSystemError("saturated_weights: maximum is not dominant");
    if (seen.insert(m).second) queue.push_back(m);
  }
  auto pos = rs.positive_roots();
  for (std::size_t k = 0; k < queue.size(); ++k) {
    IVec cur = queue[k];
    for (const auto& a : pos) {
      IVec v(cur.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = cur[i] - a.w[i];
      if (rs.is_dominant(v) && seen.insert(v).second) queue.push_back(v);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<IVec> weights_up_to_height(const RootSystem& rs, long long h) {
  const int n = rs.rank();
  Rational hmin(1000000);
  for (int r = 1; r <= n; ++r) hmin = std::min(hmin, rs.height(rs.fundamental_weight(r)));
  int bound = static_cast<int>(std::floor(rat(Rational(h) / hmin)));
  std::vector<IVec> out;
  IVec v(n, 0);
  while (true) {
    if (rs.height(v) <= Rational(h)) out.push_back(v);
    int i = 0;
    while (i < n && v[i] == bound) v[i++] = 0;
    if (i == n) break;
    ++v[i];
  }
  return out;
}

void sort_linear_extension(const RootSystem& rs, std::vector<IVec>& ws, LinearOrder order) {
  std::vector<std::pair<Rational, IVec>> keyed;
  for (auto& w : ws) keyed.emplace_back(rs.height(w), w);
  std::sort(keyed.begin(), keyed.end(), [order](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return order == LinearOrder::GradedLex ? a.second < b.second : a.second > b.second;
  });
  for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = keyed[i].second;
}

LaurentPoly OrthoPolySystem::poly(const IVec& lambda) const {
  auto it = index.find(lambda);
  if (it == index.end()) throw std::out_of_range("weight " + vec_str(lambda) + " not in the system");
  LaurentPoly p;
  for (std::size_t j = 0; j <= it->second; ++j)
    if (a[it->second][j] != cplx(0.0)) p += monomial_symmetric(rs, weights[j]) * a[it->second][j];
  p.w_invariant = true;
  return p;
}

LaurentPoly OrthoPolySystem::monic(const IVec& lambda) const { return poly(lambda) * (1.0 / leading(lambda)); }

double OrthoPolySystem::leading(const IVec& lambda) const {
  auto i = index.at(lambda);
  return a[i][i].real();
}

cplx OrthoPolySystem::coefficient(const IVec& lambda, const IVec& mu) const {
  auto i = index.at(lambda);
  auto it = index.find(mu);
  if (it == index.end() || it->second > i) return 0.0;
  return a[i][it->second];
}

OrthoPolySystem gram_schmidt(const RootSystem& rs, const std::vector<IVec>& weights, const CFunctionSpec& spec,
                             LinearOrder order, double tol, int M_max) {
  OrthoPolySystem sys{rs, spec, weights, {}, {}, 0};
  for (const auto& w : sys.weights)
    if (!rs.is_dominant(w)) throw RootSystemError("gram_schmidt: weight " + vec_str(w) + " is not dominant");
  sort_linear_extension(rs, sys.weights, order);
  const std::size_t n = sys.weights.size();
  for (std::size_t i = 0; i < n; ++i) sys.index[sys.weights[i]] = i;
  std::vector<LaurentPoly> basis;
  for (const auto& w : sys.weights) basis.push_back(monomial_symmetric(rs, w));
  auto gram = weighted_gram(rs, basis, spec, tol, M_max);
  sys.M = gram.M;
  // Cholesky G = L L^H in extended precision
  std::vector<std::vector<lcplx>> L(n, std::vector<lcplx>(n, 0.0L));
  long double dmax = 0, dmin = 1e300L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      lcplx s(gram.G[i][j].real(), gram.G[i][j].imag());
      for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * std::conj(L[j][k]);
      if (i == j) {
        long double d = s.real();
        if (!(d > 1e-13L * gram.G[i][i].real())) {
          double cond = static_cast<double>(dmax / std::max(dmin, 1e-300L)) * 1e13;
          throw SingularGram("gram_schmidt: numerically singular Gram matrix at weight " + vec_str(sys.weights[i]),
                             cond);
        }
        L[i][i] = std::sqrt(d);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  // A = L^{-1}
  std::vector<std::vector<lcplx>> A(n, std::vector<lcplx>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = 1.0L / L[i][i];
    for (std::size_t j = 0; j < i; ++j) {
      lcplx s = 0.0L;
      for (std::size_t k = j; k < i; ++k) s += L[i][k] * A[k][j];
      A[i][j] = -s / L[i][i];
    }
  }
  sys.a.assign(n, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      sys.a[i][j] = cplx(static_cast<double>(A[i][j].real()), static_cast<double>(A[i][j].imag()));
  return sys;
}

LaurentPoly macdonald_monic(const RootSystem& rs, const IVec& lambda, const ModelParams& p) {
  p.validate(rs);
  auto sys = gram_schmidt(rs, saturated_weights(rs, {lambda}), p.spec());
  return sys.monic(lambda);
}

LaurentPoly bold_from_system(const OrthoPolySystem& sys, const IVec& lambda, const ModelParams& p) {
  return sys.monic(lambda) * norm_constants(sys.rs, lambda, p).c_lambda;
}

LaurentPoly macdonald_bold(const RootSystem& rs, const IVec& lambda, const ModelParams& p) {
  return macdonald_monic(rs, lambda, p) * norm_constants(rs, lambda, p).c_lambda;
}

std::vector<double> coweight_to_spectral(const RootSystem& rs, const IVec& d) {
  return solve_cartan(rs, to_double(d));
}

std::vector<cplx> imaginary_point(const RootSystem& rs, const ModelParams& p, const std::vector<double>& mu_spectral) {
  auto r = rho_g_vee(rs, p);
  std::vector<cplx> x(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) x[i] = cplx(0.0, p.s * (r[i] + mu_spectral[i]));
  return x;
}

double specialization_residual(const RootSystem& rs, const IVec& lambda, const ModelParams& p) {
  auto P = macdonald_bold(rs, lambda, p);
  return std::abs(P.eval_complex(imaginary_point(rs, p, std::vector<double>(rs.rank(), 0.0))) - 1.0);
}

double symmetry_residual(const RootSystem& rs, const IVec& lambda, const IVec& mu, const ModelParams& p) {
  require_reduced(rs, "symmetry_residual");
  RootSystem dual = rs.dual();
  ModelParams dp = p.dual();
  auto lhs = macdonald_bold(rs, lambda, p).eval_complex(imaginary_point(rs, p, coweight_to_spectral(rs, mu)));
  // rho_g + lambda in the spectral coordinates of the dual system
  auto y = rs.weights_to_simple_root_coords(plus(rho_g(rs, p), to_double(lambda)));
  std::vector<cplx> yc(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) yc[i] = cplx(0.0, p.s * y[i]);
  auto rhs = macdonald_bold(dual, mu, dp).eval_complex(yc);
  return std::abs(lhs - rhs) / scale_of({lhs, rhs});
}

double macdonald_identity_residual(const RootSystem& rs, const IVec& pi_dual, const std::vector<double>& x,
                                   const ModelParams& p) {
  require_reduced(rs, "macdonald_identity_residual");
  RootSystem dual = rs.dual();
  const double q = p.q();
  auto rg = rho_g(rs, p);
  cplx lhs = 0.0, rhs = 0.0;
  double scale = 1.0;
  for (const auto& d : dual.weyl_orbit(pi_dual)) {
    cplx term = 1.0;
    for (const auto& a : rs.roots()) {
      long long m = 0;
      for (int i = 0; i < rs.rank(); ++i) m += static_cast<long long>(a.height[i]) * d[i];
      if (m != 1) continue;
      double t = dot(a.w, x);
      cplx den = csin_half(t);
      if (std::abs(den) < 1e-12) throw std::domain_error("macdonald_identity_residual: point on a singular hyperplane");
      term *= csin_half(cplx(t, p.s * p.g_of(rs, a))) / den;
    }
    lhs += term;
    scale = std::max(scale, std::abs(term));
    rhs += std::pow(q, dot(coweight_to_spectral(rs, d), rg));
  }
  return std::abs(lhs - rhs) / scale;
}

double difference_equation_residual(const RootSystem& rs, const OrthoPolySystem& sys, const IVec& lambda,
                                    const std::vector<double>& x0, const IVec& pi_dual, const ModelParams& p) {
  require_reduced(rs, "difference_equation_residual");
  RootSystem dual = rs.dual();
  const double q = p.q();
  auto P = bold_from_system(sys, lambda, p);
  auto rg = rho_g(rs, p);
  auto lam_rg = plus(rg, to_double(lambda));
  auto orbit = dual.weyl_orbit(pi_dual);
  std::vector<double> x = x0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    bool singular = false;
    cplx lhs = 0.0, rhs = 0.0;
    cplx Px = P(x);
    double scale = std::abs(Px);
    for (const auto& d : orbit) {
      auto nu = coweight_to_spectral(rs, d);
      cplx coef = 1.0;
      for (const auto& a : rs.roots()) {
        long long m = 0;
        for (int i = 0; i < rs.rank(); ++i) m += static_cast<long long>(a.height[i]) * d[i];
        if (m <= 0) continue;
        double t = dot(a.w, x);
        double g = p.g_of(rs, a);
        for (long long l = 0; l < m; ++l) {
          cplx den = csin_half(cplx(t, p.s * l));
          if (std::abs(den) < 1e-9) singular = true;
          coef *= csin_half(cplx(t, p.s * (g + l))) / den;
        }
      }
      std::vector<cplx> shifted(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = cplx(x[i], p.s * nu[i]);
      cplx Ps = P.eval_complex(shifted);
      lhs += coef * (Ps - Px);
      scale = std::max(scale, std::abs(coef * Ps));
      rhs += (std::pow(q, dot(nu, lam_rg)) - std::pow(q, dot(nu, rg))) * Px;
    }
    if (!singular) return std::abs(lhs - rhs) / std::max(1.0, scale);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 1e-3 * (i + 1);
  }
  throw std::domain_error("difference_equation_residual: singular denominators after jitter");
}

double macdonald_V(const RootSystem& rs, const ModelParams& p, const IVec& nu, const std::vector<double>& x) {
  require_reduced(rs, "macdonald_V");
  ModelParams e = effective(rs, p);
  double v = 1.0;
  for (const auto& a : rs.roots()) {
    int m = dot(nu, a.coroot);
    if (m <= 0) continue;
    double t = dot(a.coroot, x);
    double g = e.g_of(rs, a);
    for (int l = 0; l < m; ++l) v *= std::sinh(0.5 * p.s * (g + t + l)) / std::sinh(0.5 * p.s * (t + l));
  }
  return v;
}

double pieri_residual(const RootSystem& rs, const OrthoPolySystem& sys, const IVec& lambda,
                      const std::vector<double>& x, const IVec& pi, const ModelParams& p) {
  require_reduced(rs, "pieri_residual");
  const double q = p.q();
  auto rgv = rho_g_vee(rs, p);
  auto lam_rg = plus(rho_g(rs, p), to_double(lambda));
  auto P = bold_from_system(sys, lambda, p);
  cplx Px = P(x);
  cplx lhs = 0.0, rhs = 0.0;
  double scale = std::max(1.0, std::abs(Px));
  for (const auto& nu : rs.weyl_orbit(pi)) {
    lhs += (std::polar(1.0, dot(nu, x)) - std::pow(q, dot(nu, rgv))) * Px;
    IVec ln(lambda.size());
    for (std::size_t i = 0; i < ln.size(); ++i) ln[i] = lambda[i] + nu[i];
    if (!rs.is_dominant(ln)) continue;
    double V = macdonald_V(rs, p, nu, lam_rg);
    cplx Pn = bold_from_system(sys, ln, p)(x);
    rhs += V * (Pn - Px);
    scale = std::max(scale, std::abs(V * Pn));
  }
  return std::abs(lhs - rhs) / scale;
}

int m_of(const RootSystem& rs, const IVec& lambda) {
  int m = INT32_MAX;
  for (const auto& a : rs.positive_roots()) m = std::min(m, rs.pair_coroot(lambda, a));
  return m;
}

LaurentPoly asymptotic_polynomial(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec, int order) {
  if (!rs.is_dominant(lambda)) throw RootSystemError("asymptotic_polynomial: weight is not dominant");
  order = std::max(order, 0);
  const int n = rs.rank();
  // by_degree[d][beta]: coefficient of e^{-i<beta,xi>} at total Taylor degree d
  std::vector<std::map<IVec, cplx>> by_degree(order + 1);
  by_degree[0][IVec(n, 0)] = 1.0;
  std::vector<double> ts, tl;
  if (!spec.short_c.is_unit()) ts = spec.short_c.taylor(order);
  if (!spec.long_c.is_unit()) tl = spec.long_c.taylor(order);
  for (const auto& a : rs.positive_r1()) {
    const auto& t = rs.is_long_r1(a) ? tl : ts;
    if (t.empty()) continue;
    std::vector<std::map<IVec, cplx>> next(order + 1);
    for (int d = 0; d <= order; ++d)
      for (const auto& [beta, c] : by_degree[d])
        for (int k = 0; d + k <= order; ++k) {
          if (t[k] == 0.0) continue;
          IVec b = beta;
          for (int i = 0; i < n; ++i) b[i] += k * a.w[i];
          next[d + k][b] += c * t[k];
        }
    by_degree = std::move(next);
  }
  std::map<IVec, cplx> folded;
  for (const auto& layer : by_degree)
    for (const auto& [beta, c] : layer) {
      IVec mu(n);
      for (int i = 0; i < n; ++i) mu[i] = lambda[i] - beta[i];
      auto f = fold_weight(rs, mu);
      if (!f.zero) folded[f.lambda] += double(f.sign) * c;
    }
  LaurentPoly p;
  for (const auto& [mu, c] : folded)
    if (c != cplx(0.0)) p += weyl_character(rs, mu) * c;
  p.w_invariant = true;
  return p;
}

LaurentPoly taylor_truncated_asymptotic(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec) {
  return asymptotic_polynomial(rs, lambda, spec, m_of(rs, lambda));
}

cplx asymptotic_times_delta(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec,
                            const std::vector<double>& x) {
  IVec lr(lambda.size());
  for (std::size_t i = 0; i < lr.size(); ++i) lr[i] = lambda[i] + 1;
  cplx s = 0.0;
  for (const auto& w : rs.weyl_group()) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) y[i] += w.on_spectral[i][j] * x[j];
    s += double(w.sign) * eval_C(rs, spec, y) * std::polar(1.0, dot(lr, y));
  }
  return s;
}

std::string to_json(const OrthoPolySystem& sys) {
  nlohmann::json j;
  j["root_system"] = sys.rs.label();
  j["grid_M"] = sys.M;
  j["order"] = sys.weights;
  nlohmann::json polys = nlohmann::json::array();
  for (std::size_t i = 0; i < sys.weights.size(); ++i) {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t k = 0; k <= i; ++k)
      terms.push_back({{"mu", sys.weights[k]}, {"re", sys.a[i][k].real()}, {"im", sys.a[i][k].imag()}});
    polys.push_back({{"lambda", sys.weights[i]}, {"coefficients", terms}});
  }
  j["polynomials"] = polys;
  return j.dump(2);
}

}  // namespace rootscat
