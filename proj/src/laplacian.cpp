#include "rootscat/laplacian.hpp"

#include "rootscat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>

namespace rootscat {

namespace {

IVec vplus(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IVec vneg(const IVec& a) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

std::vector<double> dplus(const std::vector<double>& a, const IVec& b) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

double euclid(const RootSystem& rs, const std::vector<double>& x, const IVec& w) {
  const auto& G = rs.gram_weights();
  double s = 0.0;
  for (int i = 0; i < rs.rank(); ++i)
    for (int j = 0; j < rs.rank(); ++j) s += x[i] * boost::rational_cast<double>(G[i][j]) * w[j];
  return s;
}

double ratio(double num, double den, const char* what) {
  if (std::abs(den) < 1e-14) throw SingularConfiguration(std::string("V_coeff: vanishing denominator in ") + what);
  return num / den;
}

void require_orbit_kind(const RootSystem& rs, const IVec& pi) {
  if (!rs.reduced()) {
    if (pi != rs.fundamental_weight(1)) throw std::invalid_argument("BC Laplacians need pi = omega_1");
    return;
  }
  if (!is_minuscule(rs, pi) && !is_quasi_minuscule(rs, pi))
    throw std::invalid_argument("pi must be minuscule or quasi-minuscule");
}

// output sites reached from the support of phi through the offsets
std::vector<IVec> gather_sites(const RootSystem& rs, const LatticeFunction& phi, const std::vector<IVec>& offsets) {
  std::set<IVec> out;
  for (const auto& [mu, c] : phi.values()) {
    out.insert(mu);
    for (const auto& nu : offsets) {
      IVec l = vplus(mu, vneg(nu));
      if (rs.is_dominant(l)) out.insert(l);
    }
  }
  return {out.begin(), out.end()};
}

LatticeFunction collect(const std::vector<IVec>& sites, const std::vector<cplx>& vals) {
  LatticeFunction r;
  for (std::size_t i = 0; i < sites.size(); ++i) r.set(sites[i], vals[i]);
  return r;
}

double sqrt_positive(double v) {
  if (v < 0) throw SingularConfiguration("negative radicand in a hopping coefficient");
  return std::sqrt(v);
}

}  // namespace

// LatticeFunction

LatticeFunction LatticeFunction::delta(const IVec& lambda, cplx c) {
  LatticeFunction f;
  f.set(lambda, c);
  return f;
}

void LatticeFunction::set(const IVec& lambda, cplx c) {
  if (c == cplx(0.0))
    v_.erase(lambda);
  else
    v_[lambda] = c;
}

void LatticeFunction::add(const IVec& lambda, cplx c) { set(lambda, at(lambda) + c); }

cplx LatticeFunction::at(const IVec& lambda) const {
  auto it = v_.find(lambda);
  return it == v_.end() ? cplx(0.0) : it->second;
}

double LatticeFunction::norm() const {
  double s = 0.0;
  for (const auto& [k, c] : v_) s += std::norm(c);
  return std::sqrt(s);
}

void LatticeFunction::prune(double tol) {
  for (auto it = v_.begin(); it != v_.end();) it = std::abs(it->second) <= tol ? v_.erase(it) : std::next(it);
}

LatticeFunction& LatticeFunction::operator+=(const LatticeFunction& o) {
  for (const auto& [k, c] : o.v_) add(k, c);
  return *this;
}

LatticeFunction& LatticeFunction::operator-=(const LatticeFunction& o) {
  for (const auto& [k, c] : o.v_) add(k, -c);
  return *this;
}

LatticeFunction& LatticeFunction::operator*=(cplx s) {
  if (s == cplx(0.0)) v_.clear();
  for (auto& [k, c] : v_) c *= s;
  return *this;
}

// orbit data

std::set<IVec> localization_support(const RootSystem& rs, const IVec& lambda, int r) {
  if (!rs.is_dominant(lambda)) throw RootSystemError("localization_support: weight is not dominant");
  IVec w = rs.fundamental_weight(r);
  IVec minus_w0w = rs.dominant_representative(vneg(w)).lambda;  // -w0(omega_r)
  std::set<IVec> out;
  for (const auto& mu : saturated_weights(rs, {vplus(lambda, w)}))
    if (rs.dominance_leq(lambda, vplus(mu, minus_w0w))) out.insert(mu);
  return out;
}

std::vector<IVec> symmetric_orbit(const RootSystem& rs, const IVec& pi) {
  std::set<IVec> s;
  for (const auto& v : rs.weyl_orbit(pi)) s.insert(v);
  for (const auto& v : rs.weyl_orbit(rs.dominant_representative(vneg(pi)).lambda)) s.insert(v);
  return {s.begin(), s.end()};
}

bool is_minuscule(const RootSystem& rs, const IVec& pi) {
  auto m = rs.minuscule_weights();
  return std::find(m.begin(), m.end(), pi) != m.end();
}

bool is_quasi_minuscule(const RootSystem& rs, const IVec& pi) {
  return rs.reduced() && pi == rs.quasi_minuscule_weight() && !is_minuscule(rs, pi);
}

double V_coeff(const RootSystem& rs, const IVec& nu, const std::vector<double>& x, const ModelParams& p0) {
  const double s = p0.s;
  if (rs.reduced()) {
    ModelParams p = p0;
    if (p.kind == ModelParams::Kind::Unit) p = ModelParams::macdonald(1.0, p0.s);
    double v = 1.0;
    for (const auto& a : rs.roots()) {
      int m = dot(nu, a.coroot);
      if (m <= 0) continue;
      double t = dot(a.coroot, x);
      double g = p.g_of(rs, a);
      for (int l = 0; l < m; ++l) v *= ratio(std::sinh(0.5 * s * (g + t + l)), std::sinh(0.5 * s * (t + l)), "sinh");
    }
    return v;
  }
  ModelParams p = p0;
  if (p.kind == ModelParams::Kind::Unit) p = ModelParams::koornwinder(1.0, {1.0, 1.0, 0.0, 0.0}, p0.s);
  auto g = p.g4();
  double v = 1.0;
  for (const auto& a : rs.roots()) {
    if (!a.in_r1 || rs.inner(nu, a.w) != Rational(1)) continue;
    double t = euclid(rs, x, a.w);
    if (rs.is_long_r1(a)) {
      v *= ratio(std::sinh(0.5 * s * (p.ghat + t)), std::sinh(0.5 * s * t), "sinh");
    } else {
      v *= ratio(std::sinh(0.5 * s * (g[0] + t)), std::sinh(0.5 * s * t), "sinh");
      v *= ratio(std::cosh(0.5 * s * (g[1] + t)), std::cosh(0.5 * s * t), "cosh");
      v *= ratio(std::sinh(0.5 * s * (g[2] + 0.5 + t)), std::sinh(0.5 * s * (0.5 + t)), "sinh");
      v *= ratio(std::cosh(0.5 * s * (g[3] + 0.5 + t)), std::cosh(0.5 * s * (0.5 + t)), "cosh");
    }
  }
  return v;
}

double functional_relation_residual(const RootSystem& rs, const std::vector<double>& x, const IVec& nu,
                                    const ModelParams& p) {
  auto rg = rho_g(rs, p);
  std::vector<double> a(x.size()), b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = rg[i] + x[i];
    b[i] = a[i] + nu[i];
  }
  // Delta(y) = C+C-(rho_g) / C+C-(rho_g + y); the common numerator cancels
  double lhs = V_coeff(rs, vneg(nu), b, p) / (C_plus(rs, p, b) * C_minus(rs, p, b));
  double rhs = V_coeff(rs, nu, a, p) / (C_plus(rs, p, a) * C_minus(rs, p, a));
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

double E_shift(const RootSystem& rs, const IVec& pi, const ModelParams& p) {
  auto rv = rho_g_vee(rs, p);
  double e = 0.0;
  for (const auto& nu : symmetric_orbit(rs, pi)) e += std::exp(p.s * dot(nu, rv));
  return e;
}

LaurentPoly E_hat(const RootSystem& rs, const IVec& pi) {
  LaurentPoly e;
  for (const auto& nu : symmetric_orbit(rs, pi)) e.add(nu, 1.0);
  e.w_invariant = true;
  return e;
}

LaurentPoly E_hat_fundamental(const RootSystem& rs, int r) { return monomial_symmetric(rs, rs.fundamental_weight(r)); }

// free Laplacians

LatticeFunction apply_free(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi) {
  require_orbit_kind(rs, pi);
  auto orbit = symmetric_orbit(rs, pi);
  LatticeFunction out;
  if (!rs.reduced()) {
    auto sites = gather_sites(rs, phi, orbit);
    std::vector<cplx> vals(sites.size());
    parallel_for(sites.size(), [&](std::size_t i) {
      cplx acc = 0.0;
      for (const auto& nu : orbit) {
        IVec m = vplus(sites[i], nu);
        if (rs.is_dominant(m)) acc += phi.at(m);
      }
      vals[i] = acc;
    });
    return collect(sites, vals);
  }
  // scatter form: chi_lambda * E = sum_nu chi_{lambda+nu} with folding
  for (const auto& [lam, c] : phi.values())
    for (const auto& nu : orbit) {
      auto f = fold_weight(rs, vplus(lam, nu));
      if (!f.zero) out.add(f.lambda, static_cast<double>(f.sign) * c);
    }
  return out;
}

int n_pi(const RootSystem& rs, const IVec& pi, const IVec& lambda) {
  if (!is_quasi_minuscule(rs, pi)) return 0;
  int n = 0;
  for (int j = 0; j < rs.rank(); ++j)
    if (lambda[j] == 0 && rs.is_short(rs.simple_roots()[j])) ++n;
  return n;
}

LatticeFunction apply_free_closed_form(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi) {
  if (!rs.reduced()) return apply_free(rs, pi, phi);
  require_orbit_kind(rs, pi);
  auto orbit = symmetric_orbit(rs, pi);
  auto sites = gather_sites(rs, phi, orbit);
  std::vector<cplx> vals(sites.size());
  parallel_for(sites.size(), [&](std::size_t i) {
    const IVec& lam = sites[i];
    cplx acc = -static_cast<double>(n_pi(rs, pi, lam)) * phi.at(lam);
    for (const auto& nu : orbit) {
      IVec m = vplus(lam, nu);
      if (rs.is_dominant(m)) acc += phi.at(m);
    }
    vals[i] = acc;
  });
  return collect(sites, vals);
}

// difference operators

namespace {

LatticeFunction apply_difference(const RootSystem& rs, const std::vector<IVec>& orbit, const LatticeFunction& phi,
                                 const ModelParams& p, double Eshift) {
  auto rg = rho_g(rs, p);
  auto sites = gather_sites(rs, phi, orbit);
  std::vector<cplx> vals(sites.size());
  parallel_for(sites.size(), [&](std::size_t i) {
    const IVec& lam = sites[i];
    auto x = dplus(rg, lam);
    cplx acc = Eshift * phi.at(lam);
    for (const auto& nu : orbit) {
      IVec m = vplus(lam, nu);
      if (!rs.is_dominant(m)) continue;
      double v = V_coeff(rs, nu, x, p);
      cplx pm = phi.at(m);
      if (pm != cplx(0.0)) acc += sqrt_positive(v) * sqrt_positive(V_coeff(rs, vneg(nu), dplus(rg, m), p)) * pm;
      acc -= v * phi.at(lam);
    }
    vals[i] = acc;
  });
  return collect(sites, vals);
}

}  // namespace

LatticeFunction apply_macdonald_ruijsenaars(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi,
                                            const ModelParams& p) {
  if (!rs.reduced()) throw std::invalid_argument("apply_macdonald_ruijsenaars needs a reduced root system");
  require_orbit_kind(rs, pi);
  p.validate(rs);
  return apply_difference(rs, symmetric_orbit(rs, pi), phi, p, E_shift(rs, pi, p));
}

LatticeFunction apply_koornwinder(const RootSystem& rs, const LatticeFunction& phi, const ModelParams& p) {
  if (rs.reduced()) throw std::invalid_argument("apply_koornwinder needs the BC root system");
  p.validate(rs);
  IVec pi = rs.fundamental_weight(1);
  return apply_difference(rs, rs.weyl_orbit(pi), phi, p, E_shift(rs, pi, p));
}

// Fourier conjugation

namespace {

std::vector<IVec> dominant_exponents(const RootSystem& rs, const LaurentPoly& E) {
  std::vector<IVec> d;
  for (const auto& [v, c] : E.terms())
    if (rs.is_dominant(v)) d.push_back(v);
  return d;
}

}  // namespace

std::vector<IVec> fourier_table(const RootSystem& rs, const LaurentPoly& E, const std::vector<IVec>& support,
                                int steps) {
  auto ed = dominant_exponents(rs, E);
  std::vector<IVec> maxima = support;
  for (int s = 0; s < steps; ++s) {
    std::vector<IVec> next;
    for (const auto& m : maxima)
      for (const auto& e : ed) next.push_back(vplus(m, e));
    maxima = next;
  }
  maxima.insert(maxima.end(), support.begin(), support.end());
  return saturated_weights(rs, maxima);
}

FourierOperator::FourierOperator(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& E,
                                 std::vector<IVec> weights, int M)
    : rs_(rs), E_(E), Edom_(dominant_exponents(rs, E)), sys_(gram_schmidt(rs, weights, spec)) {
  int bw = E.bandwidth();
  for (const auto& w : sys_.weights) bw = std::max(bw, 2 * sys_.poly(w).bandwidth() + E.bandwidth());
  M_ = M > 0 ? M : std::max(sys_.M, grid_size_for_bandwidth(bw + 2 * static_cast<int>(rs.positive_r0().size())));
  QuadratureGrid grid(rs.rank(), M_);
  measure_ = measure_on_grid(rs, spec, grid);
  const std::size_t n = sys_.weights.size(), P = grid.size();
  std::vector<LaurentPoly> polys;
  for (const auto& w : sys_.weights) polys.push_back(sys_.poly(w));
  samples_.assign(n, std::vector<cplx>(P));
  Evals_.resize(P);
  parallel_for(P, [&](std::size_t k) {
    IVec idx = grid.index(k);
    for (std::size_t i = 0; i < n; ++i) samples_[i][k] = eval_on_grid(polys[i], grid, idx);
    Evals_[k] = eval_on_grid(E_, grid, idx);
  });
}

std::vector<IVec> FourierOperator::envelope(const IVec& lambda) const {
  std::vector<IVec> maxima{lambda};
  for (const auto& e : Edom_) maxima.push_back(vplus(lambda, e));
  auto env = saturated_weights(rs_, maxima);
  for (const auto& w : env)
    if (!sys_.contains(w))
      throw InsufficientDepth("Fourier operator: polynomial table does not reach the localization envelope");
  return env;
}

cplx FourierOperator::element(const IVec& mu, const IVec& lambda) const {
  {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = cache_.find({mu, lambda});
    if (it != cache_.end()) return it->second;
  }
  const auto& a = samples_[sys_.index.at(lambda)];
  const auto& b = samples_[sys_.index.at(mu)];
  std::vector<cplx> terms(measure_.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = Evals_[k] * a[k] * std::conj(b[k]) * measure_[k];
  cplx v = pairwise_sum(terms);
  std::lock_guard<std::mutex> lk(cache_mu_);
  cache_[{mu, lambda}] = v;
  return v;
}

LatticeFunction FourierOperator::apply(const LatticeFunction& phi) const {
  std::vector<std::pair<IVec, cplx>> in(phi.values().begin(), phi.values().end());
  std::vector<std::vector<IVec>> env(in.size());
  std::set<IVec> sites;
  for (std::size_t i = 0; i < in.size(); ++i) {
    env[i] = envelope(in[i].first);
    sites.insert(env[i].begin(), env[i].end());
  }
  std::vector<IVec> out_sites(sites.begin(), sites.end());
  std::vector<cplx> vals(out_sites.size());
  parallel_for(out_sites.size(), [&](std::size_t j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i)
      if (std::binary_search(env[i].begin(), env[i].end(), out_sites[j]))
        acc += element(out_sites[j], in[i].first) * in[i].second;
    vals[j] = acc;
  });
  return collect(out_sites, vals);
}

LatticeFunction apply_fourier_conjugated(const RootSystem& rs, const LaurentPoly& E, const CFunctionSpec& spec,
                                         const LatticeFunction& phi, int M) {
  std::vector<IVec> support;
  for (const auto& [k, c] : phi.values()) support.push_back(k);
  FourierOperator op(rs, spec, E, fourier_table(rs, E, support), M);
  return op.apply(phi);
}

double commutator_residual(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& Ea,
                           const LaurentPoly& Eb, const LatticeFunction& phi) {
  std::vector<IVec> support;
  for (const auto& [k, c] : phi.values()) support.push_back(k);
  LaurentPoly Eab = Ea + Eb;
  auto table = fourier_table(rs, Eab, support, 2);
  FourierOperator A(rs, spec, Ea, table), B(rs, spec, Eb, table);
  auto ab = A.apply(B.apply(phi));
  auto ba = B.apply(A.apply(phi));
  return (ab - ba).norm() / phi.norm();
}

// truncation

TruncatedMatrix truncate(const LatticeOperator& L, const std::vector<IVec>& ball) {
  TruncatedMatrix m;
  m.weights = ball;
  std::sort(m.weights.begin(), m.weights.end());
  const std::size_t n = m.weights.size();
  m.A.assign(n, std::vector<cplx>(n, 0.0));
  m.edge.assign(n, false);
  std::map<IVec, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[m.weights[i]] = i;
  for (std::size_t c = 0; c < n; ++c) {
    auto col = L(LatticeFunction::delta(m.weights[c]));
    for (const auto& [w, v] : col.values()) {
      auto it = idx.find(w);
      if (it == idx.end())
        m.edge[c] = true;
      else
        m.A[it->second][c] = v;
    }
  }
  return m;
}

double hermiticity_defect(const TruncatedMatrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    for (std::size_t j = 0; j < m.weights.size(); ++j)
      if (!m.edge[i] && !m.edge[j]) d = std::max(d, std::abs(m.A[i][j] - std::conj(m.A[j][i])));
  return d;
}

void write_csv(std::ostream& os, const TruncatedMatrix& m) {
  auto wstr = [](const IVec& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
    return s;
  };
  os << "row,col,re,im,edge\n";
  os.precision(17);
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    for (std::size_t j = 0; j < m.weights.size(); ++j)
      if (m.A[i][j] != cplx(0.0))
        os << wstr(m.weights[i]) << ',' << wstr(m.weights[j]) << ',' << m.A[i][j].real() << ',' << m.A[i][j].imag()
           << ',' << (m.edge[i] ? 1 : 0) << '\n';
}

}  // namespace rootscat
