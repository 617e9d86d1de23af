#include "rootscat/scattering.hpp"

#include "rootscat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

namespace rootscat {

namespace {

std::vector<double> apply_spectral(const WeylElement& w, const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += w.on_spectral[i][j] * x[j];
  return y;
}

IVec apply_weights(const WeylElement& w, const IVec& v) {
  IVec y(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) y[i] += w.on_weights[i][j] * v[j];
  return y;
}

double inv_W(const RootSystem& rs) { return 1.0 / static_cast<double>(rs.weyl_order_formula()); }

LaurentPoly plane_wave_poly(const RootSystem& rs, const IVec& lambda) {
  IVec m = lambda;
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += 1;
  LaurentPoly p;
  for (const auto& [v, c] : alternating_sum(rs, m)) p.add(v, static_cast<double>(c));
  return p;
}

}  // namespace

// spectral functions

SpectralFunction SpectralFunction::sample(int rank, int M, const std::function<cplx(const std::vector<double>&)>& f) {
  SpectralFunction s{rank, M, {}};
  QuadratureGrid g(rank, M);
  s.v.resize(g.size());
  parallel_for(g.size(), [&](std::size_t k) { s.v[k] = f(g.point(k)); });
  return s;
}

cplx spectral_inner(const RootSystem& rs, const SpectralFunction& a, const SpectralFunction& b) {
  if (a.M != b.M || a.rank != b.rank) throw std::invalid_argument("spectral_inner: grids differ");
  std::vector<cplx> t(a.v.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = a.v[k] * std::conj(b.v[k]);
  return pairwise_sum(t) / static_cast<double>(t.size()) * inv_W(rs);
}

double spectral_norm(const RootSystem& rs, const SpectralFunction& a) {
  return std::sqrt(std::max(0.0, spectral_inner(rs, a, a).real()));
}

// wave table

WaveTable::WaveTable(const RootSystem& rs, const CFunctionSpec& spec, std::vector<IVec> weights, int M_max)
    : sys_(gram_schmidt(rs, weights, spec, LinearOrder::GradedLex, 1e-10, M_max)) {
  for (const auto& w : sys_.weights) polys_.push_back(sys_.poly(w));
}

cplx WaveTable::operator()(const IVec& lambda, const std::vector<double>& x) const {
  auto it = sys_.index.find(lambda);
  if (it == sys_.index.end()) throw std::out_of_range("wave table has no entry for this weight");
  const auto& rs = sys_.rs;
  return std::sqrt(weight_function(rs, sys_.spec, x)) * eval_delta(rs, x) * polys_[it->second](x);
}

const std::vector<double>& WaveTable::amplitude(int M) const {
  auto it = amp_.find(M);
  if (it != amp_.end()) return it->second;
  QuadratureGrid g(sys_.rs.rank(), M);
  std::vector<double> a(g.size());
  parallel_for(g.size(), [&](std::size_t k) { a[k] = std::sqrt(weight_function(sys_.rs, sys_.spec, g.point(k))); });
  return amp_[M] = std::move(a);
}

const std::vector<cplx>& WaveTable::on_grid(const IVec& lambda, int M) const {
  auto it = sys_.index.find(lambda);
  if (it == sys_.index.end()) throw std::out_of_range("wave table has no entry for this weight");
  std::lock_guard<std::mutex> lk(mu_);
  auto key = std::make_pair(M, it->second);
  auto c = cache_.find(key);
  if (c != cache_.end()) return *c->second;
  const auto& amp = amplitude(M);
  QuadratureGrid g(sys_.rs.rank(), M);
  LaurentPoly f = plane_wave_poly(sys_.rs, IVec(lambda.size(), 0)) * polys_[it->second];  // delta * P
  auto v = std::make_shared<std::vector<cplx>>(g.size());
  parallel_for(g.size(), [&](std::size_t k) { (*v)[k] = amp[k] * eval_on_grid(f, g, g.index(k)); });
  cache_[key] = v;
  return *v;
}

namespace {

struct BoldKey {
  std::string label;
  IVec lambda;
  int kind;
  double s, a, b, c;
  std::array<double, 4> h;
  bool operator<(const BoldKey& o) const {
    return std::tie(label, lambda, kind, s, a, b, c, h) < std::tie(o.label, o.lambda, o.kind, o.s, o.a, o.b, o.c, o.h);
  }
};

struct BoldEntry {
  LaurentPoly P;
  double scale;
};

const BoldEntry& bold_entry(const RootSystem& rs, const IVec& lambda, const ModelParams& p) {
  static std::mutex mu;
  static std::map<BoldKey, BoldEntry> cache;
  BoldKey k{rs.label(), lambda, static_cast<int>(p.kind), p.s, p.g_short, p.g_long, p.ghat, p.ghat4};
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
  }
  auto nd = norm_constants(rs, lambda, p);
  BoldEntry e{macdonald_bold(rs, lambda, p), std::sqrt(nd.Delta / nd.N0)};
  std::lock_guard<std::mutex> lk(mu);
  return cache.emplace(k, std::move(e)).first->second;
}

}  // namespace

cplx wave_function(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, const ModelParams& p) {
  const auto& e = bold_entry(rs, lambda, p);
  return e.scale * std::sqrt(weight_function(rs, p.spec(), x)) * eval_delta(rs, x) * e.P(x);
}

cplx plane_wave(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, long long max_order) {
  cplx s = 0.0;
  IVec rl = lambda;
  for (auto& c : rl) c += 1;
  for (const auto& w : rs.weyl_group(max_order)) s += static_cast<double>(w.sign) * std::polar(1.0, dot(rl, apply_spectral(w, x)));
  return s;
}

SwFactors S_w_sqrt(const RootSystem& rs, const CFunctionSpec& spec, const WeylElement& w, const std::vector<double>& x) {
  std::set<IVec> positive;
  for (const auto& a : rs.positive_roots()) positive.insert(a.w);
  SwFactors f;
  for (const auto& b : rs.positive_r1()) {
    cplx h = shat_sqrt(spec.of(rs, b), dot(b.w, x));
    if (positive.count(apply_weights(w, b.w))) {
      f.value *= h;
      ++f.same_side;
    } else {
      f.value *= std::conj(h);
      ++f.flipped;
    }
    ++f.count;
  }
  return f;
}

cplx S_w(const RootSystem& rs, const CFunctionSpec& spec, const WeylElement& w, const std::vector<double>& x) {
  cplx h = S_w_sqrt(rs, spec, w, x).value;
  return h * h;
}

cplx asymptotic_wave(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, const CFunctionSpec& spec,
                     long long max_order) {
  cplx s = 0.0;
  IVec rl = lambda;
  for (auto& c : rl) c += 1;
  for (const auto& w : rs.weyl_group(max_order))
    s += static_cast<double>(w.sign) * S_w_sqrt(rs, spec, w, x).value * std::polar(1.0, dot(rl, apply_spectral(w, x)));
  return s;
}

// convergence

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double wave_distance(const WaveTable& table, const IVec& lambda, double tol) {
  const auto& rs = table.root_system();
  int bw = table.system().poly(lambda).bandwidth() + 2 * static_cast<int>(rs.positive_r0().size());
  auto r = torus_average(
      rs,
      [&](const std::vector<double>& x) {
        return cplx(std::norm(table(lambda, x) - asymptotic_wave(rs, lambda, x, table.spec())), 0.0);
      },
      grid_size_for_bandwidth(2 * bw), tol, 1024);
  return std::sqrt(std::max(0.0, r.value.real()));
}

ConvergenceReport convergence_report(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<IVec>& ray) {
  WaveTable table(rs, spec, saturated_weights(rs, ray));
  ConvergenceReport rep;
  std::vector<double> xs, ys;
  for (const auto& l : ray) {
    ConvergenceRow row{l, m_of(rs, l), wave_distance(table, l)};
    rep.rows.push_back(row);
    if (row.distance > 0) {
      xs.push_back(row.m);
      ys.push_back(std::log(row.distance));
    }
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].distance < rep.rows[i - 1].distance)) rep.strictly_decreasing = false;
  if (xs.size() >= 2) {
    auto f = linear_fit(xs, ys);
    rep.slope = f.slope;
    rep.intercept = f.intercept;
    rep.r2 = f.r2;
  }
  return rep;
}

void write_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "lambda,m,distance\n";
  os.precision(17);
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.lambda.size(); ++i) os << (i ? " " : "") << row.lambda[i];
    os << ',' << row.m << ',' << row.distance << '\n';
  }
}

// Fourier transforms

SpectralFunction fourier_forward(const WaveTable& table, const LatticeFunction& phi, int M) {
  const int n = table.root_system().rank();
  SpectralFunction f{n, M, std::vector<cplx>(QuadratureGrid(n, M).size(), 0.0)};
  for (const auto& [l, c] : phi.values()) {
    const auto& psi = table.on_grid(l, M);
    for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] += c * std::conj(psi[k]);
  }
  return f;
}

double leakage(const RootSystem& rs, const SpectralFunction& f, const LatticeFunction& inverse) {
  double tot = spectral_inner(rs, f, f).real();
  if (tot <= 0) return 0.0;
  double got = inverse.norm();
  return std::max(0.0, 1.0 - got * got / tot);
}

LatticeFunction fourier_inverse(const WaveTable& table, const SpectralFunction& f, const std::vector<IVec>& window,
                                double leak_tol) {
  const auto& rs = table.root_system();
  const auto& ws = window.empty() ? table.weights() : window;
  std::vector<cplx> vals(ws.size());
  const double scale = inv_W(rs) / static_cast<double>(f.v.size());
  for (const auto& w : ws) table.on_grid(w, f.M);  // fill the cache before the parallel section
  parallel_for(ws.size(), [&](std::size_t i) {
    const auto& psi = table.on_grid(ws[i], f.M);
    std::vector<cplx> t(f.v.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = f.v[k] * psi[k];
    vals[i] = pairwise_sum(t) * scale;
  });
  LatticeFunction out;
  for (std::size_t i = 0; i < ws.size(); ++i) out.set(ws[i], vals[i]);
  double leak = leakage(rs, f, out);
  if (leak > leak_tol) throw LeakageError("Fourier inverse: window misses part of the mass", leak);
  return out;
}

SpectralFunction fourier0_forward(const RootSystem& rs, const LatticeFunction& phi, int M) {
  QuadratureGrid g(rs.rank(), M);
  LaurentPoly conj_sum;  // sum phi_lambda conj(Psi0_lambda) as a Laurent polynomial
  for (const auto& [l, c] : phi.values()) {
    LaurentPoly pw = plane_wave_poly(rs, l);
    for (const auto& [v, a] : pw.terms()) {
      IVec m = v;
      for (auto& x : m) x = -x;
      conj_sum.add(m, c * std::conj(a));
    }
  }
  SpectralFunction f{rs.rank(), M, std::vector<cplx>(g.size())};
  parallel_for(g.size(), [&](std::size_t k) { f.v[k] = eval_on_grid(conj_sum, g, g.index(k)); });
  return f;
}

LatticeFunction fourier0_inverse(const RootSystem& rs, const SpectralFunction& f, const std::vector<IVec>& window,
                                 double leak_tol) {
  QuadratureGrid g(rs.rank(), f.M);
  std::vector<cplx> vals(window.size());
  const double scale = inv_W(rs) / static_cast<double>(f.v.size());
  parallel_for(window.size(), [&](std::size_t i) {
    LaurentPoly pw = plane_wave_poly(rs, window[i]);
    std::vector<cplx> t(f.v.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = f.v[k] * eval_on_grid(pw, g, g.index(k));
    vals[i] = pairwise_sum(t) * scale;
  });
  LatticeFunction out;
  for (std::size_t i = 0; i < window.size(); ++i) out.set(window[i], vals[i]);
  double leak = leakage(rs, f, out);
  if (leak > leak_tol) throw LeakageError("free Fourier inverse: window misses part of the mass", leak);
  return out;
}

// scattering context

ScatteringContext::ScatteringContext(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& E)
    : rs_(rs), spec_(spec), E_(E) {
  for (const auto& [v, c] : E.terms()) {
    IVec m = v;
    for (auto& x : m) x = -x;
    if (std::abs(E.coeff(m) - std::conj(c)) > 1e-14 * std::max(1.0, std::abs(c)))
      throw std::invalid_argument("ScatteringContext: symbol is not real on real xi");
  }
}

double ScatteringContext::E(const std::vector<double>& x) const { return E_(x).real(); }

std::vector<double> ScatteringContext::grad(const std::vector<double>& x) const {
  std::vector<double> g(rs_.rank(), 0.0);
  for (const auto& [v, c] : E_.terms()) {
    double t = dot(v, x);
    double f = -(c.real() * std::sin(t) + c.imag() * std::cos(t));
    for (int i = 0; i < rs_.rank(); ++i) g[i] += f * v[i];
  }
  return g;
}

bool ScatteringContext::is_regular(const std::vector<double>& x, double tol) const {
  auto g = grad(x);
  for (const auto& a : rs_.positive_roots())
    if (std::abs(dot(a.coroot, g)) <= tol) return false;
  return true;
}

WeylElement ScatteringContext::w_hat(const std::vector<double>& x) const {
  if (!is_regular(x)) throw NotRegular("point outside the regular sector");
  auto g = grad(x);
  std::vector<int> applied;
  for (int guard = 0; guard < 10000; ++guard) {
    int j = -1;
    for (int k = 0; k < rs_.rank(); ++k)
      if (g[k] < 0) {
        j = k;
        break;
      }
    if (j < 0) break;
    const auto& a = rs_.simple_roots()[j].w;
    double gj = g[j];
    for (int i = 0; i < rs_.rank(); ++i) g[i] -= gj * a[i];
    applied.push_back(j);
  }
  return rs_.element_from_word(std::vector<int>(applied.rbegin(), applied.rend()));
}

cplx ScatteringContext::S_hat(const std::vector<double>& x, double power) const {
  std::vector<double> y = x;
  if (!is_regular(y)) {
    if (policy == SingularPolicy::Reject) throw NotRegular("scattering matrix requested outside the regular sector");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 1e-7 * (1.0 + 0.37 * i);
  }
  cplx h = S_w_sqrt(rs_, spec_, w_hat(y), x).value;
  if (power == 0.5) return h;
  if (power == -0.5) return std::conj(h);
  if (power == 1.0) return h * h;
  if (power == -1.0) return std::conj(h * h);
  throw std::invalid_argument("S_hat: power must be one of 1, -1, 1/2, -1/2");
}

std::pair<double, double> ScatteringContext::spectrum(int M) const {
  QuadratureGrid g(rs_.rank(), M);
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double e = E(g.point(k));
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

SpectralFunction smatrix_apply(const SpectralFunction& f, double power, const ScatteringContext& ctx) {
  SpectralFunction out = f;
  QuadratureGrid g(f.rank, f.M);
  double fmax = 0.0;
  for (const auto& v : f.v) fmax = std::max(fmax, std::abs(v));
  std::vector<char> bad(f.v.size(), 0);
  parallel_for(f.v.size(), [&](std::size_t k) {
    auto x = g.point(k);
    if (std::abs(f.v[k]) <= 1e-13 * fmax) {
      out.v[k] = 0.0;
      return;
    }
    if (!ctx.is_regular(x) && ctx.policy == ScatteringContext::SingularPolicy::Reject) {
      bad[k] = 1;
      return;
    }
    out.v[k] = ctx.S_hat(x, power) * f.v[k];
  });
  if (std::any_of(bad.begin(), bad.end(), [](char b) { return b != 0; }))
    throw NotRegular("spectral support touches the singular part of the alcove");
  return out;
}

LatticeFunction wave_operator_apply(const LatticeFunction& phi, int sign, const ScatteringContext& ctx,
                                    const WaveTable& table, int M, const std::vector<IVec>& window) {
  auto f = fourier0_forward(ctx.root_system(), phi, M);
  return fourier_inverse(table, smatrix_apply(f, sign > 0 ? -0.5 : 0.5, ctx), window);
}

LatticeFunction scattering_operator_apply(const LatticeFunction& phi, const ScatteringContext& ctx, int M,
                                          const std::vector<IVec>& window) {
  auto f = fourier0_forward(ctx.root_system(), phi, M);
  return fourier0_inverse(ctx.root_system(), smatrix_apply(f, 1.0, ctx), window);
}

void write_smatrix_csv(std::ostream& os, const ScatteringContext& ctx, int M) {
  QuadratureGrid g(ctx.root_system().rank(), M);
  os << "xi,re,im\n";
  os.precision(17);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto x = g.point(k);
    if (!ctx.is_regular(x)) continue;
    cplx s = ctx.S_hat(x, 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << x[i];
    os << ',' << s.real() << ',' << s.imag() << '\n';
  }
}

}  // namespace rootscat
