#include "rootscat/harmonic.hpp"

#include "rootscat/parallel.hpp"

#include <cmath>
#include <numbers>

namespace rootscat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IVec vadd(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IVec scaled(const IVec& a, long long t) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<int>(a[i] * t);
  return r;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// f / (1 - e^{-alpha}), exact; throws if the quotient is not a Laurent polynomial
IntLaurent divide_by_factor(const IntLaurent& f, const IVec& alpha) {
  std::size_t j = 0;
  while (alpha[j] == 0) ++j;
  // group the support into lines v0 + t alpha
  std::map<IVec, std::map<long long, long long>> lines;
  for (const auto& [v, c] : f) {
    long long t = floor_div(v[j], alpha[j]);
    IVec v0 = vadd(v, scaled(alpha, -t));
    lines[v0][t] += c;
  }
  IntLaurent h;
  for (const auto& [v0, line] : lines) {
    // h(v) - h(v + alpha) = f(v) and h vanishes far out, so
    // h(t) = -sum_{t' < t} f(t') once the line total is zero
    long long total = 0;
    for (const auto& [t, c] : line) total += c;
    if (total != 0) throw std::logic_error("character division is not exact");
    long long acc = 0;
    auto it = line.begin();
    long long tmin = line.begin()->first, tmax = line.rbegin()->first;
    for (long long t = tmin; t < tmax; ++t) {
      if (it != line.end() && it->first == t) {
        acc += it->second;
        ++it;
      }
      if (acc != 0) h[vadd(v0, scaled(alpha, t + 1))] = -acc;
    }
  }
  return h;
}

}  // namespace

LaurentPoly LaurentPoly::constant(int rank, cplx c) {
  LaurentPoly p;
  p.add(IVec(rank, 0), c);
  p.w_invariant = true;
  return p;
}

LaurentPoly LaurentPoly::monomial(const IVec& v, cplx c) {
  LaurentPoly p;
  p.add(v, c);
  return p;
}

void LaurentPoly::add(const IVec& v, cplx c) {
  auto it = terms_.find(v);
  if (it == terms_.end()) {
    if (c != cplx(0.0)) terms_.emplace(v, c);
    return;
  }
  it->second += c;
  if (it->second == cplx(0.0)) terms_.erase(it);
}

cplx LaurentPoly::coeff(const IVec& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [v, c] : o.terms_) add(v, c);
  w_invariant = w_invariant && o.w_invariant;
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [v, c] : o.terms_) add(v, -c);
  w_invariant = w_invariant && o.w_invariant;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= s;
  return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (const auto& [v, c] : terms_)
    for (const auto& [u, d] : o.terms_) r.add(vadd(v, u), c * d);
  r.w_invariant = w_invariant && o.w_invariant;
  return r;
}

void LaurentPoly::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

cplx LaurentPoly::operator()(const std::vector<double>& x) const {
  cplx s = 0.0;
  for (const auto& [v, c] : terms_) s += c * std::polar(1.0, dot(v, x));
  return s;
}

cplx LaurentPoly::eval_complex(const std::vector<cplx>& x) const {
  cplx s = 0.0;
  for (const auto& [v, c] : terms_) {
    cplx a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += double(v[i]) * x[i];
    s += c * std::exp(cplx(0, 1) * a);
  }
  return s;
}

int LaurentPoly::bandwidth() const {
  int b = 0;
  for (const auto& kv : terms_)
    for (int e : kv.first) b = std::max(b, std::abs(e));
  return b;
}

LaurentPoly monomial_symmetric(const RootSystem& rs, const IVec& lambda) {
  if (!rs.is_dominant(lambda)) throw RootSystemError("monomial_symmetric: weight is not dominant");
  LaurentPoly p;
  for (const auto& v : rs.weyl_orbit(lambda)) p.add(v, 1.0);
  p.w_invariant = true;
  return p;
}

namespace {

IntLaurent int_weyl_denominator(const RootSystem& rs) {
  IntLaurent d{{rs.rho(), 1}};
  for (const auto& a : rs.positive_r0()) {
    IntLaurent nd;
    for (const auto& [v, c] : d) {
      nd[v] += c;
      nd[vadd(v, scaled(a.w, -1))] -= c;
    }
    d.clear();
    for (const auto& kv : nd)
      if (kv.second != 0) d.insert(kv);
  }
  return d;
}

}  // namespace

LaurentPoly weyl_denominator(const RootSystem& rs) {
  LaurentPoly p;
  for (const auto& [v, c] : int_weyl_denominator(rs)) p.add(v, double(c));
  return p;
}

cplx eval_delta(const RootSystem& rs, const std::vector<double>& x) {
  cplx d = 1.0;
  for (const auto& a : rs.positive_r0()) d *= cplx(0, 2.0 * std::sin(0.5 * dot(a.w, x)));
  return d;
}

cplx eval_delta_complex(const RootSystem& rs, const std::vector<cplx>& x) {
  cplx d = 1.0;
  for (const auto& a : rs.positive_r0()) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) t += double(a.w[i]) * x[i];
    d *= 2.0 * cplx(0, 1) * std::sin(0.5 * t);
  }
  return d;
}

IntLaurent alternating_sum(const RootSystem& rs, const IVec& mu) {
  IntLaurent a;
  for (const auto& w : rs.weyl_group()) {
    IVec v(mu.size(), 0);
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < mu.size(); ++j) v[i] += w.on_weights[i][j] * mu[j];
    a[v] += w.sign;
  }
  for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
  return a;
}

LaurentPoly weyl_character(const RootSystem& rs, const IVec& lambda) {
  if (!rs.is_dominant(lambda)) throw RootSystemError("weyl_character: weight is not dominant");
  // A_{lambda+rho} e^{-rho} / prod (1 - e^{-alpha})
  IntLaurent f;
  IVec mrho = scaled(rs.rho(), -1);
  for (const auto& [v, c] : alternating_sum(rs, vadd(lambda, rs.rho()))) f[vadd(v, mrho)] = c;
  for (const auto& a : rs.positive_r0()) f = divide_by_factor(f, a.w);
  LaurentPoly p;
  for (const auto& [v, c] : f) p.add(v, double(c));
  p.w_invariant = true;
  return p;
}

FoldedWeight fold_weight(const RootSystem& rs, const IVec& mu) {
  FoldedWeight r;
  DominantRep d = rs.dominant_representative(vadd(mu, rs.rho()));
  if (!d.stabilizer_trivial) {
    r.zero = true;
    return r;
  }
  r.sign = d.sign;
  r.lambda = vadd(d.lambda, scaled(rs.rho(), -1));
  return r;
}

cplx eval_C(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<double>& x) {
  cplx c = 1.0;
  if (spec.is_unit()) return c;
  for (const auto& a : rs.positive_r1()) c *= spec.of(rs, a)(std::polar(1.0, -dot(a.w, x)));
  return c;
}

double weight_function(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<double>& x) {
  return 1.0 / std::norm(eval_C(rs, spec, x));
}

QuadratureGrid::QuadratureGrid(int rank, int M) : n_(rank), M_(M) {
  if (rank < 1 || M < 1) throw std::invalid_argument("QuadratureGrid: bad size");
  size_ = 1;
  for (int i = 0; i < rank; ++i) size_ *= static_cast<std::size_t>(M);
  weight_ = 1.0 / static_cast<double>(size_);
  roots_.resize(M);
  for (int r = 0; r < M; ++r) roots_[r] = std::polar(1.0, kTwoPi * r / M);
}

IVec QuadratureGrid::index(std::size_t k) const {
  IVec v(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    v[i] = static_cast<int>(k % M_);
    k /= M_;
  }
  return v;
}

std::vector<double> QuadratureGrid::point(std::size_t k) const {
  IVec v = index(k);
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = kTwoPi * v[i] / M_;
  return x;
}

cplx QuadratureGrid::root(long long r) const {
  long long m = r % M_;
  if (m < 0) m += M_;
  return roots_[m];
}

cplx eval_on_grid(const LaurentPoly& f, const QuadratureGrid& grid, const IVec& k) {
  cplx s = 0.0;
  for (const auto& [v, c] : f.terms()) {
    long long e = 0;
    for (std::size_t i = 0; i < v.size(); ++i) e += static_cast<long long>(v[i]) * k[i];
    s += c * grid.root(e);
  }
  return s;
}

std::vector<double> measure_on_grid(const RootSystem& rs, const CFunctionSpec& spec, const QuadratureGrid& grid) {
  const int M = grid.M();
  auto r0 = rs.positive_r0();
  auto r1 = rs.positive_r1();
  // c(e^{-2 pi i r / M}) tables per root length
  std::vector<double> tab_short(M, 1.0), tab_long(M, 1.0);
  if (!spec.is_unit()) {
    for (int r = 0; r < M; ++r) {
      cplx z = std::conj(grid.root(r));
      tab_short[r] = std::norm(spec.short_c(z));
      tab_long[r] = std::norm(spec.long_c(z));
    }
  }
  std::vector<const std::vector<double>*> tabs;
  for (const auto& a : r1) tabs.push_back(rs.is_long_r1(a) ? &tab_long : &tab_short);
  const double scale = grid.weight() / static_cast<double>(rs.weyl_order_formula());
  std::vector<double> out(grid.size());
  auto mod = [M](long long e) {
    long long m = e % M;
    return m < 0 ? m + M : m;
  };
  parallel_for(grid.size(), [&](std::size_t k) {
    IVec idx = grid.index(k);
    double d2 = 1.0;
    for (const auto& a : r0) d2 *= std::norm(1.0 - grid.root(dot(a.w, idx)));
    double c2 = 1.0;
    if (!spec.is_unit())
      for (std::size_t j = 0; j < r1.size(); ++j) c2 *= (*tabs[j])[mod(dot(r1[j].w, idx))];
    out[k] = scale * d2 / c2;
  });
  return out;
}

int grid_size_for_bandwidth(int bw) {
  int M = 8;
  while (M <= bw) M *= 2;
  return M;
}

namespace {

int delta_bandwidth(const RootSystem& rs) {
  // |delta|^2 = prod |1 - e^{i alpha}|^2 has exponents sum_{R0+} +-alpha
  IVec s(rs.rank(), 0);
  for (const auto& a : rs.positive_r0())
    for (int i = 0; i < rs.rank(); ++i) s[i] += std::abs(a.w[i]);
  int b = 0;
  for (int v : s) b = std::max(b, v);
  return b;
}

std::vector<std::vector<cplx>> gram_on_grid(const RootSystem& rs, const std::vector<LaurentPoly>& basis,
                                            const CFunctionSpec& spec, int M) {
  QuadratureGrid grid(rs.rank(), M);
  std::vector<double> mu = measure_on_grid(rs, spec, grid);
  const std::size_t n = basis.size(), P = grid.size();
  // samples[k * n + i]
  std::vector<cplx> samples(P * n);
  parallel_for(P, [&](std::size_t k) {
    IVec idx = grid.index(k);
    for (std::size_t i = 0; i < n; ++i) samples[k * n + i] = eval_on_grid(basis[i], grid, idx);
  });
  std::vector<std::vector<cplx>> G(n, std::vector<cplx>(n));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), [&](std::size_t p) {
    auto [i, j] = pairs[p];
    std::vector<cplx> terms(P);
    for (std::size_t k = 0; k < P; ++k) terms[k] = samples[k * n + i] * std::conj(samples[k * n + j]) * mu[k];
    cplx v = pairwise_sum(terms);
    G[i][j] = v;
    G[j][i] = std::conj(v);
  });
  return G;
}

double max_diff(const std::vector<std::vector<cplx>>& A, const std::vector<std::vector<cplx>>& B) {
  double d = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j) d = std::max(d, std::abs(A[i][j] - B[i][j]));
  return d;
}

}  // namespace

GramResult weighted_gram(const RootSystem& rs, const std::vector<LaurentPoly>& basis, const CFunctionSpec& spec,
                         double tol, int M_max) {
  int bw = 0;
  for (const auto& b : basis) bw = std::max(bw, b.bandwidth());
  int M = grid_size_for_bandwidth(2 * bw + delta_bandwidth(rs));
  if (M > M_max) throw QuadratureError("weighted_gram: required grid exceeds the M budget");
  auto G = gram_on_grid(rs, basis, spec, M);
  if (spec.is_unit()) return {G, M};
  while (2 * M <= M_max) {
    auto G2 = gram_on_grid(rs, basis, spec, 2 * M);
    M *= 2;
    double scale = 1.0;
    for (std::size_t i = 0; i < G2.size(); ++i) scale = std::max(scale, std::abs(G2[i][i]));
    if (max_diff(G, G2) <= tol * scale) return {G2, M};
    G = std::move(G2);
  }
  throw QuadratureError("weighted_gram: no agreement within the M budget (M = " + std::to_string(M) + ")");
}

InnerProductResult inner_product(const RootSystem& rs, const LaurentPoly& f, const LaurentPoly& g,
                                 const CFunctionSpec& spec, double tol, int M_max) {
  auto r = weighted_gram(rs, {f, g}, spec, tol, M_max);
  return {r.G[0][1], r.M};
}

InnerProductResult torus_average(const RootSystem& rs, const std::function<cplx(const std::vector<double>&)>& fn,
                                 int M0, double tol, int M_max) {
  auto avg = [&](int M) {
    QuadratureGrid grid(rs.rank(), M);
    std::vector<cplx> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) { v[k] = fn(grid.point(k)); });
    return pairwise_sum(v) * grid.weight() / static_cast<double>(rs.weyl_order_formula());
  };
  int M = std::max(M0, 2);
  cplx a = avg(M);
  while (2 * M <= M_max) {
    cplx b = avg(2 * M);
    M *= 2;
    if (std::abs(a - b) <= tol * std::max(1.0, std::abs(b))) return {b, M};
    a = b;
  }
  throw QuadratureError("torus_average: no agreement within the M budget");
}

}  // namespace rootscat
