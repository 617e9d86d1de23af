#include "rootscat/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

namespace rootscat {

namespace {

RMat zeros(int n) { return RMat(n, std::vector<Rational>(n, Rational(0))); }

RMat invert(RMat a) {
  const int n = static_cast<int>(a.size());
  RMat inv = zeros(n);
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c].numerator() == 0) ++p;
    if (p == n) throw RootSystemError("singular Cartan data");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (int k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c].numerator() == 0) continue;
      Rational f = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// row vector times matrix
std::vector<Rational> row_times(const IVec& v, const RMat& m) {
  const int n = static_cast<int>(m.size());
  std::vector<Rational> out(n, Rational(0));
  for (int i = 0; i < n; ++i)
    if (v[i] != 0)
      for (int k = 0; k < n; ++k) out[k] += Rational(v[i]) * m[i][k];
  return out;
}

int to_int(const Rational& r) {
  if (r.denominator() != 1) throw RootSystemError("non-integral coordinate");
  return static_cast<int>(r.numerator());
}

RMat chain_gram(int n) {
  RMat g = zeros(n);
  for (int i = 0; i < n; ++i) {
    g[i][i] = 2;
    if (i + 1 < n) g[i][i + 1] = g[i + 1][i] = -1;
  }
  return g;
}

RMat gram_for(Family f, int n) {
  switch (f) {
    case Family::A:
      if (n < 1) break;
      return chain_gram(n);
    case Family::B: {
      if (n < 2) break;
      RMat g = chain_gram(n);
      g[n - 1][n - 1] = 1;
      return g;
    }
    case Family::C: {
      if (n < 2) break;
      // e_i - e_{i+1}, 2 e_N, halved so that long roots have length^2 2
      RMat g = zeros(n);
      for (int i = 0; i < n; ++i) g[i][i] = 1;
      for (int i = 0; i + 1 < n; ++i) g[i][i + 1] = g[i + 1][i] = Rational(-1, 2);
      g[n - 1][n - 1] = 2;
      g[n - 2][n - 1] = g[n - 1][n - 2] = -1;
      return g;
    }
    case Family::D: {
      if (n < 4) break;
      RMat g = chain_gram(n);
      g[n - 2][n - 1] = g[n - 1][n - 2] = 0;
      g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
      return g;
    }
    case Family::E: {
      if (n < 6 || n > 8) break;
      // Bourbaki labelling: chain 1-3-4-5-6-7-8, node 2 attached to 4
      RMat g = zeros(n);
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      auto edge = [&](int a, int b) { g[a - 1][b - 1] = g[b - 1][a - 1] = -1; };
      edge(1, 3);
      edge(3, 4);
      edge(2, 4);
      for (int k = 4; k < n; ++k) edge(k, k + 1);
      return g;
    }
    case Family::F: {
      if (n != 4) break;
      RMat g = zeros(4);
      g[0][0] = g[1][1] = 2;
      g[2][2] = g[3][3] = 1;
      g[0][1] = g[1][0] = -1;
      g[1][2] = g[2][1] = -1;
      g[2][3] = g[3][2] = Rational(-1, 2);
      return g;
    }
    case Family::G: {
      if (n != 2) break;
      RMat g = zeros(2);
      g[0][0] = Rational(2, 3);
      g[1][1] = 2;
      g[0][1] = g[1][0] = -1;
      return g;
    }
    case Family::BC: {
      if (n < 1) break;
      // simple roots of R0 = C_N realised as e_i - e_{i+1}, 2 e_N (unscaled)
      RMat g = zeros(n);
      for (int i = 0; i < n; ++i) g[i][i] = 2;
      for (int i = 0; i + 1 < n; ++i) g[i][i + 1] = g[i + 1][i] = -1;
      g[n - 1][n - 1] = 4;
      if (n >= 2) g[n - 2][n - 1] = g[n - 1][n - 2] = -2;
      return g;
    }
  }
  throw RootSystemError("invalid root system " + to_string(f) + std::to_string(n));
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E: return "E";
    case Family::F: return "F";
    case Family::G: return "G";
    case Family::BC: return "BC";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  static const std::map<std::string, Family> table = {
      {"A", Family::A}, {"B", Family::B}, {"C", Family::C}, {"D", Family::D},
      {"E", Family::E}, {"F", Family::F}, {"G", Family::G}, {"BC", Family::BC}};
  auto it = table.find(u);
  if (it == table.end()) throw RootSystemError("unknown root system label '" + s + "'");
  return it->second;
}

int dot(const IVec& a, const IVec& b) {
  int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const IVec& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RootSystem RootSystem::build(Family f, int rank) {
  RootSystem rs;
  rs.init_from_gram(f, gram_for(f, rank));
  return rs;
}

RootSystem RootSystem::build(const std::string& label, int rank) {
  return build(family_from_string(label), rank);
}

std::string RootSystem::label() const { return to_string(family_) + std::to_string(n_); }

void RootSystem::init_from_gram(Family f, const RMat& gram) {
  family_ = f;
  n_ = static_cast<int>(gram.size());
  gram_ = gram;
  const int n = n_;

  cartan_.assign(n, IVec(n, 0));
  RMat cartan_r = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational a = Rational(2) * gram[i][j] / gram[j][j];
      cartan_[i][j] = to_int(a);
      cartan_r[i][j] = a;
    }
  cartan_inv_ = invert(cartan_r);
  gram_w_ = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram_w_[i][j] = cartan_inv_[i][j] * gram[j][j] / 2;

  auto make_root = [&](const IVec& w) {
    Root r;
    r.w = w;
    r.norm2 = inner(w, w);
    r.coroot.assign(n, 0);
    for (int j = 0; j < n; ++j) {
      Rational s(0);
      for (int k = 0; k < n; ++k) s += gram_w_[j][k] * Rational(w[k]);
      r.coroot[j] = to_int(Rational(2) * s / r.norm2);
    }
    return r;
  };

  // reflection closure of the simple roots of R0
  std::set<IVec> seen;
  std::deque<IVec> queue;
  for (int i = 0; i < n; ++i) {
    IVec a = cartan_[i];
    if (seen.insert(a).second) queue.push_back(a);
  }
  while (!queue.empty()) {
    IVec a = queue.front();
    queue.pop_front();
    for (int j = 0; j < n; ++j) {
      IVec b = a;
      const int c = a[j];
      for (int k = 0; k < n; ++k) b[k] -= c * cartan_[j][k];
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  std::set<IVec> all = seen;
  if (f == Family::BC) {
    // R1 adds the halves of the long roots 2 e_i
    for (const IVec& a : seen) {
      if (inner(a, a) == Rational(4)) {
        IVec h = a;
        for (int& x : h) x /= 2;
        all.insert(h);
      }
    }
  }

  simple_.clear();
  for (int i = 0; i < n; ++i) simple_.push_back(make_root(cartan_[i]));
  basis_.clear();
  for (int i = 0; i < n; ++i) basis_.push_back(cartan_[i]);
  if (f == Family::BC) {
    for (int& x : basis_[n - 1]) x /= 2;
  }
  RMat bm = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) bm[i][k] = basis_[i][k];
  basis_inv_ = invert(bm);

  roots_.clear();
  for (const IVec& a : all) {
    Root r = make_root(a);
    auto hc = row_times(a, basis_inv_);
    r.height.resize(n);
    bool pos = true, neg = true;
    for (int k = 0; k < n; ++k) {
      r.height[k] = to_int(hc[k]);
      if (r.height[k] < 0) pos = false;
      if (r.height[k] > 0) neg = false;
    }
    if (pos == neg) throw RootSystemError("root neither positive nor negative");
    r.positive = pos;
    IVec twice = a, half = a;
    for (int& x : twice) x *= 2;
    bool half_ok = true;
    for (int& x : half) {
      if (x % 2 != 0) half_ok = false;
      x /= 2;
    }
    r.in_r0 = all.count(twice) == 0;
    r.in_r1 = !(half_ok && all.count(half) > 0);
    roots_.push_back(r);
  }
  // deterministic order: positive first, by height then lexicographic
  std::sort(roots_.begin(), roots_.end(), [](const Root& x, const Root& y) {
    if (x.positive != y.positive) return x.positive;
    int hx = 0, hy = 0;
    for (int v : x.height) hx += v;
    for (int v : y.height) hy += v;
    if (x.positive ? hx != hy : hx != hy) return x.positive ? hx < hy : hx > hy;
    return x.w < y.w;
  });

  if (f == Family::BC) {
    long_r1_ = Rational(2);
  } else {
    long_r1_ = Rational(0);
    for (const Root& r : roots_) long_r1_ = std::max(long_r1_, r.norm2);
  }
}

std::vector<Root> RootSystem::positive_roots() const {
  std::vector<Root> out;
  for (const Root& r : roots_)
    if (r.positive) out.push_back(r);
  return out;
}

std::vector<Root> RootSystem::positive_r0() const {
  std::vector<Root> out;
  for (const Root& r : roots_)
    if (r.positive && r.in_r0) out.push_back(r);
  return out;
}

std::vector<Root> RootSystem::positive_r1() const {
  std::vector<Root> out;
  for (const Root& r : roots_)
    if (r.positive && r.in_r1) out.push_back(r);
  return out;
}

bool RootSystem::simply_laced() const {
  for (const Root& r : roots_)
    if (r.norm2 != roots_.front().norm2) return false;
  return true;
}

bool RootSystem::is_short(const Root& a) const {
  if (simply_laced()) return true;
  Rational m = roots_.front().norm2;
  for (const Root& r : roots_) m = std::min(m, r.norm2);
  return a.norm2 == m;
}

IVec RootSystem::fundamental_weight(int r) const {
  if (r < 1 || r > n_) throw RootSystemError("fundamental weight index out of range");
  IVec w(n_, 0);
  w[r - 1] = 1;
  return w;
}

int RootSystem::pair_coroot(const IVec& lambda, const Root& a) const { return dot(lambda, a.coroot); }

Rational RootSystem::inner(const IVec& a, const IVec& b) const {
  Rational s(0);
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j)
      if (b[j] != 0) s += Rational(a[i]) * gram_w_[i][j] * Rational(b[j]);
  }
  return s;
}

std::optional<std::vector<long long>> RootSystem::cone_coordinates(const IVec& lambda) const {
  auto c = row_times(lambda, basis_inv_);
  std::vector<long long> out(n_);
  for (int k = 0; k < n_; ++k) {
    if (c[k].denominator() != 1) return std::nullopt;
    out[k] = c[k].numerator();
  }
  return out;
}

Rational RootSystem::height(const IVec& lambda) const {
  auto c = row_times(lambda, basis_inv_);
  Rational s(0);
  for (const Rational& x : c) s += x;
  return s;
}

bool RootSystem::is_dominant(const IVec& lambda) const {
  return std::all_of(lambda.begin(), lambda.end(), [](int x) { return x >= 0; });
}

bool RootSystem::dominance_leq(const IVec& mu, const IVec& lambda) const {
  IVec d(n_);
  for (int i = 0; i < n_; ++i) d[i] = lambda[i] - mu[i];
  auto c = cone_coordinates(d);
  if (!c) return false;
  return std::all_of(c->begin(), c->end(), [](long long x) { return x >= 0; });
}

IVec RootSystem::reflect(const IVec& lambda, int j) const {
  IVec out = lambda;
  const int c = lambda[j];
  for (int k = 0; k < n_; ++k) out[k] -= c * cartan_[j][k];
  return out;
}

std::vector<double> RootSystem::reflect_spectral(const std::vector<double>& x, int j) const {
  std::vector<double> out = x;
  out[j] -= dot(cartan_[j], x);
  return out;
}

std::vector<IVec> RootSystem::weyl_orbit(const IVec& lambda) const {
  std::set<IVec> seen{lambda};
  std::deque<IVec> queue{lambda};
  while (!queue.empty()) {
    IVec a = queue.front();
    queue.pop_front();
    for (int j = 0; j < n_; ++j) {
      if (a[j] == 0) continue;
      IVec b = reflect(a, j);
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  return {seen.begin(), seen.end()};
}

DominantRep RootSystem::dominant_representative(const IVec& mu) const {
  DominantRep out;
  out.lambda = mu;
  for (;;) {
    int j = -1;
    for (int k = 0; k < n_; ++k)
      if (out.lambda[k] < 0) {
        j = k;
        break;
      }
    if (j < 0) break;
    out.lambda = reflect(out.lambda, j);
    out.word.push_back(j);
    out.sign = -out.sign;
  }
  out.stabilizer_trivial = std::all_of(out.lambda.begin(), out.lambda.end(), [](int x) { return x > 0; });
  return out;
}

std::vector<IVec> RootSystem::minuscule_weights() const {
  std::vector<IVec> out;
  for (int r = 1; r <= n_; ++r) {
    IVec w = fundamental_weight(r);
    bool ok = true;
    for (const Root& a : roots_)
      if (a.positive && pair_coroot(w, a) > 1) ok = false;
    if (ok) out.push_back(w);
  }
  return out;
}

IVec RootSystem::quasi_minuscule_weight() const {
  const Root* best = nullptr;
  for (const Root& a : roots_) {
    if (!a.positive || !is_dominant(a.w)) continue;
    if (!best || a.norm2 < best->norm2) best = &a;
  }
  return best->w;
}

WeylElement RootSystem::identity() const {
  WeylElement e;
  e.on_weights.assign(n_, IVec(n_, 0));
  e.on_spectral.assign(n_, IVec(n_, 0));
  for (int i = 0; i < n_; ++i) e.on_weights[i][i] = e.on_spectral[i][i] = 1;
  return e;
}

namespace {

// s_j o w on both representations
WeylElement left_multiply(const WeylElement& w, int j, const IMat& cartan) {
  const int n = static_cast<int>(cartan.size());
  WeylElement out = w;
  out.word.insert(out.word.begin(), j);
  out.sign = -w.sign;
  // weights: S_j = I - alpha_j e_j^T, so row k of S_j M = M_k - alpha_j[k] M_j
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c) out.on_weights[k][c] = w.on_weights[k][c] - cartan[j][k] * w.on_weights[j][c];
  // spectral: T_j = I - e_j alpha_j^T, only row j changes
  for (int c = 0; c < n; ++c) {
    int s = 0;
    for (int k = 0; k < n; ++k) s += cartan[j][k] * w.on_spectral[k][c];
    out.on_spectral[j][c] = w.on_spectral[j][c] - s;
  }
  return out;
}

}  // namespace

WeylElement RootSystem::element_from_word(const std::vector<int>& word) const {
  WeylElement e = identity();
  for (auto it = word.rbegin(); it != word.rend(); ++it) e = left_multiply(e, *it, cartan_);
  return e;
}

WeylElement RootSystem::longest_element() const {
  IVec m = rho();
  for (int& x : m) x = -x;
  DominantRep d = dominant_representative(m);
  std::vector<int> word(d.word.rbegin(), d.word.rend());
  return element_from_word(word);
}

bool RootSystem::minus_one_in_W() const {
  WeylElement w0 = longest_element();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (w0.on_weights[i][j] != (i == j ? -1 : 0)) return false;
  return true;
}

long long RootSystem::weyl_order_formula() const {
  auto fact = [](int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  switch (family_) {
    case Family::A: return fact(n_ + 1);
    case Family::B:
    case Family::C:
    case Family::BC: return (1LL << n_) * fact(n_);
    case Family::D: return (1LL << (n_ - 1)) * fact(n_);
    case Family::E: return n_ == 6 ? 51840LL : n_ == 7 ? 2903040LL : 696729600LL;
    case Family::F: return 1152;
    case Family::G: return 12;
  }
  return 0;
}

const std::vector<WeylElement>& RootSystem::weyl_group(long long max_order) const {
  const long long order = weyl_order_formula();
  if (order > max_order)
    throw BudgetExceeded("Weyl group of " + label() + " has order " + std::to_string(order) +
                             ", above the enumeration budget " + std::to_string(max_order),
                         order);
  std::call_once(group_->once, [&] {
    std::map<IMat, size_t> index;
    std::vector<WeylElement>& el = group_->elements;
    el.push_back(identity());
    index[el.back().on_weights] = 0;
    for (size_t head = 0; head < el.size(); ++head) {
      for (int j = 0; j < n_; ++j) {
        WeylElement w = left_multiply(el[head], j, cartan_);
        if (index.count(w.on_weights)) continue;
        index[w.on_weights] = el.size();
        el.push_back(std::move(w));
      }
    }
  });
  return group_->elements;
}

std::vector<double> RootSystem::simple_root_coords_to_weights(const std::vector<double>& c) const {
  std::vector<double> w(n_, 0.0);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) w[i] += c[k] * cartan_[k][i];
  return w;
}

std::vector<double> RootSystem::weights_to_simple_root_coords(const std::vector<double>& w) const {
  std::vector<double> c(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) c[k] += w[i] * boost::rational_cast<double>(cartan_inv_[i][k]);
  return c;
}

std::vector<double> RootSystem::weights_to_spectral(const std::vector<double>& w) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) y[i] += boost::rational_cast<double>(gram_w_[i][k]) * w[k];
  return y;
}

RootSystem RootSystem::dual() const {
  if (!reduced()) throw RootSystemError("dual system requested for a nonreduced root system");
  const int n = n_;
  RMat g = zeros(n);
  Rational mx(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g[i][j] = Rational(4) * gram_[i][j] / (gram_[i][i] * gram_[j][j]);
      mx = std::max(mx, g[i][j]);
    }
  for (auto& row : g)
    for (auto& x : row) x = x * Rational(2) / mx;
  Family f = family_;
  if (f == Family::B) f = Family::C;
  else if (f == Family::C) f = Family::B;
  RootSystem rs;
  rs.init_from_gram(f, g);
  return rs;
}

}  // namespace rootscat
