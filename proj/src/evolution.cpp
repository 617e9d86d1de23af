#include "rootscat/evolution.hpp"

#include "rootscat/parallel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <set>

namespace rootscat {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<double> mul(const IMat& m, const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

// corners of the box [lo, hi]
std::vector<std::vector<double>> corners(const std::vector<double>& lo, const std::vector<double>& hi) {
  const std::size_t n = lo.size();
  std::vector<std::vector<double>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i & 1) ? hi[i] : lo[i];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::size_t> nonzero(const SpectralFunction& f) {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < f.v.size(); ++k)
    if (f.v[k] != 0.0) s.push_back(k);
  return s;
}

void check_depth(const WaveTable& table, const std::vector<IVec>& window) {
  for (const auto& l : window)
    if (!table.contains(l)) throw InsufficientDepth("wave table does not cover the packet window");
}

}  // namespace

WavePacket::WavePacket(const ScatteringContext& ctx, WavePacketSpec spec) : ctx_(ctx), spec_(std::move(spec)) {
  const auto& rs = ctx_.root_system();
  const int n = rs.rank();
  if (static_cast<int>(spec_.center.size()) != n) throw std::invalid_argument("packet center has the wrong rank");
  if (!(spec_.radius > 0 && spec_.radius < std::numbers::pi)) throw std::invalid_argument("packet radius out of range");
  if (spec_.smoothness < 1) throw std::invalid_argument("packet smoothness must be positive");
  if (spec_.M0 <= 0) spec_.M0 = n == 1 ? 512 : 256;
  try {
    w_hat_ = ctx_.w_hat(spec_.center);
  } catch (const NotRegular&) {
    throw std::invalid_argument("packet center is not in the regular sector");
  }
  // sample the support for the component check and the velocity range
  const int per_axis = n == 1 ? 257 : (n == 2 ? 65 : 25);
  v_lo_.assign(n, 1e300);
  v_hi_.assign(n, -1e300);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> x(n);
    std::size_t r = k;
    double d2 = 0;
    for (int i = 0; i < n; ++i) {
      double u = -1.0 + 2.0 * static_cast<double>(r % per_axis) / (per_axis - 1);
      r /= per_axis;
      x[i] = spec_.center[i] + spec_.radius * u;
      d2 += u * u;
    }
    if (d2 >= 1.0) continue;
    if (!ctx_.is_regular(x) || ctx_.w_hat(x).on_weights != w_hat_.on_weights)
      throw std::invalid_argument("packet support leaves the component of the regular sector");
    auto g = ctx_.grad(x);
    for (int i = 0; i < n; ++i) {
      v_lo_[i] = std::min(v_lo_[i], g[i]);
      v_hi_[i] = std::max(v_hi_[i], g[i]);
      vmax_ = std::max(vmax_, std::abs(g[i]));
    }
  }
  double pad = spec_.velocity_margin * vmax_;
  for (int i = 0; i < n; ++i) {
    v_lo_[i] -= pad;
    v_hi_[i] += pad;
  }
  eps_ = 1e300;
  for (const auto& z : corners(v_lo_, v_hi_)) {
    auto wz = mul(w_hat_.on_weights, z);
    for (double c : wz) eps_ = std::min(eps_, c);
  }
  if (!(eps_ > 0)) throw std::invalid_argument("velocity window touches a chamber wall");
  amp_ = 1.0;
  amp_ = 1.0 / spectral_norm(rs, phi_hat(2 * spec_.M0));
}

double WavePacket::bump(const std::vector<double>& x) const {
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = std::remainder(x[i] - spec_.center[i], kTwoPi);
    d2 += d * d;
  }
  double u = std::sqrt(d2) / spec_.radius;
  if (u >= 1.0) return 0.0;
  if (u <= 0.5) return amp_;
  const double a = spec_.smoothness + 1;
  return amp_ * (1.0 - boost::math::ibeta(a, a, 2.0 * u - 1.0));
}

SpectralFunction WavePacket::phi_hat(int M) const {
  const auto& rs = root_system();
  const auto& W = rs.weyl_group();
  return SpectralFunction::sample(rs.rank(), M, [&](const std::vector<double>& x) {
    double s = 0;
    for (const auto& w : W) s += w.sign * bump(mul(w.on_spectral, x));
    return cplx(s, 0.0);
  });
}

SpectralFunction WavePacket::evolved(double t, int M) const {
  auto f = phi_hat(M);
  QuadratureGrid g(root_system().rank(), M);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (f.v[k] != 0.0) f.v[k] *= std::exp(cplx(0, -t * ctx_.E(g.point(k))));
  return f;
}

int WavePacket::grid_size(double t) const {
  int M = spec_.M0;
  while (M < 8.0 * std::abs(t) * vmax_) M *= 2;
  return M;
}

WeylElement WavePacket::direction(double t) const {
  if (t >= 0) return w_hat_;
  const auto& rs = root_system();
  auto w0 = rs.longest_element();
  std::vector<int> word = w0.word;
  word.insert(word.end(), w_hat_.word.begin(), w_hat_.word.end());
  return rs.element_from_word(word);
}

std::vector<IVec> WavePacket::window(double t) const {
  const auto& rs = root_system();
  auto f = evolved(t, grid_size(t));
  double leak = 1.0;
  for (int m = spec_.window_margin; m <= spec_.max_window_margin; m *= 2) {
    auto w = window(t, m);
    leak = leakage(rs, f, fourier0_inverse(rs, f, w, 1.0));
    if (leak <= 0.1 * spec_.leak_tol) return w;
    if (m == 0) m = 1;
  }
  throw LeakageError("packet window: margin budget exhausted", leak);
}

std::vector<IVec> WavePacket::window(double t, int margin) const {
  const int n = root_system().rank();
  std::vector<double> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    double c = 0.5 * (v_lo_[i] + v_hi_[i]), h = 0.5 * (v_hi_[i] - v_lo_[i]) * (1.0 + spec_.window_inflation);
    lo[i] = c - h;
    hi[i] = c + h;
  }
  auto u = direction(t);
  std::vector<double> blo(n, 1e300), bhi(n, -1e300);
  for (const auto& z : corners(lo, hi)) {
    auto y = mul(u.on_weights, z);
    for (int i = 0; i < n; ++i) {
      blo[i] = std::min(blo[i], t * y[i]);
      bhi[i] = std::max(bhi[i], t * y[i]);
    }
  }
  IVec a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::max(1, static_cast<int>(std::ceil(blo[i] - margin)));
    b[i] = static_cast<int>(std::floor(bhi[i] + margin));
    if (b[i] < a[i]) return {};
  }
  std::vector<IVec> out;
  IVec mu = a;
  while (true) {
    IVec lambda = mu;
    for (auto& x : lambda) x -= 1;
    out.push_back(lambda);
    int i = 0;
    while (i < n && ++mu[i] > b[i]) mu[i] = a[i], ++i;
    if (i == n) break;
  }
  return out;
}

bool WavePacket::in_classical_support(const IVec& lambda, double t) const {
  if (t == 0) throw std::invalid_argument("classical support needs t != 0");
  auto u = direction(t);
  std::vector<int> rev(u.word.rbegin(), u.word.rend());
  auto inv = root_system().element_from_word(rev);
  std::vector<double> m(lambda.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = (lambda[i] + 1) / t;
  auto z = mul(inv.on_weights, m);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(z[i] > v_lo_[i] && z[i] < v_hi_[i])) return false;
  return true;
}

WavePacket WavePacket::reflected() const {
  WavePacketSpec s = spec_;
  for (auto& c : s.center) c = -c;
  return WavePacket(ctx_, s);
}

LatticeFunction free_packet(const WavePacket& packet, double t, std::vector<IVec> window) {
  if (window.empty()) window = packet.window(t);
  auto f = packet.evolved(t, packet.grid_size(t));
  return fourier0_inverse(packet.root_system(), f, window, packet.spec().leak_tol);
}

LatticeFunction interacting_packet(const WavePacket& packet, int sign, double t, const WaveTable& table,
                                   std::vector<IVec> window) {
  if (window.empty()) window = packet.window(t);
  check_depth(table, window);
  auto f = smatrix_apply(packet.evolved(t, packet.grid_size(t)), sign > 0 ? -0.5 : 0.5, packet.context());
  return fourier_inverse(table, f, window, packet.spec().leak_tol);
}

LatticeFunction asymptotic_packet(const WavePacket& packet, int sign, double t, std::vector<IVec> window) {
  if (window.empty()) window = packet.window(t);
  const auto& rs = packet.root_system();
  const auto& ctx = packet.context();
  const auto& W = rs.weyl_group();
  auto f = smatrix_apply(packet.evolved(t, packet.grid_size(t)), sign > 0 ? -0.5 : 0.5, ctx);
  auto S = nonzero(f);
  QuadratureGrid g(rs.rank(), f.M);
  // per support point and w: (-1)^w S_w^{1/2}(xi) and w xi
  std::vector<std::vector<cplx>> amp(S.size(), std::vector<cplx>(W.size()));
  std::vector<std::vector<std::vector<double>>> wx(S.size());
  parallel_for(S.size(), [&](std::size_t i) {
    auto x = g.point(S[i]);
    wx[i].resize(W.size());
    for (std::size_t j = 0; j < W.size(); ++j) {
      amp[i][j] = static_cast<double>(W[j].sign) * S_w_sqrt(rs, ctx.spec(), W[j], x).value * f.v[S[i]];
      wx[i][j] = mul(W[j].on_spectral, x);
    }
  });
  const double scale = 1.0 / static_cast<double>(rs.weyl_order_formula()) / static_cast<double>(g.size());
  std::vector<cplx> vals(window.size());
  parallel_for(window.size(), [&](std::size_t s) {
    IVec m = window[s];
    for (auto& x : m) x += 1;
    std::vector<cplx> terms(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      cplx acc = 0;
      for (std::size_t j = 0; j < W.size(); ++j) acc += amp[i][j] * std::exp(cplx(0, dot(m, wx[i][j])));
      terms[i] = acc;
    }
    vals[s] = pairwise_sum(terms) * scale;
  });
  LatticeFunction out;
  for (std::size_t s = 0; s < window.size(); ++s) out.set(window[s], vals[s]);
  return out;
}

std::vector<IVec> classical_support(const WavePacket& packet, double t) {
  std::vector<IVec> out;
  for (const auto& l : packet.window(t, 0))
    if (packet.in_classical_support(l, t)) out.push_back(l);
  return out;
}

LatticeFunction classical_packet(const WavePacket& packet, double t) {
  if (t == 0) throw std::invalid_argument("classical packet needs t != 0");
  const auto& rs = packet.root_system();
  const int M = packet.grid_size(t);
  QuadratureGrid g(rs.rank(), M);
  auto u = packet.direction(t);
  std::vector<std::size_t> S;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (packet.bump(g.point(k)) != 0.0) S.push_back(k);
  std::vector<cplx> b(S.size());
  std::vector<std::vector<double>> ux(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    auto x = g.point(S[i]);
    b[i] = packet.bump(x) * std::exp(cplx(0, -t * packet.context().E(x)));
    ux[i] = mul(u.on_spectral, x);
  }
  auto support = classical_support(packet, t);
  std::vector<cplx> vals(support.size());
  const double scale = u.sign / static_cast<double>(g.size());
  parallel_for(support.size(), [&](std::size_t s) {
    IVec m = support[s];
    for (auto& x : m) x += 1;
    std::vector<cplx> terms(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) terms[i] = b[i] * std::exp(cplx(0, dot(m, ux[i])));
    vals[s] = pairwise_sum(terms) * scale;
  });
  LatticeFunction out;
  for (std::size_t s = 0; s < support.size(); ++s) out.set(support[s], vals[s]);
  return out;
}

LatticeFunction classical_projection(const LatticeFunction& phi, const WavePacket& packet, double t) {
  LatticeFunction out;
  for (const auto& [l, c] : phi.values())
    if (packet.in_classical_support(l, t)) out.set(l, c);
  return out;
}

std::vector<IVec> wave_table_weights(const WavePacket& packet, const std::vector<double>& times) {
  const auto& rs = packet.root_system();
  std::set<IVec> need;
  for (double t : times)
    for (const auto& l : packet.window(t)) need.insert(l);
  long long h = 0;
  for (const auto& l : need) h = std::max(h, static_cast<long long>(std::ceil(boost::rational_cast<double>(rs.height(l)))));
  std::vector<IVec> ws;
  while (true) {
    ws = weights_up_to_height(rs, h);
    std::set<IVec> have(ws.begin(), ws.end());
    if (std::includes(have.begin(), have.end(), need.begin(), need.end())) break;
    ++h;
  }
  return ws;
}

int wave_table_budget(const RootSystem& rs) { return rs.rank() == 1 ? 16384 : 4096; }

WaveTable wave_table_for(const WavePacket& packet, const std::vector<double>& times) {
  const auto& rs = packet.root_system();
  return WaveTable(rs, packet.context().spec(), wave_table_weights(packet, times), wave_table_budget(rs));
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& norms, double floor) {
  std::vector<double> lt, at, ly;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (norms[i] > floor && t[i] != 0) {
      lt.push_back(std::log(std::abs(t[i])));
      at.push_back(std::abs(t[i]));
      ly.push_back(std::log(norms[i]));
    }
  DecayFit d;
  d.points = ly.size();
  if (ly.size() < 2) return d;
  d.power = linear_fit(lt, ly);
  d.exponential = linear_fit(at, ly);
  auto aic = [&](const LinearFit& f, const std::vector<double>& x) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = ly[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    const double n = static_cast<double>(x.size());
    return n * std::log(std::max(rss, 1e-300) / n) + 4.0;
  };
  d.aic_power = aic(d.power, lt);
  d.aic_exponential = aic(d.exponential, at);
  return d;
}

EvolutionReport run_scattering_diagnostic(const WavePacket& packet, int sign, const std::vector<double>& ladder,
                                          const WaveTable* table) {
  const auto& rs = packet.root_system();
  EvolutionReport rep;
  rep.system = rs.label();
  rep.sign = sign > 0 ? 1 : -1;
  std::vector<double> times;
  for (double t : ladder) times.push_back(rep.sign * std::abs(t));
  try {
    std::optional<WaveTable> own;
    if (!table) {
      own.emplace(rs, packet.context().spec(), wave_table_weights(packet, times), wave_table_budget(rs));
      table = &*own;
    }
    for (double t : times) {
      EvolutionRow row;
      row.t = t;
      row.M = packet.grid_size(t);
      auto window = packet.window(t);
      row.window = window.size();
      auto f = packet.evolved(t, row.M);
      auto phi0 = free_packet(packet, t, window);
      auto phis = interacting_packet(packet, sign, t, *table, window);
      auto phiinf = asymptotic_packet(packet, sign, t, window);
      auto clas = classical_packet(packet, t);
      row.leakage_free = leakage(rs, f, phi0);
      row.leakage_interacting = leakage(rs, smatrix_apply(f, sign > 0 ? -0.5 : 0.5, packet.context()), phis);
      row.norm_free = phi0.norm();
      row.norm_interacting = phis.norm();
      row.norm_asymptotic = phiinf.norm();
      row.int_free = (phis - phi0).norm();
      row.free_clas = (phi0 - clas).norm();
      row.asym_clas = (phiinf - clas).norm();
      row.int_asym = (phis - phiinf).norm();
      row.int_asym_projected = classical_projection(phis - phiinf, packet, t).norm();
      row.free_outside = (phi0 - classical_projection(phi0, packet, t)).norm();
      rep.rows.push_back(row);
    }
  } catch (const LeakageError& e) {
    rep.valid = false;
    rep.error = e.what();
  } catch (const InsufficientDepth& e) {
    rep.valid = false;
    rep.error = e.what();
  }
  std::vector<double> ts, tot, fc, ac, pr, out;
  for (const auto& r : rep.rows) {
    ts.push_back(r.t);
    tot.push_back(r.int_free);
    fc.push_back(r.free_clas);
    ac.push_back(r.asym_clas);
    pr.push_back(r.int_asym_projected);
    out.push_back(r.free_outside);
  }
  rep.total = fit_decay(ts, tot);
  rep.free_clas = fit_decay(ts, fc);
  rep.asym_clas = fit_decay(ts, ac);
  rep.projected = fit_decay(ts, pr);
  rep.outside = fit_decay(ts, out);
  rep.decreasing = rep.rows.size() >= 2;
  rep.telescope = true;
  rep.unitary = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    if (i > 0 && !(r.int_free < rep.rows[i - 1].int_free)) rep.decreasing = false;
    if (r.int_free > r.int_asym + r.asym_clas + r.free_clas + 1e-12) rep.telescope = false;
    if (std::abs(r.norm_free - 1.0) > 1e-6 || std::abs(r.norm_interacting - 1.0) > 1e-6) rep.unitary = false;
  }
  rep.success = rep.valid && rep.decreasing && rep.total.points >= 2 && rep.total.power.slope <= -1.0 && rep.unitary;
  return rep;
}

namespace {

nlohmann::json fit_json(const DecayFit& f) {
  return {{"points", f.points},
          {"power_exponent", f.power.slope},
          {"power_r2", f.power.r2},
          {"exponential_rate", f.exponential.slope},
          {"exponential_r2", f.exponential.r2},
          {"aic_power", f.aic_power},
          {"aic_exponential", f.aic_exponential}};
}

}  // namespace

void write_json(std::ostream& os, const EvolutionReport& r) {
  nlohmann::json j;
  j["system"] = r.system;
  j["sign"] = r.sign;
  j["valid"] = r.valid;
  j["success"] = r.success;
  j["decreasing"] = r.decreasing;
  j["telescope"] = r.telescope;
  j["unitary"] = r.unitary;
  if (!r.error.empty()) j["error"] = r.error;
  j["fits"] = {{"total", fit_json(r.total)},
               {"free_classical", fit_json(r.free_clas)},
               {"asymptotic_classical", fit_json(r.asym_clas)},
               {"projected_interacting_asymptotic", fit_json(r.projected)},
               {"free_outside_classical", fit_json(r.outside)}};
  j["rows"] = nlohmann::json::array();
  for (const auto& w : r.rows)
    j["rows"].push_back({{"t", w.t},
                         {"M", w.M},
                         {"window", w.window},
                         {"norm_free", w.norm_free},
                         {"norm_interacting", w.norm_interacting},
                         {"norm_asymptotic", w.norm_asymptotic},
                         {"interacting_free", w.int_free},
                         {"free_classical", w.free_clas},
                         {"asymptotic_classical", w.asym_clas},
                         {"interacting_asymptotic", w.int_asym},
                         {"projected_interacting_asymptotic", w.int_asym_projected},
                         {"free_outside_classical", w.free_outside},
                         {"leakage_free", w.leakage_free},
                         {"leakage_interacting", w.leakage_interacting}});
  os << j.dump(2) << '\n';
}

void write_csv(std::ostream& os, const EvolutionReport& r) {
  os << "t,M,window,norm_free,norm_interacting,norm_asymptotic,interacting_free,free_classical,"
        "asymptotic_classical,interacting_asymptotic,projected_interacting_asymptotic,free_outside_classical,"
        "leakage_free,leakage_interacting\n";
  os.precision(17);
  for (const auto& w : r.rows)
    os << w.t << ',' << w.M << ',' << w.window << ',' << w.norm_free << ',' << w.norm_interacting << ','
       << w.norm_asymptotic << ',' << w.int_free << ',' << w.free_clas << ',' << w.asym_clas << ',' << w.int_asym
       << ',' << w.int_asym_projected << ',' << w.free_outside << ',' << w.leakage_free << ','
       << w.leakage_interacting << '\n';
}

}  // namespace rootscat
