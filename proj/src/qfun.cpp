#include "rootscat/qfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rootscat {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw CFunctionError("q must lie in (0, 1)");
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

cplx qpochhammer_inf(cplx z, double q, double tol) {
  check_q(q);
  const double az = std::abs(z);
  cplx p = 1.0;
  double qn = 1.0;
  for (int n = 0; n < 100000; ++n) {
    p *= 1.0 - z * qn;
    qn *= q;
    if (az * qn / (1.0 - q) < tol) break;
  }
  return p;
}

cplx qpochhammer(cplx a, double q, int n) {
  cplx p = 1.0;
  double qk = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= 1.0 - a * qk;
    qk *= q;
  }
  return p;
}

CFunction CFunction::unit() {
  CFunction c;
  c.kind_ = Kind::Unit;
  c.radius_ = std::numeric_limits<double>::infinity();
  return c;
}

CFunction CFunction::macdonald(double g, double q) {
  check_q(q);
  if (!(g > 0)) throw CFunctionError("Macdonald c-function needs g > 0");
  CFunction c;
  c.kind_ = Kind::Macdonald;
  c.q_ = q;
  c.g_ = g;
  c.certify({g, 1.0});
  return c;
}

CFunction CFunction::koornwinder_long(double ghat, double q) {
  CFunction c = macdonald(ghat, q);
  c.kind_ = Kind::KoornwinderLong;
  return c;
}

CFunction CFunction::koornwinder_short(const std::array<double, 4>& ghat, double q) {
  check_q(q);
  for (double x : ghat)
    if (!(x > 0)) throw CFunctionError("Koornwinder c-function needs positive parameters");
  CFunction c;
  c.kind_ = Kind::KoornwinderShort;
  c.q_ = q;
  c.g4_ = ghat;
  c.certify({ghat[0], ghat[1], ghat[2] + 0.5, ghat[3] + 0.5, 0.5});
  return c;
}

void CFunction::certify(const std::vector<double>& exponents) {
  // geometric midpoint towards the nearest zero or pole, then shrink
  double e = *std::min_element(exponents.begin(), exponents.end());
  radius_ = std::pow(q_, -e / 2.0);
  for (int it = 0; it < 60 && min_modulus_on_circle(radius_) <= 1e-6; ++it) radius_ = 1.0 + (radius_ - 1.0) / 2.0;
}

cplx CFunction::eval_unchecked(cplx z) const {
  switch (kind_) {
    case Kind::Unit:
      return 1.0;
    case Kind::Macdonald:
    case Kind::KoornwinderLong:
      return qpochhammer_inf(std::pow(q_, g_) * z, q_) / qpochhammer_inf(q_ * z, q_);
    case Kind::KoornwinderShort: {
      const double sq = std::sqrt(q_);
      cplx num = qpochhammer_inf(std::pow(q_, g4_[0]) * z, q_) * qpochhammer_inf(-std::pow(q_, g4_[1]) * z, q_) *
                 qpochhammer_inf(std::pow(q_, g4_[2]) * sq * z, q_) *
                 qpochhammer_inf(-std::pow(q_, g4_[3]) * sq * z, q_);
      return num / qpochhammer_inf(q_ * z * z, q_);
    }
  }
  return 1.0;
}

cplx CFunction::operator()(cplx z) const {
  if (std::abs(z) > radius_ * (1.0 + 1e-12)) throw CFunctionError("c-function evaluated outside its certified disc");
  return eval_unchecked(z);
}

double CFunction::min_modulus_on_circle(double r, int n) const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) m = std::min(m, std::abs(eval_unchecked(std::polar(r, 2 * kPi * j / n))));
  return m;
}

std::vector<double> CFunction::taylor(int M) const {
  std::vector<double> a(M + 1, 0.0);
  if (M < 0) return {};
  a[0] = 1.0;
  if (kind_ == Kind::Unit) return a;
  const double r0 = std::min(1.1, (1.0 + radius_) / 2.0);
  auto transform = [&](int P) {
    std::vector<cplx> f(P);
    for (int j = 0; j < P; ++j) f[j] = eval_unchecked(std::polar(r0, 2 * kPi * j / P));
    std::vector<double> out(M + 1);
    for (int k = 0; k <= M; ++k) {
      cplx s = 0;
      for (int j = 0; j < P; ++j) s += f[j] * std::polar(1.0, -2 * kPi * double((long long)j * k % P) / P);
      out[k] = s.real() / P / std::pow(r0, k);
    }
    return out;
  };
  int P = 64;
  while (P < 4 * (M + 1)) P *= 2;
  std::vector<double> prev = transform(P);
  for (; P < (1 << 16); ) {
    P *= 2;
    std::vector<double> next = transform(P);
    double d = 0;
    for (int k = 0; k <= M; ++k) d = std::max(d, std::abs(next[k] - prev[k]));
    prev = std::move(next);
    if (d < 1e-15) break;
  }
  return prev;
}

cplx shat(const CFunction& c, double theta) {
  return c.eval_unchecked(std::polar(1.0, -theta)) / c.eval_unchecked(std::polar(1.0, theta));
}

cplx shat_sqrt(const CFunction& c, double theta) {
  cplx u = c.eval_unchecked(std::polar(1.0, -theta));
  return u / std::abs(u);
}

}  // namespace rootscat
