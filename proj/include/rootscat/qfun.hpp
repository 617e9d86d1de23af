#pragma once
// One-variable c-functions built from q-Pochhammer symbols.

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace rootscat {

using cplx = std::complex<double>;

class CFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// (z; q)_infinity, truncated once |z| q^{K+1} / (1 - q) < tol
cplx qpochhammer_inf(cplx z, double q, double tol = 1e-17);
// finite product (a; q)_n
cplx qpochhammer(cplx a, double q, int n);

class CFunction {
 public:
  enum class Kind { Unit, Macdonald, KoornwinderLong, KoornwinderShort };

  static CFunction unit();
  // (q^g z; q) / (q z; q)
  static CFunction macdonald(double g, double q);
  // same form as macdonald, parameter ghat
  static CFunction koornwinder_long(double ghat, double q);
  // (q^g0 z, -q^g1 z, q^{g2+1/2} z, -q^{g3+1/2} z; q) / (q z^2; q)
  static CFunction koornwinder_short(const std::array<double, 4>& ghat, double q);

  Kind kind() const { return kind_; }
  double q() const { return q_; }
  double g() const { return g_; }
  const std::array<double, 4>& g4() const { return g4_; }
  bool is_unit() const { return kind_ == Kind::Unit; }

  double radius() const { return radius_; }
  // throws CFunctionError for |z| > radius()
  cplx operator()(cplx z) const;
  // evaluation without the disc check (used on the unit circle)
  cplx eval_unchecked(cplx z) const;

  // Taylor coefficients a_0..a_M from a discrete Fourier transform on |z| = r0
  std::vector<double> taylor(int M) const;

  // min |c(z)| over n points on |z| = r
  double min_modulus_on_circle(double r, int n = 4096) const;

 private:
  Kind kind_ = Kind::Unit;
  double q_ = 0.5;
  double g_ = 1.0;
  std::array<double, 4> g4_{0.5, 0.5, 0.5, 0.5};
  double radius_ = 1e300;
  void certify(const std::vector<double>& exponents);
};

// c(e^{-i theta}) / c(e^{i theta})
cplx shat(const CFunction& c, double theta);
// phase of c(e^{-i theta}); squares to shat
cplx shat_sqrt(const CFunction& c, double theta);

}  // namespace rootscat
