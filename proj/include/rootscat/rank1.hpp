#pragma once
// Rank-one oracle: Askey-Wilson polynomials, the tridiagonal Laplacians and
// the scalar scattering phase, written out in one variable without the
// general root-system machinery.

#include "rootscat/rootsys.hpp"

#include <array>
#include <complex>
#include <vector>

namespace rootscat::rank1 {

using cplx = std::complex<double>;

struct Params {
  double s = 1.0;
  std::array<double, 4> ghat{1, 1, 1, 1};

  // A1 with parameter g: all four hatted parameters equal g / 2
  static Params a1(double g, double s);
  double q() const;
  std::array<double, 4> g() const;  // dual parameters
};

std::array<double, 4> dual_params(const std::array<double, 4>& v);
std::array<Rational, 4> dual_params(const std::array<Rational, 4>& v);

// c(xi) built on e^{-i xi}
cplx c_hat(cplx xi, const Params& p);
double c_plus(double x, const Params& p);
double c_minus(double x, const Params& p);
double N0(const Params& p);
double Delta(int l, const Params& p);
double weight(double xi, const Params& p);  // 1 / |c(xi)|^2

// terminating 4phi3; throws std::domain_error on a vanishing lower Pochhammer
cplx askey_wilson(int l, cplx xi, const Params& p);
// same polynomials from the three-term recurrence
std::vector<cplx> askey_wilson_recurrence(int lmax, cplx xi, const Params& p);

double wave(int l, double xi, const Params& p);
// Psi_0 .. Psi_lmax from the three-term recurrence
std::vector<double> waves(int lmax, double xi, const Params& p);
cplx asymptotic(int l, double xi, const Params& p);
double free_wave(int l, double xi);  // 2 sin((l+1) xi)

double V(double x, const Params& p);
// (L phi)_l for l = 0..phi.size(), phi_l = 0 beyond the given range
std::vector<double> laplacian(const std::vector<double>& phi, const Params& p);
std::vector<double> free_laplacian(const std::vector<double>& phi);

cplx shat(double xi, const Params& p);          // c(xi) / c(-xi)
cplx shat_sqrt(double xi, const Params& p);     // c(xi) / |c(xi)|
cplx smatrix(double xi, const Params& p);       // c(-xi) / c(xi)

}  // namespace rootscat::rank1
