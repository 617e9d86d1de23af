#pragma once
// Orthonormal polynomials by Gram-Schmidt, Macdonald and Koornwinder
// normalizations, and residual checks of their standard identities.

#include "rootscat/harmonic.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace rootscat {

class NormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularGram : public std::runtime_error {
 public:
  SingularGram(const std::string& what, double cond) : std::runtime_error(what), condition_estimate(cond) {}
  double condition_estimate;
};

// Unit, Macdonald (reduced) or Koornwinder (BC) parameters, q = e^{-s}.
struct ModelParams {
  enum class Kind { Unit, Macdonald, Koornwinder };
  Kind kind = Kind::Unit;
  double s = 1.0;
  double g_short = 1.0, g_long = 1.0;  // Macdonald
  double ghat = 1.0;                   // Koornwinder long roots
  std::array<double, 4> ghat4{1, 1, 1, 1};

  static ModelParams unit() { return {}; }
  static ModelParams macdonald(double g, double s) { return macdonald(g, g, s); }
  static ModelParams macdonald(double g_short, double g_long, double s);
  static ModelParams koornwinder(double ghat, const std::array<double, 4>& ghat4, double s);

  double q() const;
  // g_0..g_3 from the hatted parameters (the map is an involution)
  std::array<double, 4> g4() const;
  double g_of(const RootSystem& rs, const Root& a) const;
  // throws std::invalid_argument on g <= 0, s <= 0 or a kind/system mismatch
  void validate(const RootSystem& rs) const;
  CFunctionSpec spec() const;
  // parameters of the dual side: Macdonald swaps short/long, Koornwinder
  // exchanges hatted and unhatted parameters
  ModelParams dual() const;
};

// rho_g in fundamental-weight coordinates
std::vector<double> rho_g(const RootSystem& rs, const ModelParams& p);
// rho_g^vee in spectral (simple-coroot) coordinates
std::vector<double> rho_g_vee(const RootSystem& rs, const ModelParams& p);

// C^+ and C^- at a point given in fundamental-weight coordinates
double C_plus(const RootSystem& rs, const ModelParams& p, const std::vector<double>& x);
double C_minus(const RootSystem& rs, const ModelParams& p, const std::vector<double>& x);

struct NormData {
  IVec lambda;
  double C_plus = 1, C_minus = 1;  // at rho_g + lambda
  double Delta = 1;
  double N0 = 1;
  double c_lambda = 1;
};
NormData norm_constants(const RootSystem& rs, const IVec& lambda, const ModelParams& p);

// dominant weights below any of the maxima in dominance order
std::vector<IVec> saturated_weights(const RootSystem& rs, const std::vector<IVec>& maxima);
// dominant weights of height <= h
std::vector<IVec> weights_up_to_height(const RootSystem& rs, long long h);

enum class LinearOrder { GradedLex, GradedRevLex };
void sort_linear_extension(const RootSystem& rs, std::vector<IVec>& ws, LinearOrder order);

struct OrthoPolySystem {
  RootSystem rs;
  CFunctionSpec spec;
  std::vector<IVec> weights;                // ordered linear extension
  std::vector<std::vector<cplx>> a;         // a[i][j], j <= i
  std::map<IVec, std::size_t> index;
  int M = 0;                                // grid used

  bool contains(const IVec& lambda) const { return index.count(lambda) > 0; }
  LaurentPoly poly(const IVec& lambda) const;   // orthonormal P_lambda
  LaurentPoly monic(const IVec& lambda) const;  // P_lambda / a_{lambda lambda}
  double leading(const IVec& lambda) const;     // a_{lambda lambda}
  cplx coefficient(const IVec& lambda, const IVec& mu) const;
};

OrthoPolySystem gram_schmidt(const RootSystem& rs, const std::vector<IVec>& weights, const CFunctionSpec& spec,
                             LinearOrder order = LinearOrder::GradedLex, double tol = 1e-10, int M_max = 1024);

// monic p_lambda orthogonal to lower m_mu
LaurentPoly macdonald_monic(const RootSystem& rs, const IVec& lambda, const ModelParams& p);
// P_lambda = c_lambda p_lambda (bold normalization)
LaurentPoly macdonald_bold(const RootSystem& rs, const IVec& lambda, const ModelParams& p);
LaurentPoly bold_from_system(const OrthoPolySystem& sys, const IVec& lambda, const ModelParams& p);

// spectral point i s (rho_g^vee + mu), mu a coweight given in dual weight
// coordinates
std::vector<cplx> imaginary_point(const RootSystem& rs, const ModelParams& p, const std::vector<double>& mu_spectral);

// spectral coordinates of a weight of the dual system
std::vector<double> coweight_to_spectral(const RootSystem& rs, const IVec& d);

double specialization_residual(const RootSystem& rs, const IVec& lambda, const ModelParams& p);
double symmetry_residual(const RootSystem& rs, const IVec& lambda, const IVec& mu, const ModelParams& p);

// pi a minuscule weight of the dual system (dual weight coordinates).
// Residuals below are relative to max(1, largest single term).
double macdonald_identity_residual(const RootSystem& rs, const IVec& pi_dual, const std::vector<double>& x,
                                   const ModelParams& p);
// pi (quasi-)minuscule for the dual system
double difference_equation_residual(const RootSystem& rs, const OrthoPolySystem& sys, const IVec& lambda,
                                    const std::vector<double>& x, const IVec& pi_dual, const ModelParams& p);
// pi (quasi-)minuscule for the system itself
double pieri_residual(const RootSystem& rs, const OrthoPolySystem& sys, const IVec& lambda,
                      const std::vector<double>& x, const IVec& pi, const ModelParams& p);
// V_nu(x) with x in fundamental-weight coordinates (reduced systems)
double macdonald_V(const RootSystem& rs, const ModelParams& p, const IVec& nu, const std::vector<double>& x);

int m_of(const RootSystem& rs, const IVec& lambda);  // min <lambda, alpha^vee> over R0+

// delta^{-1} sum_w (-1)^w C_trunc(xi_w) e^{i<rho+lambda, xi_w>} with C
// expanded to total Taylor degree `order`
LaurentPoly asymptotic_polynomial(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec, int order);
LaurentPoly taylor_truncated_asymptotic(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec);
// delta(xi) P_lambda^infty(xi) evaluated directly
cplx asymptotic_times_delta(const RootSystem& rs, const IVec& lambda, const CFunctionSpec& spec,
                            const std::vector<double>& x);

std::string to_json(const OrthoPolySystem& sys);

}  // namespace rootscat
