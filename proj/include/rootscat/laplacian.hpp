#pragma once
// Lattice operators on l^2 of the dominant cone: free Laplacians, the
// Macdonald-Ruijsenaars and Koornwinder difference operators, and generic
// Laplacians obtained by conjugating a multiplication operator with the
// polynomial Fourier transform.

#include "rootscat/orthopoly.hpp"

#include <iosfwd>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <vector>

namespace rootscat {

class SingularConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InsufficientDepth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// finitely supported function on dominant weights; exact zeros are not stored
class LatticeFunction {
 public:
  LatticeFunction() = default;
  static LatticeFunction delta(const IVec& lambda, cplx c = 1.0);

  void set(const IVec& lambda, cplx c);
  void add(const IVec& lambda, cplx c);
  cplx at(const IVec& lambda) const;
  const std::map<IVec, cplx>& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double norm() const;
  void prune(double tol);

  LatticeFunction& operator+=(const LatticeFunction& o);
  LatticeFunction& operator-=(const LatticeFunction& o);
  LatticeFunction& operator*=(cplx s);
  LatticeFunction operator-(const LatticeFunction& o) const { return LatticeFunction(*this) -= o; }
  LatticeFunction operator+(const LatticeFunction& o) const { return LatticeFunction(*this) += o; }

 private:
  std::map<IVec, cplx> v_;
};

// mu dominant with mu <= lambda + omega_r and mu - w0(omega_r) >= lambda
std::set<IVec> localization_support(const RootSystem& rs, const IVec& lambda, int r);

// W(pi) together with W(-pi)
std::vector<IVec> symmetric_orbit(const RootSystem& rs, const IVec& pi);
bool is_minuscule(const RootSystem& rs, const IVec& pi);
bool is_quasi_minuscule(const RootSystem& rs, const IVec& pi);

// V_nu(x), x in fundamental-weight coordinates.  Reduced systems use the
// Macdonald form, BC the four-parameter form with nu in W(omega_1).
// Throws SingularConfiguration when a denominator falls below 1e-14.
double V_coeff(const RootSystem& rs, const IVec& nu, const std::vector<double>& x, const ModelParams& p);
// |Delta(x+nu) V_{-nu}(rho_g+x+nu) - Delta(x) V_nu(rho_g+x)|, relative to the larger side
double functional_relation_residual(const RootSystem& rs, const std::vector<double>& x, const IVec& nu,
                                    const ModelParams& p);
// E_pi(x) = sum over the orbit set of exp(s <nu, x>), x spectral
double E_shift(const RootSystem& rs, const IVec& pi, const ModelParams& p);

// E_hat(xi) = sum over the orbit set of e^{i<nu, xi>}
LaurentPoly E_hat(const RootSystem& rs, const IVec& pi);
// sum over W(omega_r) only (the pseudo Laplacian symbol)
LaurentPoly E_hat_fundamental(const RootSystem& rs, int r);

// Free Laplacian.  Reduced: character multiplication with the folding rule.
// BC: plain truncated sum over W(pi).
LatticeFunction apply_free(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi);
// Reduced closed form: -n_pi(lambda) phi_lambda + sum over lambda+nu dominant
LatticeFunction apply_free_closed_form(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi);
int n_pi(const RootSystem& rs, const IVec& pi, const IVec& lambda);

LatticeFunction apply_macdonald_ruijsenaars(const RootSystem& rs, const IVec& pi, const LatticeFunction& phi,
                                            const ModelParams& p);
LatticeFunction apply_koornwinder(const RootSystem& rs, const LatticeFunction& phi, const ModelParams& p);

// Multiplication by E in the basis of orthonormal polynomials on a fixed
// weight table, with matrix elements (E p_lambda, p_mu) from quadrature.
class FourierOperator {
 public:
  FourierOperator(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& E, std::vector<IVec> weights,
                  int M = 0);
  const OrthoPolySystem& system() const { return sys_; }
  int grid_M() const { return M_; }
  // dominant weights reachable from lambda; throws InsufficientDepth if any
  // lies outside the table
  std::vector<IVec> envelope(const IVec& lambda) const;
  cplx element(const IVec& mu, const IVec& lambda) const;
  LatticeFunction apply(const LatticeFunction& phi) const;

 private:
  RootSystem rs_;
  LaurentPoly E_;
  std::vector<IVec> Edom_;
  OrthoPolySystem sys_;
  int M_ = 0;
  std::vector<double> measure_;
  std::vector<std::vector<cplx>> samples_;  // samples_[i][k] = p_i at grid point k
  std::vector<cplx> Evals_;
  mutable std::map<std::pair<IVec, IVec>, cplx> cache_;
  mutable std::mutex cache_mu_;
};

// weights needed to apply E `steps` times to functions supported on `support`
std::vector<IVec> fourier_table(const RootSystem& rs, const LaurentPoly& E, const std::vector<IVec>& support,
                                int steps = 1);

LatticeFunction apply_fourier_conjugated(const RootSystem& rs, const LaurentPoly& E, const CFunctionSpec& spec,
                                         const LatticeFunction& phi, int M = 0);

// ||L_a L_b phi - L_b L_a phi|| / ||phi||
double commutator_residual(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& Ea,
                           const LaurentPoly& Eb, const LatticeFunction& phi);

// Dense truncation of an operator to a weight ball.  Rows whose action
// leaves the ball are flagged as edge rows.
struct TruncatedMatrix {
  std::vector<IVec> weights;
  std::vector<std::vector<cplx>> A;  // A[row][col] = (L delta_col)_row
  std::vector<bool> edge;
};

using LatticeOperator = std::function<LatticeFunction(const LatticeFunction&)>;
TruncatedMatrix truncate(const LatticeOperator& L, const std::vector<IVec>& ball);
// max |A_ij - conj(A_ji)| over pairs of interior rows
double hermiticity_defect(const TruncatedMatrix& m);
void write_csv(std::ostream& os, const TruncatedMatrix& m);

}  // namespace rootscat
