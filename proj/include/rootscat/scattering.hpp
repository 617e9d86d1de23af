#pragma once
// Wave functions, their plane-wave asymptotics, the Fourier transforms F and
// F0, the scattering matrix and the wave and scattering operators.

#include "rootscat/laplacian.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>

namespace rootscat {

class LeakageError : public std::runtime_error {
 public:
  LeakageError(const std::string& what, double leak) : std::runtime_error(what), leakage(leak) {}
  double leakage;
};

class NotRegular : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Function on the torus grid x = 2 pi k / M (simple-coroot coordinates).
// Norms are (1/|W|) torus averages, which equal alcove averages for the
// W-(anti)invariant functions used here.
struct SpectralFunction {
  int rank = 0;
  int M = 0;
  std::vector<cplx> v;

  static SpectralFunction sample(int rank, int M, const std::function<cplx(const std::vector<double>&)>& f);
  QuadratureGrid grid() const { return {rank, M}; }
};
cplx spectral_inner(const RootSystem& rs, const SpectralFunction& a, const SpectralFunction& b);
double spectral_norm(const RootSystem& rs, const SpectralFunction& a);

// Orthonormal wave functions Psi_lambda = Delta_hat^{1/2} delta P_lambda on a
// fixed weight table.
class WaveTable {
 public:
  // M_max bounds the quadrature grid used for the Gram matrix
  WaveTable(const RootSystem& rs, const CFunctionSpec& spec, std::vector<IVec> weights, int M_max = 1024);
  const RootSystem& root_system() const { return sys_.rs; }
  const CFunctionSpec& spec() const { return sys_.spec; }
  const OrthoPolySystem& system() const { return sys_; }
  const std::vector<IVec>& weights() const { return sys_.weights; }
  bool contains(const IVec& lambda) const { return sys_.contains(lambda); }

  // throws std::out_of_range if lambda is not in the table
  cplx operator()(const IVec& lambda, const std::vector<double>& x) const;
  // Psi_lambda sampled on the grid of size M (cached)
  const std::vector<cplx>& on_grid(const IVec& lambda, int M) const;

 private:
  OrthoPolySystem sys_;
  std::vector<LaurentPoly> polys_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<double>> amp_;  // Delta_hat^{1/2} |delta| phase-free part per grid
  mutable std::map<std::pair<int, std::size_t>, std::shared_ptr<std::vector<cplx>>> cache_;
  const std::vector<double>& amplitude(int M) const;
};

// N0^{-1/2} Delta(lambda)^{1/2} Delta_hat^{1/2} delta P_lambda with the bold
// normalization of the Macdonald or Koornwinder polynomial
cplx wave_function(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, const ModelParams& p);
// sum_w (-1)^w e^{i <rho+lambda, w xi>}
cplx plane_wave(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, long long max_order = 100000);

// S_w^{1/2}(xi) assembled from one shat_sqrt factor per root of R1+
struct SwFactors {
  cplx value = 1.0;
  int count = 0;
  int same_side = 0;  // roots with w(alpha) positive
  int flipped = 0;
};
SwFactors S_w_sqrt(const RootSystem& rs, const CFunctionSpec& spec, const WeylElement& w, const std::vector<double>& x);
cplx S_w(const RootSystem& rs, const CFunctionSpec& spec, const WeylElement& w, const std::vector<double>& x);

cplx asymptotic_wave(const RootSystem& rs, const IVec& lambda, const std::vector<double>& x, const CFunctionSpec& spec,
                     long long max_order = 100000);

struct ConvergenceRow {
  IVec lambda;
  int m = 0;
  double distance = 0;
};
struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool strictly_decreasing = false;
  double slope = 0, intercept = 0, r2 = 0;  // fit of log distance against m(lambda)
};
double wave_distance(const WaveTable& table, const IVec& lambda, double tol = 1e-12);
ConvergenceReport convergence_report(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<IVec>& ray);
void write_csv(std::ostream& os, const ConvergenceReport& r);

// least squares y = a + b x with coefficient of determination
struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// F: phi -> sum_lambda phi_lambda conj(Psi_lambda)
SpectralFunction fourier_forward(const WaveTable& table, const LatticeFunction& phi, int M);
// phi_lambda = (1/|W|) mean(phi_hat Psi_lambda) over the window (default:
// the table); throws LeakageError if the missing mass exceeds leak_tol
LatticeFunction fourier_inverse(const WaveTable& table, const SpectralFunction& f, const std::vector<IVec>& window = {},
                                double leak_tol = 1e-6);
SpectralFunction fourier0_forward(const RootSystem& rs, const LatticeFunction& phi, int M);
LatticeFunction fourier0_inverse(const RootSystem& rs, const SpectralFunction& f, const std::vector<IVec>& window,
                                 double leak_tol = 1e-6);
// the mass a window misses: 1 - ||inverse||^2 / ||f||^2
double leakage(const RootSystem& rs, const SpectralFunction& f, const LatticeFunction& inverse);

// Symbol, classifier of the regular sector, and the scattering matrix.
class ScatteringContext {
 public:
  enum class SingularPolicy { Reject, Perturb };

  // E must be real on real xi
  ScatteringContext(const RootSystem& rs, const CFunctionSpec& spec, const LaurentPoly& E);
  const RootSystem& root_system() const { return rs_; }
  const CFunctionSpec& spec() const { return spec_; }
  const LaurentPoly& symbol() const { return E_; }

  double E(const std::vector<double>& x) const;
  // gradient in fundamental-weight coordinates
  std::vector<double> grad(const std::vector<double>& x) const;
  bool is_regular(const std::vector<double>& x, double tol = 1e-10) const;
  // w with w(grad E) strictly dominant; throws NotRegular
  WeylElement w_hat(const std::vector<double>& x) const;
  // S_{w_hat}(xi)^power, power in {1, -1, 1/2, -1/2}
  cplx S_hat(const std::vector<double>& x, double power) const;
  // numeric range of E over the grid
  std::pair<double, double> spectrum(int M = 256) const;

  SingularPolicy policy = SingularPolicy::Reject;

 private:
  RootSystem rs_;
  CFunctionSpec spec_;
  LaurentPoly E_;
};

SpectralFunction smatrix_apply(const SpectralFunction& f, double power, const ScatteringContext& ctx);
// Omega_+- = F^{-1} S^{-+1/2} F0
LatticeFunction wave_operator_apply(const LatticeFunction& phi, int sign, const ScatteringContext& ctx,
                                    const WaveTable& table, int M, const std::vector<IVec>& window = {});
// S_L = F0^{-1} S F0
LatticeFunction scattering_operator_apply(const LatticeFunction& phi, const ScatteringContext& ctx, int M,
                                          const std::vector<IVec>& window);
void write_smatrix_csv(std::ostream& os, const ScatteringContext& ctx, int M);

}  // namespace rootscat
