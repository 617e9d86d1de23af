#pragma once
// Laurent polynomials on the weight lattice, Weyl characters, the weight
// function and torus quadrature.

#include "rootscat/qfun.hpp"
#include "rootscat/rootsys.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rootscat {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sparse exponential sum  sum_v c_v e^{i<v, xi>}.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly constant(int rank, cplx c);
  static LaurentPoly monomial(const IVec& v, cplx c = 1.0);

  void add(const IVec& v, cplx c);  // drops the entry if the sum is exactly 0
  cplx coeff(const IVec& v) const;
  const std::map<IVec, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(cplx s);
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator+(const LaurentPoly& o) const { return LaurentPoly(*this) += o; }
  LaurentPoly operator-(const LaurentPoly& o) const { return LaurentPoly(*this) -= o; }
  LaurentPoly operator*(cplx s) const { return LaurentPoly(*this) *= s; }

  void prune(double tol);  // drop |c| <= tol

  // x in simple-coroot coordinates (complex x allowed for imaginary shifts)
  cplx operator()(const std::vector<double>& x) const;
  cplx eval_complex(const std::vector<cplx>& x) const;

  int bandwidth() const;  // max |coordinate| over the support

  bool w_invariant = false;

 private:
  std::map<IVec, cplx> terms_;
};

// Exact integer-coefficient Laurent polynomial, used for the character division.
using IntLaurent = std::map<IVec, long long>;

LaurentPoly monomial_symmetric(const RootSystem& rs, const IVec& lambda);
// e^rho prod_{R0+} (1 - e^{-alpha}) expanded
LaurentPoly weyl_denominator(const RootSystem& rs);
// prod_{R0+} (e^{i<a,xi>/2} - e^{-i<a,xi>/2})
cplx eval_delta(const RootSystem& rs, const std::vector<double>& x);
cplx eval_delta_complex(const RootSystem& rs, const std::vector<cplx>& x);
// sum_w (-1)^w e^{w(mu)}
IntLaurent alternating_sum(const RootSystem& rs, const IVec& mu);
LaurentPoly weyl_character(const RootSystem& rs, const IVec& lambda);

// Nondominant character folding: chi_mu = sign * chi_lambda or zero.
struct FoldedWeight {
  bool zero = false;
  int sign = 1;
  IVec lambda;
};
FoldedWeight fold_weight(const RootSystem& rs, const IVec& mu);

// Assignment of c-functions to the root lengths of R1.
struct CFunctionSpec {
  CFunction short_c = CFunction::unit();
  CFunction long_c = CFunction::unit();
  static CFunctionSpec unit() { return {}; }
  static CFunctionSpec uniform(const CFunction& c) { return {c, c}; }
  const CFunction& of(const RootSystem& rs, const Root& a) const { return rs.is_long_r1(a) ? long_c : short_c; }
  bool is_unit() const { return short_c.is_unit() && long_c.is_unit(); }
};

// C(xi) = prod_{R1+} c(e^{-i<a,xi>})
cplx eval_C(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<double>& x);
// 1 / |C(xi)|^2
double weight_function(const RootSystem& rs, const CFunctionSpec& spec, const std::vector<double>& x);

// Uniform grid x = 2 pi k / M on the torus (simple-coroot coordinates).
class QuadratureGrid {
 public:
  QuadratureGrid(int rank, int M);
  int rank() const { return n_; }
  int M() const { return M_; }
  std::size_t size() const { return size_; }
  IVec index(std::size_t k) const;
  std::vector<double> point(std::size_t k) const;
  double weight() const { return weight_; }
  // e^{2 pi i r / M}
  cplx root(long long r) const;

 private:
  int n_, M_;
  std::size_t size_;
  double weight_;
  std::vector<cplx> roots_;
};

// f evaluated on the grid via exact root-of-unity lookup
cplx eval_on_grid(const LaurentPoly& f, const QuadratureGrid& grid, const IVec& k);

// Delta_hat |delta|^2 sampled on the grid, W-averaging factor 1/|W| included.
std::vector<double> measure_on_grid(const RootSystem& rs, const CFunctionSpec& spec, const QuadratureGrid& grid);

struct InnerProductResult {
  cplx value;
  int M = 0;
};

// (f, g)_Delta with adaptive doubling of M until successive values agree
InnerProductResult inner_product(const RootSystem& rs, const LaurentPoly& f, const LaurentPoly& g,
                                 const CFunctionSpec& spec, double tol = 1e-10, int M_max = 1024);

// (b_i, b_j)_Delta for a whole basis, adaptive in M
struct GramResult {
  std::vector<std::vector<cplx>> G;
  int M = 0;
};
GramResult weighted_gram(const RootSystem& rs, const std::vector<LaurentPoly>& basis, const CFunctionSpec& spec,
                         double tol = 1e-10, int M_max = 1024);

// (1/|W|) torus average of a sampled function, adaptive in M.  fn receives
// the grid point.
InnerProductResult torus_average(const RootSystem& rs, const std::function<cplx(const std::vector<double>&)>& fn,
                                 int M0, double tol = 1e-10, int M_max = 1024);

// smallest M that resolves a band-limited integrand of the given bandwidth
int grid_size_for_bandwidth(int bw);

}  // namespace rootscat
