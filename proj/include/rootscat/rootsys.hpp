#pragma once
// Crystallographic root systems built from Cartan data.
//
// Weights and roots are stored as integer coordinates in the basis of
// fundamental weights.  Spectral vectors (points of the torus) are stored in
// the basis of simple coroots, so the pairing <lambda, xi> is a plain dot
// product.  The inner product on E only enters through a rational Gram matrix.

#include <boost/rational.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootscat {

using Rational = boost::rational<long long>;
using IVec = std::vector<int>;
using RMat = std::vector<std::vector<Rational>>;
using IMat = std::vector<std::vector<int>>;

enum class Family { A, B, C, D, E, F, G, BC };

class RootSystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, long long required)
      : std::runtime_error(what), required_order(required) {}
  long long required_order;
};

struct Root {
  IVec w;          // coordinates in the fundamental-weight basis
  IVec coroot;     // alpha^vee in the simple-coroot basis
  IVec height;     // coefficients over the basis of R (dominance order)
  Rational norm2;  // <alpha, alpha>
  bool positive = false;
  bool in_r0 = false;  // 2 alpha not a root
  bool in_r1 = false;  // alpha / 2 not a root
};

struct WeylElement {
  std::vector<int> word;  // simple reflections, applied right to left
  IMat on_weights;        // action on fundamental-weight coordinates
  IMat on_spectral;       // action on simple-coroot coordinates
  int sign = 1;           // det(w) = (-1)^{length of word}
};

struct DominantRep {
  IVec lambda;
  int sign = 1;
  bool stabilizer_trivial = true;
  std::vector<int> word;  // reflections applied, in order
};

class RootSystem {
 public:
  static RootSystem build(Family f, int rank);
  static RootSystem build(const std::string& label, int rank);

  Family family() const { return family_; }
  int rank() const { return n_; }
  std::string label() const;
  bool reduced() const { return family_ != Family::BC; }

  const std::vector<Root>& roots() const { return roots_; }
  std::vector<Root> positive_roots() const;
  std::vector<Root> positive_r0() const;
  std::vector<Root> positive_r1() const;

  // simple roots of R0 (the chamber walls); coroots are unit vectors
  const std::vector<Root>& simple_roots() const { return simple_; }
  // basis of the positive cone Q+ (simple roots of R; differs from
  // simple_roots() only for BC)
  const std::vector<IVec>& cone_basis() const { return basis_; }

  const IMat& cartan() const { return cartan_; }
  const RMat& gram_simple() const { return gram_; }
  const RMat& gram_weights() const { return gram_w_; }

  IVec fundamental_weight(int r) const;  // r in 1..N
  IVec rho() const { return IVec(n_, 1); }

  // exact pairings
  int pair_coroot(const IVec& lambda, const Root& a) const;
  Rational inner(const IVec& a, const IVec& b) const;
  // lambda expressed over cone_basis(); nullopt if lambda is not in Q
  std::optional<std::vector<long long>> cone_coordinates(const IVec& lambda) const;
  Rational height(const IVec& lambda) const;

  bool is_dominant(const IVec& lambda) const;
  bool dominance_leq(const IVec& mu, const IVec& lambda) const;

  IVec reflect(const IVec& lambda, int j) const;  // simple reflection s_j
  std::vector<double> reflect_spectral(const std::vector<double>& x, int j) const;

  std::vector<IVec> weyl_orbit(const IVec& lambda) const;
  DominantRep dominant_representative(const IVec& mu) const;

  std::vector<IVec> minuscule_weights() const;
  IVec quasi_minuscule_weight() const;

  WeylElement identity() const;
  WeylElement element_from_word(const std::vector<int>& word) const;
  WeylElement longest_element() const;
  bool minus_one_in_W() const;
  long long weyl_order_formula() const;
  // throws BudgetExceeded if |W| > max_order
  const std::vector<WeylElement>& weyl_group(long long max_order = 100000) const;

  // spectral-coordinate conversions
  // a vector given in simple-root coordinates (over simple_roots()) -> weight coords
  std::vector<double> simple_root_coords_to_weights(const std::vector<double>& c) const;
  // weight coords -> simple-root coords
  std::vector<double> weights_to_simple_root_coords(const std::vector<double>& w) const;
  // Euclidean vector given in weight coords -> simple-coroot coords (xi space)
  std::vector<double> weights_to_spectral(const std::vector<double>& w) const;

  // dual root system R^vee (transposed Cartan data); reduced types only
  RootSystem dual() const;

  // long roots of R1 (for simply laced systems every root counts as long
  // here and as short in is_short())
  bool is_long_r1(const Root& a) const { return a.in_r1 && a.norm2 == long_r1_; }
  bool is_short(const Root& a) const;
  bool simply_laced() const;

 private:
  Family family_ = Family::A;
  int n_ = 0;
  RMat gram_;    // Gram matrix of simple roots of R0
  IMat cartan_;  // A_ij = <alpha_i, alpha_j^vee>
  RMat gram_w_;  // <omega_i, omega_j>
  RMat cartan_inv_;
  std::vector<Root> roots_;
  std::vector<Root> simple_;
  std::vector<IVec> basis_;
  RMat basis_inv_;  // weight coords -> cone_basis coords
  struct GroupCache {
    std::once_flag once;
    std::vector<WeylElement> elements;
  };
  std::shared_ptr<GroupCache> group_ = std::make_shared<GroupCache>();
  Rational long_r1_;

  void init_from_gram(Family f, const RMat& gram);
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

int dot(const IVec& a, const IVec& b);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double dot(const IVec& a, const std::vector<double>& b);

}  // namespace rootscat
