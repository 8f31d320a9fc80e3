#pragma once

// Truncated regular representation of the crossed product on
//   H = H_{-N} + ... + H_N,
// where H_n is A with the semi-inner product
//   <v,u>_n = f(delta_*^n(u* v))            n >= 0
//   <v,u>_n = f(u* delta^{|n|}(1) v)        n <  0
// divided by its null space. U, U* and pi(a) are assembled as dense matrices
// in orthonormal coordinates; anything leaving the window is dropped.

#include <memory>
#include <vector>

#include "xprod/backend.hpp"
#include "xprod/block_element.hpp"
#include "xprod/crossalg.hpp"

namespace xprod::regrep {

inline constexpr int kDefaultCoeffLevel = 4;

/// Highest backend level a window-N rep with coefficient level L touches.
int required_level(int window, int coeff_level);

struct LevelSpace {
  int n = 0;
  int algebra_level = 0;
  BlockElement cut;                 // delta^{|n|}(1) for n < 0, the unit otherwise
  BlockElement density;             // tau_n: <v,u>_n = Tr(tau_n u* c v)
  std::vector<Matrix> range;        // W_s: orthonormal basis of range(cut_s)
  std::vector<Matrix> eigvecs;      // V_s: kept Gram eigenvectors
  std::vector<Eigen::VectorXd> eigvals;
  std::vector<Eigen::Index> block_offset;
  Eigen::Index dim = 0;
  Eigen::Index offset = 0;  // position inside H
  double min_gram_eigenvalue = 0.0;
};

class TruncatedRep {
 public:
  TruncatedRep(BackendPtr backend, std::shared_ptr<const Functional> f, int window,
               int coeff_level = kDefaultCoeffLevel);

  const Backend& backend() const { return *backend_; }
  const Functional& functional() const { return *f_; }
  int window() const { return window_; }
  int coeff_level() const { return coeff_level_; }
  Eigen::Index dimension() const { return dim_; }
  const LevelSpace& level(int n) const;
  double min_gram_eigenvalue() const;

  /// Orthonormal coordinates of the class of v in H_n.
  Vector coordinates(int n, const BlockElement& v) const;
  /// An algebra element representing the i-th basis vector of H_n.
  BlockElement preimage(int n, Eigen::Index i) const;
  /// <v,u>_n evaluated through the algebra maps and the functional.
  Complex inner(int n, const BlockElement& v, const BlockElement& u) const;

  const Matrix& op_U() const { return U_; }
  const Matrix& op_Ustar() const { return Ustar_; }
  Matrix pi(const BlockElement& a) const;
  /// sum U*^k pi(a_{-k}) + pi(a_0) + sum pi(a_k) U^k on the window.
  Matrix apply(const cross::CrossedElement& x) const;
  /// Rows and columns of levels |n| <= radius.
  Matrix interior(const Matrix& T, int radius) const;
  std::vector<Eigen::Index> interior_indices(int radius) const;

 private:
  BlockElement up(int n, const BlockElement& v) const;    // H_{n-1} -> H_n
  BlockElement down(int n, const BlockElement& v) const;  // H_{n+1} -> H_n
  BlockElement at_level(int n, const BlockElement& v) const;
  void build_level(int n);

  BackendPtr backend_;
  std::shared_ptr<const Functional> f_;
  int window_;
  int coeff_level_;
  int base_level_;  // algebra level of H_0
  std::vector<LevelSpace> levels_;
  Eigen::Index dim_ = 0;
  Matrix U_, Ustar_;
};

/// rep_apply with the degree precondition deg(x) <= N.
Matrix rep_apply(const TruncatedRep& rep, const cross::CrossedElement& x);
/// Largest singular value of the compression to levels |n| <= N - deg(x).
double oracle_norm(const TruncatedRep& rep, const cross::CrossedElement& x);
/// ||N_0(x)|| <= oracle_norm + 1e-6.
bool check_star_property(const TruncatedRep& rep, const cross::CrossedElement& x);
/// max |<U v,u>_{n+1} - <v,U* u>_n| over basis pairs, through the algebra maps.
double check_adjoint_pairing(const TruncatedRep& rep);
/// ||U* - U^H|| in coordinates.
double adjoint_residual(const TruncatedRep& rep);

struct RelationResiduals {
  double u_pi_ustar = 0.0;    // U pi(a) U* = pi(delta(a))
  double ustar_pi_u = 0.0;    // U* pi(a) U = pi(delta_*(a))
  double support_central = 0.0;  // [U*U, pi(a)] = 0
  double max() const;
};

/// Relations on levels |n| <= N - 2.
RelationResiduals check_relations(const TruncatedRep& rep, const BlockElement& a);

/// One rep per functional of the backend's family; norms are maxima over it.
class FamilyOracle {
 public:
  FamilyOracle(BackendPtr backend, int window, int coeff_level = kDefaultCoeffLevel);
  const std::vector<std::shared_ptr<const TruncatedRep>>& reps() const { return reps_; }
  int window() const { return window_; }
  double norm(const cross::CrossedElement& x) const;
  bool star_property(const cross::CrossedElement& x) const;
  /// Largest entry of rep_apply(x) over the family.
  double max_abs(const cross::CrossedElement& x) const;

 private:
  int window_;
  std::vector<std::shared_ptr<const TruncatedRep>> reps_;
};

}  // namespace xprod::regrep
