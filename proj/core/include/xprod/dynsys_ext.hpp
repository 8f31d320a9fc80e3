#pragma once

// Reversible extension of a finite partial dynamical system (X, gamma): the
// space of backward gamma-orbits, the lifted map gamma~, and the commutative
// coefficient *-algebra E_*(A) with its convolution product and evaluation phi.

#include <cstddef>
#include <map>
#include <vector>

#include "xprod/funalg.hpp"

namespace xprod::dynsys {

using funalg::FunElement;
using funalg::PartialMap;
using funalg::PointIndex;
using funalg::PointSet;
using funalg::PointSubset;

/// A point of the extension, truncated to depth N = entries.size() - 1.
/// Terminated: (x_0, ..., x_N, 0, 0, ...) with x_N outside gamma(Delta).
/// Cylinder: the depth-N prefix of a longer or infinite backward orbit.
struct OrbitPoint {
  std::vector<PointIndex> entries;
  bool terminated = false;

  int depth() const { return static_cast<int>(entries.size()) - 1; }
  auto operator<=>(const OrbitPoint&) const = default;
};

/// (a_0, ..., a_N) with a_n supported on Delta_n.
struct EStarElement {
  std::vector<FunElement> coeffs;

  int depth() const { return static_cast<int>(coeffs.size()) - 1; }
};

class ReversibleExtension {
 public:
  ReversibleExtension(PointSet X, PartialMap gamma);

  const PointSet& points() const { return X_; }
  const PartialMap& map() const { return gamma_; }
  /// Indicator of Delta_n (domain of gamma^n).
  const FunElement& domain_mask(int n) const;
  bool in_image(PointIndex x) const { return !fibers_[x].empty(); }

  /// All terminated points of depth <= N plus all depth-N cylinder prefixes,
  /// in lexicographic order of their entries.
  std::vector<OrbitPoint> orbit_points(int depth) const;

  OrbitPoint gamma_tilde(const OrbitPoint& p) const;
  OrbitPoint gamma_tilde_inv(const OrbitPoint& p) const;
  static PointIndex projection_Phi(const OrbitPoint& p);

  /// Projects every coefficient onto its mask and trims trailing zeros.
  EStarElement make_element(std::vector<FunElement> coeffs) const;
  EStarElement unit() const;
  EStarElement add(const EStarElement& a, const EStarElement& b) const;
  EStarElement scale(Complex s, const EStarElement& a) const;
  EStarElement star(const EStarElement& a) const;
  EStarElement mul(const EStarElement& a, const EStarElement& b) const;

  Complex phi_eval(const EStarElement& a, const OrbitPoint& p) const;
  /// Equality in E_*(A) = image of phi: compare phi on every enumerated point.
  bool estar_equal(const EStarElement& a, const EStarElement& b, double tol = 0.0) const;

  /// delta^j applied to a function on X.
  FunElement delta_power(const FunElement& a, int j) const;

 private:
  PointSet X_;
  PartialMap gamma_;
  std::vector<PointSubset> fibers_;
  funalg::LinearMapOnA delta_;
  std::vector<FunElement> masks_;  // Delta_0..Delta_{|X|}; constant afterwards
};

std::size_t count_terminated(const std::vector<OrbitPoint>& pts);

}  // namespace xprod::dynsys
