#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "xprod/block_element.hpp"

namespace xprod {

/// A positive linear functional on a block algebra, given level by level by a
/// density: f(y) = sum_s Tr(rho_s y_s). Densities at different levels must be
/// consistent with the backend's embeddings.
class Functional {
 public:
  virtual ~Functional() = default;
  virtual std::string name() const = 0;
  virtual BlockElement density(int level) const = 0;

  Complex operator()(const BlockElement& y) const;
};

/// The coefficient algebra interface the crossed product is built over: a unital
/// block algebra with an endomorphism delta and its complete transfer operator
/// delta_star. Graded backends (AF algebras) let delta raise the level by one
/// and delta_star lower it by one; ungraded ones keep everything at level 0.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual bool graded() const = 0;
  /// Highest level the backend has structure for (0 when ungraded).
  virtual int max_level() const = 0;
  virtual std::vector<Eigen::Index> block_dims(int level) const = 0;

  /// Unital embedding into a higher level (identity when ungraded).
  virtual BlockElement lift(const BlockElement& x, int level) const = 0;
  virtual BlockElement delta(const BlockElement& x) const = 0;
  virtual BlockElement delta_star(const BlockElement& x) const = 0;
  /// The transpose of delta_star for the trace pairing Tr(rho y):
  /// Tr(rho delta_star(y)) = Tr(delta_star_transpose(rho) y).
  virtual BlockElement delta_star_transpose(const BlockElement& rho) const = 0;

  /// A separating family of positive functionals used by the regular
  /// representation oracle.
  virtual std::vector<std::shared_ptr<const Functional>> functionals() const = 0;

  /// Named coefficients for the expression language.
  virtual std::optional<BlockElement> named_element(const std::string& name) const;
  virtual std::vector<std::string> element_names() const;

  /// Gaussian random element at the given level.
  virtual BlockElement random_element(std::mt19937_64& rng, int level) const;

  int clamp_level(int level) const { return graded() ? level : 0; }
  BlockElement unit(int level = 0) const;
  BlockElement zero(int level = 0) const;

  /// Lifts both operands to their common level.
  std::pair<BlockElement, BlockElement> align(const BlockElement& a, const BlockElement& b) const;
  BlockElement mul(const BlockElement& a, const BlockElement& b) const;
  BlockElement add(const BlockElement& a, const BlockElement& b) const;
  BlockElement sub(const BlockElement& a, const BlockElement& b) const;
  BlockElement delta_power(const BlockElement& x, int k) const;
  BlockElement delta_star_power(const BlockElement& x, int k) const;
  /// delta^k(1).
  BlockElement delta_unit(int k) const;
  double distance(const BlockElement& a, const BlockElement& b) const;
};

using BackendPtr = std::shared_ptr<const Backend>;

}  // namespace xprod
