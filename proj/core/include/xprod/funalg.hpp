#pragma once

// Finite commutative C*-algebras C(X), endomorphisms induced by partial maps
// of X, and the detection/classification of (complete) transfer operators.

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xprod/backend.hpp"
#include "xprod/block_element.hpp"

namespace xprod::funalg {

using FunElement = Vector;
using LinearMapOnA = Matrix;
using PointIndex = std::size_t;
using PointSubset = std::vector<PointIndex>;

class PointSet {
 public:
  explicit PointSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(PointIndex i) const { return labels_.at(i); }
  std::optional<PointIndex> index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, PointIndex> index_;
};

PointSet make_algebra(std::vector<std::string> labels);

/// gamma : Delta -> X. images[x] is empty for x outside Delta.
class PartialMap {
 public:
  PartialMap(const PointSet& X, std::vector<std::optional<PointIndex>> images);
  static PartialMap from_pairs(const PointSet& X,
                               const std::vector<std::pair<PointIndex, PointIndex>>& pairs);

  std::size_t size() const { return images_.size(); }
  const std::optional<PointIndex>& operator()(PointIndex x) const { return images_[x]; }
  const std::vector<std::optional<PointIndex>>& images() const { return images_; }

  bool defined_at(PointIndex x) const { return images_[x].has_value(); }
  PointSubset domain() const;
  PointSubset image() const;
  bool injective() const;
  /// Preimages of each point.
  std::vector<PointSubset> fibers() const;

 private:
  std::vector<std::optional<PointIndex>> images_;
};

/// (delta a)(x) = a(gamma(x)) on Delta, 0 elsewhere.
LinearMapOnA endomorphism_from_map(const PointSet& X, const PartialMap& gamma);

FunElement indicator(std::size_t n, const PointSubset& subset);
PointSubset support(const FunElement& a, double tol = 0.0);

/// Positivity of a linear map on C(X): checked on the point-mass basis plus
/// 100 random nonnegative vectors, cross-checked with entrywise nonnegativity
/// of the matrix.
bool is_positive_map(const LinearMapOnA& L, double tol = 1e-9);

bool check_transfer(const LinearMapOnA& delta, const LinearMapOnA& L);

struct NondegeneracyCheck {
  bool conditional_expectation = false;  // E = delta L is a conditional expectation onto delta(A)
  bool delta_fixed = false;              // delta L delta = delta
  bool unit_condition = false;           // delta(L(1)) = delta(1)
  bool agree() const {
    return conditional_expectation == delta_fixed && delta_fixed == unit_condition;
  }
};

NondegeneracyCheck check_nondegenerate(const LinearMapOnA& delta, const LinearMapOnA& L);

enum class Classification { NoTransfer, NondegenerateOnly, Complete, CompleteIsometric };
const char* to_string(Classification c);

struct TransferReport {
  bool is_transfer = false;
  bool is_nondegenerate = false;
  bool is_complete = false;
  bool is_hereditary_range = false;
  std::optional<FunElement> projection_P;
  Classification classification = Classification::NoTransfer;
  LinearMapOnA delta;
  /// The transfer operator found: the complete one when it exists, otherwise
  /// the fiber-averaging operator.
  std::optional<LinearMapOnA> transfer;
  std::optional<LinearMapOnA> delta_star;  // present iff complete
  std::string reason;
};

TransferReport complete_transfer(const PointSet& X, const PartialMap& gamma);

/// delta(A) = delta(1) A delta(1), computed by rank of the pullback and
/// cross-checked against injectivity of gamma.
bool is_hereditary_range(const PointSet& X, const PartialMap& gamma);

/// Delta_n, the domain of gamma^n (Delta_0 = X).
PointSubset iterated_domain(const PartialMap& gamma, int n);
/// Delta_{-n} = gamma^n(Delta_n).
PointSubset iterated_image(const PartialMap& gamma, int n);

struct IdealPair {
  int n = 0;
  PointSubset positive;  // D_n = A delta^n(1)
  PointSubset negative;  // D_{-n} = A delta_*^n(1)
};

struct PartialAutomorphismData {
  std::vector<IdealPair> ideals;
  /// theta = delta : delta_*(1)A -> delta(1)A, as (source, target) supports.
  std::pair<PointSubset, PointSubset> theta_domains;
  bool delta_one_central = true;
  bool delta_star_multiplicative = false;
};

PartialAutomorphismData partial_automorphism_data(const PointSet& X, const PartialMap& gamma,
                                                  int depth);

/// C(X) with the endomorphism of an injective partial map, as a crossed
/// product coefficient backend.
class FunBackend final : public Backend {
 public:
  FunBackend(PointSet X, PartialMap gamma);

  const PointSet& points() const { return X_; }
  const PartialMap& map() const { return gamma_; }
  const LinearMapOnA& delta_matrix() const { return delta_; }
  const LinearMapOnA& delta_star_matrix() const { return delta_star_; }

  static BlockElement to_element(const FunElement& a);
  static FunElement to_function(const BlockElement& x);

  std::string name() const override { return "funalg"; }
  bool graded() const override { return false; }
  int max_level() const override { return 0; }
  std::vector<Eigen::Index> block_dims(int level) const override;
  BlockElement lift(const BlockElement& x, int level) const override;
  BlockElement delta(const BlockElement& x) const override;
  BlockElement delta_star(const BlockElement& x) const override;
  BlockElement delta_star_transpose(const BlockElement& rho) const override;
  std::vector<std::shared_ptr<const Functional>> functionals() const override;
  std::optional<BlockElement> named_element(const std::string& name) const override;
  std::vector<std::string> element_names() const override;

 private:
  PointSet X_;
  PartialMap gamma_;
  LinearMapOnA delta_;
  LinearMapOnA delta_star_;
};

/// f(a) = sum_x w_x a(x).
class WeightedEvaluation final : public Functional {
 public:
  WeightedEvaluation(std::string name, Eigen::VectorXd weights);
  std::string name() const override { return name_; }
  BlockElement density(int level) const override;

 private:
  std::string name_;
  Eigen::VectorXd weights_;
};

}  // namespace xprod::funalg
