#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace xprod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// An element of a finite-dimensional C*-algebra written as a direct sum of
/// square complex matrix blocks. `level` tags the stage of an AF filtration the
/// blocks belong to; commutative backends keep everything at level 0.
class BlockElement {
 public:
  BlockElement() = default;
  BlockElement(int level, std::vector<Matrix> blocks);

  static BlockElement zero(int level, const std::vector<Eigen::Index>& dims);
  static BlockElement identity(int level, const std::vector<Eigen::Index>& dims);

  int level() const { return level_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Matrix& block(std::size_t i) const { return blocks_[i]; }
  Matrix& block(std::size_t i) { return blocks_[i]; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  std::vector<Eigen::Index> dims() const;
  std::size_t entry_count() const;

  BlockElement& operator+=(const BlockElement& other);
  BlockElement& operator-=(const BlockElement& other);
  BlockElement& operator*=(Complex s);

  /// Blockwise product; both operands must share level and block shapes.
  BlockElement product(const BlockElement& other) const;
  BlockElement adjoint() const;

  /// C*-norm: the largest spectral norm over the blocks.
  double norm() const;
  double max_abs() const;
  bool is_exact_zero() const;

 private:
  int level_ = 0;
  std::vector<Matrix> blocks_;
};

BlockElement operator+(BlockElement a, const BlockElement& b);
BlockElement operator-(BlockElement a, const BlockElement& b);
BlockElement operator*(Complex s, BlockElement a);

/// Spectral norm of a dense matrix (largest singular value).
double spectral_norm(const Matrix& m);

}  // namespace xprod
