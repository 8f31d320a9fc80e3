#include "xprod/block_element.hpp"

#include <algorithm>
#include <utility>

#include "xprod/errors.hpp"

namespace xprod {

BlockElement::BlockElement(int level, std::vector<Matrix> blocks)
    : level_(level), blocks_(std::move(blocks)) {}

BlockElement BlockElement::zero(int level, const std::vector<Eigen::Index>& dims) {
  std::vector<Matrix> blocks;
  blocks.reserve(dims.size());
  for (auto d : dims) blocks.push_back(Matrix::Zero(d, d));
  return BlockElement(level, std::move(blocks));
}

BlockElement BlockElement::identity(int level, const std::vector<Eigen::Index>& dims) {
  std::vector<Matrix> blocks;
  blocks.reserve(dims.size());
  for (auto d : dims) blocks.push_back(Matrix::Identity(d, d));
  return BlockElement(level, std::move(blocks));
}

std::vector<Eigen::Index> BlockElement::dims() const {
  std::vector<Eigen::Index> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.rows());
  return out;
}

std::size_t BlockElement::entry_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += static_cast<std::size_t>(b.size());
  return n;
}

namespace {
void require_same_shape(const BlockElement& a, const BlockElement& b) {
  if (a.level() != b.level() || a.block_count() != b.block_count())
    throw ContractError("block element shape mismatch");
  for (std::size_t i = 0; i < a.block_count(); ++i)
    if (a.block(i).rows() != b.block(i).rows())
      throw ContractError("block element shape mismatch");
}
}  // namespace

BlockElement& BlockElement::operator+=(const BlockElement& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

BlockElement& BlockElement::operator-=(const BlockElement& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

BlockElement& BlockElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BlockElement BlockElement::product(const BlockElement& other) const {
  require_same_shape(*this, other);
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) out.push_back(blocks_[i] * other.blocks_[i]);
  return BlockElement(level_, std::move(out));
}

BlockElement BlockElement::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return BlockElement(level_, std::move(out));
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double BlockElement::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, spectral_norm(b));
  return n;
}

double BlockElement::max_abs() const {
  double n = 0.0;
  for (const auto& b : blocks_)
    if (b.size() > 0) n = std::max(n, b.cwiseAbs().maxCoeff());
  return n;
}

bool BlockElement::is_exact_zero() const {
  for (const auto& b : blocks_)
    if (!b.isZero(0.0)) return false;
  return true;
}

BlockElement operator+(BlockElement a, const BlockElement& b) { return a += b; }
BlockElement operator-(BlockElement a, const BlockElement& b) { return a -= b; }
BlockElement operator*(Complex s, BlockElement a) { return a *= s; }

}  // namespace xprod
