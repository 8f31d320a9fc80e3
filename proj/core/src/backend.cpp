#include "xprod/backend.hpp"

#include <algorithm>

#include "xprod/errors.hpp"

namespace xprod {

Complex Functional::operator()(const BlockElement& y) const {
  const BlockElement rho = density(y.level());
  Complex acc{0.0, 0.0};
  for (std::size_t s = 0; s < y.block_count(); ++s)
    acc += (rho.block(s).transpose().cwiseProduct(y.block(s))).sum();
  return acc;
}

std::optional<BlockElement> Backend::named_element(const std::string& name) const {
  if (name == "one") return unit(0);
  return std::nullopt;
}

std::vector<std::string> Backend::element_names() const { return {"one"}; }

BlockElement Backend::random_element(std::mt19937_64& rng, int level) const {
  level = clamp_level(level);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Matrix> blocks;
  for (auto d : block_dims(level)) {
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    blocks.push_back(std::move(m));
  }
  return BlockElement(level, std::move(blocks));
}

BlockElement Backend::unit(int level) const {
  level = clamp_level(level);
  return BlockElement::identity(level, block_dims(level));
}

BlockElement Backend::zero(int level) const {
  level = clamp_level(level);
  return BlockElement::zero(level, block_dims(level));
}

std::pair<BlockElement, BlockElement> Backend::align(const BlockElement& a,
                                                     const BlockElement& b) const {
  if (a.level() == b.level()) return {a, b};
  const int top = std::max(a.level(), b.level());
  return {a.level() == top ? a : lift(a, top), b.level() == top ? b : lift(b, top)};
}

BlockElement Backend::mul(const BlockElement& a, const BlockElement& b) const {
  auto [x, y] = align(a, b);
  return x.product(y);
}

BlockElement Backend::add(const BlockElement& a, const BlockElement& b) const {
  auto [x, y] = align(a, b);
  return x += y;
}

BlockElement Backend::sub(const BlockElement& a, const BlockElement& b) const {
  auto [x, y] = align(a, b);
  return x -= y;
}

BlockElement Backend::delta_power(const BlockElement& x, int k) const {
  if (k < 0) throw ContractError("negative delta power");
  BlockElement out = x;
  for (int i = 0; i < k; ++i) out = delta(out);
  return out;
}

BlockElement Backend::delta_star_power(const BlockElement& x, int k) const {
  if (k < 0) throw ContractError("negative delta_star power");
  BlockElement out = x;
  for (int i = 0; i < k; ++i) out = delta_star(out);
  return out;
}

BlockElement Backend::delta_unit(int k) const { return delta_power(unit(0), k); }

double Backend::distance(const BlockElement& a, const BlockElement& b) const {
  return sub(a, b).norm();
}

}  // namespace xprod
