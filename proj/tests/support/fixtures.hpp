#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "xprod/ckalg.hpp"
#include "xprod/funalg.hpp"

namespace xprod::testing {

inline funalg::PointSet points(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return funalg::PointSet(labels);
}

// X = {1,2,3}, gamma(2) = 1, gamma(3) = 2.
inline funalg::PartialMap chain3(const funalg::PointSet& X) {
  return funalg::PartialMap::from_pairs(X, {{1, 0}, {2, 1}});
}

// X = {1,2}, gamma(1) = gamma(2) = 1.
inline funalg::PartialMap collapse2(const funalg::PointSet& X) {
  return funalg::PartialMap::from_pairs(X, {{0, 0}, {1, 0}});
}

inline funalg::PartialMap identity_map(const funalg::PointSet& X) {
  std::vector<std::optional<funalg::PointIndex>> img;
  for (std::size_t i = 0; i < X.size(); ++i) img.emplace_back(i);
  return funalg::PartialMap(X, img);
}

inline funalg::PartialMap cycle_map(const funalg::PointSet& X) {
  std::vector<std::optional<funalg::PointIndex>> img;
  for (std::size_t i = 0; i < X.size(); ++i) img.emplace_back((i + 1) % X.size());
  return funalg::PartialMap(X, img);
}

inline std::shared_ptr<const funalg::FunBackend> chain3_backend() {
  const auto X = points(3);
  return std::make_shared<const funalg::FunBackend>(X, chain3(X));
}

// 4 points: 1 -> 2 -> 3 -> 1 cycle plus 4 -> 1, injective with a non-full image.
inline std::shared_ptr<const funalg::FunBackend> tail_cycle_backend() {
  const auto X = points(4);
  return std::make_shared<const funalg::FunBackend>(
      X, funalg::PartialMap::from_pairs(X, {{0, 1}, {1, 2}, {2, 0}}));
}

// Enumerates every partial map on n points; images[i] in {none, 0..n-1}.
template <class F>
void for_each_partial_map(const funalg::PointSet& X, F&& f) {
  const std::size_t n = X.size();
  std::vector<std::size_t> code(n, 0);
  while (true) {
    std::vector<std::optional<funalg::PointIndex>> img(n);
    for (std::size_t i = 0; i < n; ++i)
      if (code[i] > 0) img[i] = code[i] - 1;
    f(funalg::PartialMap(X, img));
    std::size_t k = 0;
    while (k < n && ++code[k] == n + 1) code[k++] = 0;
    if (k == n) break;
  }
}

inline ck::CKMatrix full2() { return ck::validate_matrix({{1, 1}, {1, 1}}); }
inline ck::CKMatrix flip2() { return ck::validate_matrix({{0, 1}, {1, 0}}); }
inline ck::CKMatrix upper2() { return ck::validate_matrix({{1, 1}, {0, 1}}); }

}  // namespace xprod::testing
