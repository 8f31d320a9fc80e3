#include <gtest/gtest.h>

#include <Eigen/LU>

#include "support/fixtures.hpp"
#include "xprod/errors.hpp"
#include "xprod/funalg.hpp"

using namespace xprod;
using namespace xprod::funalg;
using xprod::testing::points;

namespace {

Vector vec(std::initializer_list<Complex> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) out(i++) = c;
  return out;
}

Vector basis(std::size_t n, std::size_t i) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

// Every L with L(delta(a) b) = a L(b) on basis pairs and delta L(a) = delta(1) a delta(1),
// solved as a linear system in the n^2 entries of L.
std::optional<Matrix> unique_complete_transfer(const Matrix& delta) {
  const auto n = delta.rows();
  const Vector one = Vector::Ones(n);
  const Vector d1 = delta * one;
  std::vector<std::pair<Vector, Complex>> rows;
  auto unknown = [n](Eigen::Index r, Eigen::Index c) { return r * n + c; };
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const Vector ea = basis(static_cast<std::size_t>(n), static_cast<std::size_t>(a));
      const Vector eb = basis(static_cast<std::size_t>(n), static_cast<std::size_t>(b));
      const Vector arg = (delta * ea).cwiseProduct(eb);
      for (Eigen::Index x = 0; x < n; ++x) {
        Vector row = Vector::Zero(n * n);
        for (Eigen::Index c = 0; c < n; ++c) row(unknown(x, c)) += arg(c);
        row(unknown(x, b)) -= ea(x);
        rows.emplace_back(row, 0.0);
      }
    }
  for (Eigen::Index a = 0; a < n; ++a) {
    const Vector target = d1.cwiseProduct(basis(static_cast<std::size_t>(n), static_cast<std::size_t>(a)));
    for (Eigen::Index x = 0; x < n; ++x) {
      Vector row = Vector::Zero(n * n);
      for (Eigen::Index y = 0; y < n; ++y) row(unknown(y, a)) += delta(x, y);
      rows.emplace_back(row, target(x));
    }
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), n * n);
  Vector rhs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    M.row(static_cast<Eigen::Index>(i)) = rows[i].first.transpose();
    rhs(static_cast<Eigen::Index>(i)) = rows[i].second;
  }
  Eigen::FullPivLU<Matrix> lu(M);
  if (lu.rank() != n * n) return std::nullopt;
  const Vector sol = lu.solve(rhs);
  if ((M * sol - rhs).norm() > 1e-9) return std::nullopt;
  Matrix L(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) L(r, c) = sol(unknown(r, c));
  return L;
}

}  // namespace

TEST(PointSet, RejectsDuplicatesAndEmpties) {
  EXPECT_THROW(PointSet({}), ValidationError);
  EXPECT_THROW(PointSet({"a", "a"}), ValidationError);
  EXPECT_THROW(PointSet({"a", ""}), ValidationError);
  EXPECT_EQ(*PointSet({"a", "b"}).index_of("b"), 1u);
}

TEST(Endomorphism, ShiftsAlongTheChain) {
  const auto X = points(3);
  const auto delta = endomorphism_from_map(X, xprod::testing::chain3(X));
  const Vector a = vec({2.0, 3.0, 5.0});
  EXPECT_EQ(delta * a, vec({0.0, 2.0, 3.0}));
}

TEST(Endomorphism, IdentityAndEmptyDomain) {
  const auto X = points(3);
  EXPECT_EQ(endomorphism_from_map(X, xprod::testing::identity_map(X)), Matrix::Identity(3, 3));
  const PartialMap empty(X, {std::nullopt, std::nullopt, std::nullopt});
  EXPECT_TRUE(endomorphism_from_map(X, empty).isZero(0.0));
}

TEST(CheckTransfer, Examples) {
  const auto X = points(3);
  const auto rep = complete_transfer(X, xprod::testing::chain3(X));
  ASSERT_TRUE(rep.delta_star.has_value());
  EXPECT_TRUE(check_transfer(rep.delta, *rep.delta_star));
  const Matrix I = Matrix::Identity(3, 3);
  EXPECT_TRUE(check_transfer(I, I));
  EXPECT_FALSE(check_transfer(I, -I));
  EXPECT_THROW(check_transfer(I, Matrix::Identity(2, 2)), ValidationError);
}

TEST(CheckNondegenerate, Examples) {
  const auto X = points(3);
  const auto rep = complete_transfer(X, xprod::testing::chain3(X));
  const auto c = check_nondegenerate(rep.delta, *rep.delta_star);
  EXPECT_TRUE(c.conditional_expectation && c.delta_fixed && c.unit_condition);
  const Matrix I = Matrix::Identity(3, 3);
  const auto id = check_nondegenerate(I, I);
  EXPECT_TRUE(id.conditional_expectation && id.delta_fixed && id.unit_condition);
  const auto z = check_nondegenerate(rep.delta, Matrix::Zero(3, 3));
  EXPECT_FALSE(z.conditional_expectation || z.delta_fixed || z.unit_condition);
  EXPECT_THROW(check_nondegenerate(I, -I), ContractError);
}

TEST(CompleteTransfer, ChainExample) {
  const auto X = points(3);
  const auto rep = complete_transfer(X, xprod::testing::chain3(X));
  EXPECT_TRUE(rep.is_complete);
  EXPECT_EQ(rep.classification, Classification::Complete);
  EXPECT_EQ(*rep.delta_star * vec({2.0, 3.0, 5.0}), vec({3.0, 5.0, 0.0}));
  EXPECT_EQ(*rep.projection_P, vec({1.0, 1.0, 0.0}));
}

TEST(CompleteTransfer, CollapseIsNotComplete) {
  const auto X = points(2);
  const auto rep = complete_transfer(X, xprod::testing::collapse2(X));
  EXPECT_FALSE(rep.is_complete);
  EXPECT_FALSE(rep.delta_star.has_value());
  EXPECT_FALSE(rep.is_hereditary_range);
  EXPECT_TRUE(rep.is_nondegenerate);
  EXPECT_STREQ(to_string(rep.classification), "nondegenerate-only");
}

TEST(CompleteTransfer, BijectionIsIsometric) {
  const auto X = points(4);
  const auto rep = complete_transfer(X, xprod::testing::cycle_map(X));
  EXPECT_EQ(rep.classification, Classification::CompleteIsometric);
  EXPECT_EQ(*rep.projection_P, Vector::Ones(4));
}

TEST(HereditaryRange, Examples) {
  const auto X = points(3);
  EXPECT_TRUE(is_hereditary_range(X, xprod::testing::chain3(X)));
  const auto Y = points(2);
  EXPECT_FALSE(is_hereditary_range(Y, xprod::testing::collapse2(Y)));
  EXPECT_TRUE(is_hereditary_range(X, PartialMap(X, {std::nullopt, std::nullopt, std::nullopt})));
}

TEST(PartialAutomorphism, ChainIdeals) {
  const auto X = points(3);
  const auto data = partial_automorphism_data(X, xprod::testing::chain3(X), 3);
  ASSERT_GE(data.ideals.size(), 3u);
  EXPECT_EQ(data.ideals[0].n, 1);
  EXPECT_EQ(data.ideals[0].positive, (PointSubset{1, 2}));
  EXPECT_EQ(data.ideals[0].negative, (PointSubset{0, 1}));
  EXPECT_EQ(data.ideals[1].positive, (PointSubset{2}));
  EXPECT_EQ(data.ideals[1].negative, (PointSubset{0}));
  EXPECT_TRUE(data.ideals[2].positive.empty());
  EXPECT_TRUE(data.ideals[2].negative.empty());
  EXPECT_TRUE(data.delta_star_multiplicative);
}

TEST(PartialAutomorphism, BijectionKeepsEverything) {
  const auto X = points(3);
  const auto data = partial_automorphism_data(X, xprod::testing::cycle_map(X), 4);
  for (const auto& ideal : data.ideals) {
    EXPECT_EQ(ideal.positive.size(), 3u);
    EXPECT_EQ(ideal.negative.size(), 3u);
  }
}

TEST(PartialAutomorphism, RefusesIncompleteSystems) {
  const auto X = points(2);
  EXPECT_THROW(partial_automorphism_data(X, xprod::testing::collapse2(X), 2), ContractError);
}

TEST(FunBackend, RefusesIncompleteSystems) {
  const auto X = points(2);
  EXPECT_THROW(FunBackend(X, xprod::testing::collapse2(X)), ValidationError);
}

// Exhaustive sweep: completeness tracks injectivity, the constructed delta_*
// satisfies both identities exactly, and it is the only solution.
TEST(FunalgProperties, ExhaustiveSmallSystems) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto X = points(n);
    xprod::testing::for_each_partial_map(X, [&](const PartialMap& g) {
      const auto rep = complete_transfer(X, g);
      ASSERT_EQ(rep.is_complete, g.injective());
      ASSERT_EQ(rep.is_hereditary_range, g.injective());
      ASSERT_TRUE(rep.transfer.has_value());
      ASSERT_TRUE(check_transfer(rep.delta, *rep.transfer));
      ASSERT_TRUE(check_nondegenerate(rep.delta, *rep.transfer).agree());
      const auto oracle = unique_complete_transfer(rep.delta);
      ASSERT_EQ(oracle.has_value(), rep.is_complete);
      if (!rep.is_complete) return;
      const Matrix& L = *rep.delta_star;
      ASSERT_TRUE((L - *oracle).isZero(1e-12));
      const Vector d1 = rep.delta * Vector::Ones(static_cast<Eigen::Index>(n));
      for (std::size_t a = 0; a < n; ++a) {
        const Vector ea = basis(n, a);
        ASSERT_EQ(rep.delta * (L * ea), d1.cwiseProduct(ea).cwiseProduct(d1));
        for (std::size_t b = 0; b < n; ++b) {
          const Vector eb = basis(n, b);
          ASSERT_EQ(L * (rep.delta * ea).cwiseProduct(eb), ea.cwiseProduct(L * eb));
        }
      }
      const Vector P = *rep.projection_P;
      ASSERT_EQ(P.cwiseProduct(P), P);
      ASSERT_EQ(rep.delta * P, d1);
    });
  }
}
