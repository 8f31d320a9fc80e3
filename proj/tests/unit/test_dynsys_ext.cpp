#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support/fixtures.hpp"
#include "xprod/dynsys_ext.hpp"
#include "xprod/errors.hpp"

using namespace xprod;
using namespace xprod::dynsys;
using xprod::testing::points;

namespace {

OrbitPoint pt(std::vector<PointIndex> e, bool terminated) { return OrbitPoint{std::move(e), terminated}; }

FunElement fn(std::initializer_list<double> v) {
  FunElement out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) out(i++) = c;
  return out;
}

EStarElement random_element(const ReversibleExtension& ext, std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> small(-3, 3);
  std::vector<FunElement> c;
  for (int n = 0; n <= depth; ++n) {
    FunElement a(static_cast<Eigen::Index>(ext.points().size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(small(rng), small(rng));
    c.push_back(a);
  }
  return ext.make_element(std::move(c));
}

}  // namespace

TEST(OrbitPoints, InjectiveChainCollapsesToX) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::chain3(X));
  const auto pts = ext.orbit_points(2);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(count_terminated(pts), 3u);
  std::set<PointIndex> heads;
  for (const auto& p : pts) heads.insert(ReversibleExtension::projection_Phi(p));
  EXPECT_EQ(heads.size(), 3u);
  EXPECT_NE(std::find(pts.begin(), pts.end(), pt({0, 1, 2}, true)), pts.end());
  EXPECT_NE(std::find(pts.begin(), pts.end(), pt({2}, true)), pts.end());
}

TEST(OrbitPoints, IdentityGivesOneCylinderPerPoint) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::identity_map(X));
  const auto pts = ext.orbit_points(4);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) {
    EXPECT_FALSE(p.terminated);
    EXPECT_EQ(p.depth(), 4);
    EXPECT_EQ(std::set<PointIndex>(p.entries.begin(), p.entries.end()).size(), 1u);
  }
}

// gamma(1) = gamma(2) = 1: the chains are 1,1,...,1 (one cylinder) and
// 1,...,1,2 (terminated, one per length).
TEST(OrbitPoints, CollapseMapEnumeration) {
  const auto X = points(2);
  const ReversibleExtension ext(X, xprod::testing::collapse2(X));
  for (int N = 0; N <= 5; ++N) {
    const auto pts = ext.orbit_points(N);
    EXPECT_EQ(count_terminated(pts), static_cast<std::size_t>(N + 1));
    EXPECT_EQ(pts.size() - count_terminated(pts), 1u);
  }
  const auto pts = ext.orbit_points(2);
  std::size_t over_one = 0;
  for (const auto& p : pts) over_one += ReversibleExtension::projection_Phi(p) == 0;
  EXPECT_GT(over_one, 1u);
}

TEST(GammaTilde, Examples) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::chain3(X));
  EXPECT_THROW(ext.gamma_tilde(pt({0, 1, 2}, true)), DomainError);
  EXPECT_EQ(ext.gamma_tilde(pt({1, 2}, true)), pt({0, 1, 2}, true));
  EXPECT_EQ(ext.gamma_tilde_inv(pt({0, 1, 2}, true)), pt({1, 2}, true));
  EXPECT_EQ(ext.gamma_tilde_inv(ext.gamma_tilde(pt({1, 2}, true))), pt({1, 2}, true));
  EXPECT_THROW(ext.gamma_tilde_inv(pt({2}, true)), DomainError);
  EXPECT_EQ(ReversibleExtension::projection_Phi(pt({0, 1, 2}, true)), 0u);
}

TEST(GammaTilde, FixedPointCylinder) {
  const auto X = points(2);
  const ReversibleExtension ext(X, xprod::testing::identity_map(X));
  const auto p = pt({1, 1, 1}, false);
  const auto q = ext.gamma_tilde(p);
  EXPECT_EQ(q.entries, (std::vector<PointIndex>{1, 1, 1, 1}));
  EXPECT_FALSE(q.terminated);
}

TEST(GammaTilde, InverseOnEveryEnumeratedPoint) {
  const auto X = points(4);
  const ReversibleExtension ext(X, funalg::PartialMap::from_pairs(X, {{0, 0}, {1, 0}, {2, 1}, {3, 3}}));
  std::set<OrbitPoint> images;
  for (const auto& p : ext.orbit_points(3)) {
    if (!ext.map().defined_at(p.entries.front())) continue;
    const auto q = ext.gamma_tilde(p);
    EXPECT_TRUE(images.insert(q).second);
    EXPECT_EQ(ext.gamma_tilde_inv(q), p);
  }
}

TEST(EStar, ProductExamples) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::chain3(X));
  const auto a0 = ext.make_element({fn({1, 2, 3})});
  const auto b0 = ext.make_element({fn({4, 5, 6})});
  const auto ab = ext.mul(a0, b0);
  ASSERT_EQ(ab.coeffs.size(), 1u);
  EXPECT_EQ(ab.coeffs[0], fn({4, 10, 18}));

  const auto a = ext.make_element({fn({0, 0, 0}), fn({0, 7, 11})});
  const auto prod = ext.mul(a, b0);
  ASSERT_EQ(prod.coeffs.size(), 2u);
  EXPECT_TRUE(prod.coeffs[0].isZero(0.0));
  EXPECT_EQ(prod.coeffs[1], fn({0, 7, 11}).cwiseProduct(ext.delta_power(fn({4, 5, 6}), 1)));

  const auto u = ext.unit();
  const auto uu = ext.mul(u, u);
  ASSERT_EQ(uu.coeffs.size(), 1u);
  EXPECT_EQ(uu.coeffs[0], fn({1, 1, 1}));
}

TEST(EStar, PhiEvaluation) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::chain3(X));
  for (const auto& p : ext.orbit_points(2)) EXPECT_EQ(ext.phi_eval(ext.unit(), p), Complex(1.0));
  const auto a = ext.make_element({fn({0, 0, 0}), fn({0, 1, 0})});
  EXPECT_EQ(ext.phi_eval(a, pt({0, 1, 2}, true)), Complex(1.0));
  EXPECT_EQ(ext.phi_eval(a, pt({2}, true)), Complex(0.0));
  const ReversibleExtension id(X, xprod::testing::identity_map(X));
  const auto deep = id.make_element({fn({1, 1, 1}), fn({1, 1, 1}), fn({1, 1, 1})});
  EXPECT_THROW(id.phi_eval(deep, pt({0, 0}, false)), ContractError);
}

TEST(EStar, Equality) {
  const auto X = points(3);
  const ReversibleExtension ext(X, xprod::testing::chain3(X));
  const auto u = ext.unit();
  EXPECT_TRUE(ext.estar_equal(u, u));
  EXPECT_FALSE(ext.estar_equal(u, ext.make_element({fn({0, 0, 0})})));
  // chi_Delta at depth 0 against 1_{A_1} at depth 1; the terminated point (3)
  // lies in Delta but has no x_1.
  const auto a = ext.make_element({ext.domain_mask(1)});
  const auto b = ext.make_element({fn({0, 0, 0}), fn({1, 1, 1})});
  bool all_agree = true;
  for (const auto& p : ext.orbit_points(1)) all_agree = all_agree && ext.phi_eval(a, p) == ext.phi_eval(b, p);
  EXPECT_EQ(ext.estar_equal(a, b), all_agree);
  EXPECT_FALSE(ext.estar_equal(a, b));
}

TEST(EStarProperties, CommutativeStarAlgebraUnderPhi) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto X = points(n);
    int systems = 0;
    xprod::testing::for_each_partial_map(X, [&](const funalg::PartialMap& g) {
      if (++systems % 7 != 0 && n == 4) return;
      const ReversibleExtension ext(X, g);
      for (int trial = 0; trial < 3; ++trial) {
        const int d = trial % 4;
        const auto a = random_element(ext, rng, d);
        const auto b = random_element(ext, rng, (d + 1) % 4);
        const auto c = random_element(ext, rng, (d + 2) % 4);
        const auto ab = ext.mul(a, b);
        const auto pts = ext.orbit_points(std::max({ab.depth(), c.depth(), 0}) + 2);
        for (const auto& p : pts) {
          ASSERT_EQ(ext.phi_eval(ab, p), ext.phi_eval(a, p) * ext.phi_eval(b, p));
          ASSERT_EQ(ext.phi_eval(ext.star(a), p), std::conj(ext.phi_eval(a, p)));
        }
        ASSERT_TRUE(ext.estar_equal(ab, ext.mul(b, a)));
        ASSERT_TRUE(ext.estar_equal(ext.mul(ab, c), ext.mul(a, ext.mul(b, c))));
        ASSERT_TRUE(ext.estar_equal(ext.star(ab), ext.mul(ext.star(b), ext.star(a))));
        ASSERT_TRUE(ext.estar_equal(ext.mul(a, ext.add(b, c)), ext.add(ab, ext.mul(a, c))));
      }
    });
  }
}

TEST(EStarProperties, InjectiveSystemsCollapseAtEveryDepth) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto X = points(n);
    xprod::testing::for_each_partial_map(X, [&](const funalg::PartialMap& g) {
      if (!g.injective()) return;
      const ReversibleExtension ext(X, g);
      for (int N = 0; N <= 6; ++N) {
        const auto pts = ext.orbit_points(N);
        ASSERT_EQ(pts.size(), n);
        std::set<PointIndex> heads;
        for (const auto& p : pts) heads.insert(ReversibleExtension::projection_Phi(p));
        ASSERT_EQ(heads.size(), n);
      }
    });
  }
}
