#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "xprod/ckalg.hpp"
#include "xprod/crossalg.hpp"
#include "xprod/errors.hpp"
#include "xprod/funalg.hpp"

using namespace xprod;
using namespace xprod::cross;

namespace {

BlockElement fun(std::initializer_list<double> v) {
  funalg::FunElement a(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) a(i++) = c;
  return funalg::FunBackend::to_element(a);
}

// A backend whose delta_* is off by a factor of two.
class ScaledTransfer final : public Backend {
 public:
  explicit ScaledTransfer(BackendPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "scaled"; }
  bool graded() const override { return inner_->graded(); }
  int max_level() const override { return inner_->max_level(); }
  std::vector<Eigen::Index> block_dims(int level) const override { return inner_->block_dims(level); }
  BlockElement lift(const BlockElement& x, int level) const override { return inner_->lift(x, level); }
  BlockElement delta(const BlockElement& x) const override { return inner_->delta(x); }
  BlockElement delta_star(const BlockElement& x) const override { return Complex(2.0) * inner_->delta_star(x); }
  BlockElement delta_star_transpose(const BlockElement& rho) const override {
    return Complex(2.0) * inner_->delta_star_transpose(rho);
  }
  std::vector<std::shared_ptr<const Functional>> functionals() const override { return inner_->functionals(); }

 private:
  BackendPtr inner_;
};

std::vector<BackendPtr> backends() {
  return {xprod::testing::chain3_backend(), xprod::testing::tail_cycle_backend(),
          std::make_shared<const ck::CKBackend>(xprod::testing::upper2(), 8),
          std::make_shared<const ck::CKBackend>(xprod::testing::full2(), 6)};
}

}  // namespace

TEST(CrossAlg, CoefficientEmbedding) {
  const BackendPtr B = xprod::testing::chain3_backend();
  const auto a = fun({1, 2, 3}), b = fun({4, 5, 6});
  EXPECT_EQ(cross_distance(cross_mul(cross_unit(B), from_coefficient(B, a)), from_coefficient(B, a)), 0.0);
  EXPECT_EQ(cross_distance(cross_mul(from_coefficient(B, a), from_coefficient(B, b)), from_coefficient(B, a.product(b))),
            0.0);
  EXPECT_TRUE(cross_mul(from_coefficient(B, B->zero()), u_power(B, 1)).terms().empty());
}

TEST(CrossAlg, PowersOfU) {
  for (const auto& B : backends()) {
    EXPECT_LT(cross_distance(cross_mul(u_power(B, 1), u_power(B, -1)), from_coefficient(B, B->delta_unit(1))), 1e-12);
    EXPECT_LT(cross_distance(cross_mul(u_power(B, -1), u_power(B, 1)),
                             from_coefficient(B, B->delta_star(B->unit(0)))),
              1e-12);
    EXPECT_EQ(cross_distance(u_power(B, 0), cross_unit(B)), 0.0);
    const auto U = u_power(B, 1);
    EXPECT_LT(cross_distance(cross_mul(cross_mul(U, cross_star(U)), U), U), 1e-12);
    EXPECT_LT(cross_distance(cross_pow(U, 3), u_power(B, 3)), 1e-12);
  }
}

TEST(CrossAlg, TermRules) {
  const BackendPtr B = xprod::testing::chain3_backend();
  const auto a = fun({1, 2, 3}), b = fun({5, 7, 11});
  const auto U = u_power(B, 1), Us = u_power(B, -1);
  const auto aU = cross_mul(from_coefficient(B, a), U);
  const auto bU = cross_mul(from_coefficient(B, b), U);
  const auto Usb = cross_mul(Us, from_coefficient(B, b));
  const auto Usa = cross_mul(Us, from_coefficient(B, a));

  const auto x = cross_mul(aU, bU);
  ASSERT_EQ(x.terms().size(), 1u);
  EXPECT_LT((coeff_N(x, 2) - a.product(B->delta(b)).product(B->delta_unit(2))).max_abs(), 1e-12);

  const auto y = cross_mul(aU, Usb);
  EXPECT_LT((coeff_N(y, 0) - a.product(B->delta_unit(1)).product(b)).max_abs(), 1e-12);
  EXPECT_EQ(y.terms().size(), 1u);

  const auto z = cross_mul(Usa, bU);
  EXPECT_LT((coeff_N(z, 0) - B->delta_star(a.product(b))).max_abs(), 1e-12);
}

TEST(CrossAlg, Star) {
  const BackendPtr B = xprod::testing::chain3_backend();
  const auto a = fun({1, 2, 3});
  const auto aU = cross_mul(from_coefficient(B, a), u_power(B, 1));
  const auto expected = cross_mul(u_power(B, -1), from_coefficient(B, a.adjoint()));
  EXPECT_LT(cross_distance(cross_star(aU), expected), 1e-12);
  std::mt19937_64 rng(2);
  for (const auto& Bk : backends()) {
    const auto x = random_crossed(Bk, rng, 2);
    const auto y = random_crossed(Bk, rng, 1);
    EXPECT_LT(cross_distance(cross_star(cross_star(x)), x), 1e-12);
    EXPECT_LT(cross_distance(cross_star(cross_mul(x, y)), cross_mul(cross_star(y), cross_star(x))), 1e-9);
  }
}

TEST(CrossAlg, Coefficients) {
  const BackendPtr B = xprod::testing::chain3_backend();
  const auto a0 = fun({1, 2, 3}), a1 = fun({4, 5, 6});
  const auto x = cross_add(from_coefficient(B, a0), cross_mul(from_coefficient(B, a1), u_power(B, 1)));
  EXPECT_EQ((coeff_N(x, 1) - a1.product(B->delta_unit(1))).max_abs(), 0.0);
  EXPECT_EQ((coeff_N(x, 0) - a0).max_abs(), 0.0);
  EXPECT_TRUE(coeff_N(x, -1).is_exact_zero());
  const auto U = u_power(B, 1);
  EXPECT_EQ((coeff_N(cross_mul(cross_star(U), U), 0) - B->delta_star(B->unit(0))).max_abs(), 0.0);
  std::mt19937_64 rng(4);
  const auto p = random_crossed(B, rng, 2), q = random_crossed(B, rng, 2);
  for (int k = -2; k <= 2; ++k)
    EXPECT_LT((coeff_N(cross_add(p, q), k) - (coeff_N(p, k) + coeff_N(q, k))).max_abs(), 1e-12);
}

TEST(CrossAlg, NormEstimateExamples) {
  for (const auto& B : backends()) {
    std::mt19937_64 rng(6);
    const auto a = B->random_element(rng, 0);
    const auto est = norm_estimate(from_coefficient(B, a), 4);
    ASSERT_EQ(est.s.size(), 4u);
    for (double s : est.s) EXPECT_NEAR(s, a.norm(), 1e-9 * a.norm());
  }
  const BackendPtr B = xprod::testing::chain3_backend();
  const auto est = norm_estimate(u_power(B, 1), 5);
  for (double s : est.s) EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_THROW(norm_estimate(u_power(B, 1), 0), ContractError);
}

TEST(CrossAlg, ZeroTest) {
  const BackendPtr B = xprod::testing::chain3_backend();
  EXPECT_TRUE(is_zero(cross_zero(B)));
  const auto U = u_power(B, 1);
  EXPECT_TRUE(is_zero(cross_sub(U, u_power(B, 1))));
  const auto x = cross_mul(from_coefficient(B, B->sub(B->unit(), B->delta_unit(1))), U);
  EXPECT_TRUE(x.terms().empty());
  EXPECT_TRUE(is_zero(x));
  EXPECT_FALSE(is_zero(U));
  const auto t = zero_test(U);
  EXPECT_TRUE(t.agree());
}

TEST(CrossAlg, CentralSupport) {
  std::mt19937_64 rng(8);
  for (const auto& B : backends()) {
    const auto p = cross_mul(u_power(B, -1), u_power(B, 1));
    for (int i = 0; i < 5; ++i) {
      const auto a = from_coefficient(B, B->random_element(rng, 0));
      EXPECT_LT(cross_distance(cross_mul(p, a), cross_mul(a, p)), 1e-9);
    }
  }
}

TEST(CrossAlgProperties, RingAxioms) {
  std::mt19937_64 rng(10);
  for (const auto& B : backends()) {
    for (int trial = 0; trial < 20; ++trial) {
      const int deg = B->graded() && B->max_level() < 8 ? 1 : 2;
      const auto x = random_crossed(B, rng, deg), y = random_crossed(B, rng, deg), z = random_crossed(B, rng, deg);
      EXPECT_LT(cross_distance(cross_mul(cross_mul(x, y), z), cross_mul(x, cross_mul(y, z))), 1e-9);
      EXPECT_LT(cross_distance(cross_mul(x, cross_add(y, z)), cross_add(cross_mul(x, y), cross_mul(x, z))), 1e-9);
      EXPECT_LT(cross_distance(cross_mul(cross_add(x, y), z), cross_add(cross_mul(x, z), cross_mul(y, z))), 1e-9);
    }
  }
}

TEST(CrossAlg, RegistrationSelfCheck) {
  for (const auto& B : backends()) {
    const auto sc = backend_self_check(*B);
    EXPECT_TRUE(sc.ok()) << B->name() << " " << sc.transfer_residual << " " << sc.completeness_residual;
    EXPECT_NO_THROW(register_backend(B));
  }
  EXPECT_THROW(register_backend(std::make_shared<ScaledTransfer>(xprod::testing::chain3_backend())), ContractError);
}

TEST(CrossAlg, DegreeGuard) {
  const BackendPtr B = xprod::testing::tail_cycle_backend();
  const auto U40 = u_power(B, 40);
  EXPECT_THROW(cross_mul(U40, U40), ResourceError);
  EXPECT_THROW(u_power(B, 65), ResourceError);
}

TEST(CrossAlg, BackendMismatch) {
  const auto x = cross_unit(xprod::testing::chain3_backend());
  const auto y = cross_unit(xprod::testing::chain3_backend());
  EXPECT_THROW(cross_mul(x, y), ContractError);
}
