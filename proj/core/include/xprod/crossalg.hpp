#pragma once

// Normal-form arithmetic in the crossed product A x_delta Z.
//
// An element is a finite sum  sum_k U*^k a_{-k} + a_0 + sum_k a_k U^k, stored
// as a map from signed degree to coefficient. Coefficients are kept
// normalized: a_k delta^k(1) = a_k and delta^k(1) a_{-k} = a_{-k}.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "xprod/backend.hpp"
#include "xprod/block_element.hpp"

namespace xprod::cross {

inline constexpr int kDegreeCap = 64;
inline constexpr std::size_t kTermCap = 100'000;

class CrossedElement {
 public:
  explicit CrossedElement(BackendPtr backend);

  const BackendPtr& backend() const { return backend_; }
  const std::map<int, BlockElement>& terms() const { return terms_; }

  /// Replaces the degree-k coefficient (normalized on the way in).
  void set(int k, const BlockElement& a);
  /// Adds to the degree-k coefficient.
  void accumulate(int k, const BlockElement& a);

  int min_degree() const;
  int max_degree() const;
  /// max |k| over stored terms, 0 when empty.
  int degree() const;
  /// Highest coefficient level.
  int level() const;
  /// Stored coefficient entries, summed over terms.
  std::size_t coefficient_entries() const;

 private:
  BlockElement normalize(int k, const BlockElement& a) const;

  BackendPtr backend_;
  std::map<int, BlockElement> terms_;
};

CrossedElement from_coefficient(const BackendPtr& backend, const BlockElement& a);
/// k > 0: delta^k(1) U^k; k < 0: U*^{|k|} delta^{|k|}(1); k = 0: the unit.
CrossedElement u_power(const BackendPtr& backend, int k);
CrossedElement cross_zero(const BackendPtr& backend);
CrossedElement cross_unit(const BackendPtr& backend);

CrossedElement cross_add(const CrossedElement& x, const CrossedElement& y);
CrossedElement cross_sub(const CrossedElement& x, const CrossedElement& y);
CrossedElement cross_scale(Complex s, const CrossedElement& x);
CrossedElement cross_mul(const CrossedElement& x, const CrossedElement& y);
CrossedElement cross_star(const CrossedElement& x);
CrossedElement cross_pow(const CrossedElement& x, int e);

/// N_k(x); the zero element of A when x has no degree-k term.
BlockElement coeff_N(const CrossedElement& x, int k);

/// Largest coefficient distance after aligning levels.
double cross_distance(const CrossedElement& x, const CrossedElement& y);

struct NormEstimate {
  std::vector<double> s;  // s_k, k = 1..s.size()
  bool truncated = false;
  std::string reason;
  double last() const { return s.empty() ? 0.0 : s.back(); }
};

/// s_k = ||N_0[(x x*)^{2^k}]||^{1/2^{k+1}} by repeated squaring, k = 1..k_max.
/// Stops early, marked truncated, at the term cap or when a resource guard trips.
NormEstimate norm_estimate(const CrossedElement& x, int k_max);

struct ZeroTest {
  bool by_n0 = false;      // ||N_0(x* x)|| <= 1e-9
  bool by_coeffs = false;  // every ||N_k(x)|| <= 1e-9
  double n0_norm = 0.0;
  double max_coeff_norm = 0.0;
  bool agree() const { return by_n0 == by_coeffs; }
};

ZeroTest zero_test(const CrossedElement& x);
bool is_zero(const CrossedElement& x);

struct SelfCheck {
  double transfer_residual = 0.0;
  double completeness_residual = 0.0;
  double multiplicativity_residual = 0.0;
  int samples = 0;
  bool ok() const;
};

/// Transfer identity, completeness and multiplicativity of delta on random
/// samples.
SelfCheck backend_self_check(const Backend& backend, int samples = 50, std::uint64_t seed = 0xB0C5);
/// Runs backend_self_check and throws ContractError if it fails.
BackendPtr register_backend(BackendPtr backend);

/// Random element with nonzero terms in degrees -deg..deg and coefficients at
/// the given level.
CrossedElement random_crossed(const BackendPtr& backend, std::mt19937_64& rng, int deg, int level = 0);

}  // namespace xprod::cross
