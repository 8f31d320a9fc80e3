#include "xprod/crossalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "xprod/errors.hpp"

namespace xprod::cross {

CrossedElement::CrossedElement(BackendPtr backend) : backend_(std::move(backend)) {
  if (!backend_) throw ContractError("crossed element without a backend");
}

BlockElement CrossedElement::normalize(int k, const BlockElement& a) const {
  if (k > 0) return backend_->mul(a, backend_->delta_unit(k));
  if (k < 0) return backend_->mul(backend_->delta_unit(-k), a);
  return a;
}

void CrossedElement::set(int k, const BlockElement& a) {
  if (std::abs(k) > kDegreeCap) throw ResourceError("degree " + std::to_string(k) + " exceeds the cap");
  BlockElement n = normalize(k, a);
  if (n.is_exact_zero()) {
    terms_.erase(k);
    return;
  }
  terms_.insert_or_assign(k, std::move(n));
}

void CrossedElement::accumulate(int k, const BlockElement& a) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    set(k, a);
    return;
  }
  BlockElement sum = backend_->add(it->second, a);
  set(k, sum);
}

int CrossedElement::min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int CrossedElement::max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
int CrossedElement::degree() const { return std::max(std::abs(min_degree()), std::abs(max_degree())); }

int CrossedElement::level() const {
  int l = 0;
  for (const auto& [k, a] : terms_) l = std::max(l, a.level());
  return l;
}

std::size_t CrossedElement::coefficient_entries() const {
  std::size_t n = 0;
  for (const auto& [k, a] : terms_) n += a.entry_count();
  return n;
}

CrossedElement from_coefficient(const BackendPtr& backend, const BlockElement& a) {
  CrossedElement x(backend);
  x.set(0, a);
  return x;
}

CrossedElement u_power(const BackendPtr& backend, int k) {
  CrossedElement x(backend);
  x.set(k, backend->delta_unit(std::abs(k)));
  return x;
}

CrossedElement cross_zero(const BackendPtr& backend) { return CrossedElement(backend); }
CrossedElement cross_unit(const BackendPtr& backend) { return from_coefficient(backend, backend->unit(0)); }

namespace {

void same_backend(const CrossedElement& x, const CrossedElement& y) {
  if (x.backend() != y.backend()) throw ContractError("crossed elements over different backends");
}

// Product of a term of signed degree d1 with one of degree d2. Degree d >= 0
// means a U^d, d < 0 means U*^{|d|} a.
void term_product(const Backend& B, int d1, const BlockElement& a, int d2, const BlockElement& b,
                  CrossedElement& out) {
  if (d1 >= 0 && d2 >= 0) {
    out.accumulate(d1 + d2, B.mul(a, B.delta_power(b, d1)));
  } else if (d1 < 0 && d2 < 0) {
    out.accumulate(d1 + d2, B.mul(B.delta_power(a, -d2), b));
  } else if (d1 >= 0) {
    const int m = d1, n = -d2;
    if (m >= n) {
      out.accumulate(m - n, B.mul(B.mul(a, B.delta_unit(m)), B.delta_power(b, m - n)));
    } else {
      out.accumulate(m - n, B.mul(B.delta_power(B.mul(a, B.delta_unit(m)), n - m), b));
    }
  } else {
    const int m = -d1, n = d2;
    const BlockElement c = B.mul(a, b);
    if (m >= n) {
      out.accumulate(n - m, B.delta_star_power(c, n));
    } else {
      out.accumulate(n - m, B.delta_star_power(c, m));
    }
  }
}

}  // namespace

CrossedElement cross_add(const CrossedElement& x, const CrossedElement& y) {
  same_backend(x, y);
  CrossedElement out = x;
  for (const auto& [k, b] : y.terms()) out.accumulate(k, b);
  return out;
}

CrossedElement cross_scale(Complex s, const CrossedElement& x) {
  CrossedElement out(x.backend());
  if (s == Complex(0.0, 0.0)) return out;
  for (const auto& [k, a] : x.terms()) out.set(k, s * a);
  return out;
}

CrossedElement cross_sub(const CrossedElement& x, const CrossedElement& y) {
  return cross_add(x, cross_scale(-1.0, y));
}

CrossedElement cross_mul(const CrossedElement& x, const CrossedElement& y) {
  same_backend(x, y);
  const int top = std::max(std::abs(x.min_degree() + y.min_degree()), std::abs(x.max_degree() + y.max_degree()));
  if (!x.terms().empty() && !y.terms().empty() && top > kDegreeCap)
    throw ResourceError("product degree " + std::to_string(top) + " exceeds the cap");
  CrossedElement out(x.backend());
  const Backend& B = *x.backend();
  for (const auto& [d1, a] : x.terms())
    for (const auto& [d2, b] : y.terms()) term_product(B, d1, a, d2, b, out);
  return out;
}

CrossedElement cross_star(const CrossedElement& x) {
  CrossedElement out(x.backend());
  for (const auto& [k, a] : x.terms()) out.set(-k, a.adjoint());
  return out;
}

CrossedElement cross_pow(const CrossedElement& x, int e) {
  if (e < 0) throw ContractError("negative power of a crossed element");
  CrossedElement out = cross_unit(x.backend());
  for (int i = 0; i < e; ++i) out = cross_mul(out, x);
  return out;
}

BlockElement coeff_N(const CrossedElement& x, int k) {
  auto it = x.terms().find(k);
  if (it == x.terms().end()) return x.backend()->zero(0);
  return it->second;
}

double cross_distance(const CrossedElement& x, const CrossedElement& y) {
  same_backend(x, y);
  const CrossedElement d = cross_sub(x, y);
  double worst = 0.0;
  for (const auto& [k, a] : d.terms()) worst = std::max(worst, a.max_abs());
  return worst;
}

NormEstimate norm_estimate(const CrossedElement& x, int k_max) {
  if (k_max < 1) throw ContractError("norm_estimate needs k_max >= 1");
  NormEstimate est;
  CrossedElement y = cross_mul(x, cross_star(x));
  double log_scale = 0.0;  // true (x x*)^{2^k} = exp(log_scale) * y
  auto rescale = [&](CrossedElement& z) {
    double c = 0.0;
    for (const auto& [k, a] : z.terms()) c = std::max(c, a.max_abs());
    if (c > 0.0) {
      z = cross_scale(1.0 / c, z);
      log_scale += std::log(c);
    }
  };
  rescale(y);
  for (int k = 1; k <= k_max; ++k) {
    if (y.coefficient_entries() > kTermCap) {
      est.truncated = true;
      est.reason = "coefficient count exceeds " + std::to_string(kTermCap);
      break;
    }
    try {
      y = cross_mul(y, y);
    } catch (const ResourceError& e) {
      est.truncated = true;
      est.reason = e.what();
      break;
    }
    log_scale *= 2.0;
    rescale(y);
    const double n0 = coeff_N(y, 0).norm();
    const double exponent = std::ldexp(1.0, -(k + 1));
    est.s.push_back(n0 > 0.0 ? std::exp((log_scale + std::log(n0)) * exponent) : 0.0);
  }
  return est;
}

ZeroTest zero_test(const CrossedElement& x) {
  ZeroTest t;
  t.n0_norm = coeff_N(cross_mul(cross_star(x), x), 0).norm();
  for (const auto& [k, a] : x.terms()) t.max_coeff_norm = std::max(t.max_coeff_norm, a.norm());
  t.by_n0 = t.n0_norm <= tol::kFloat;
  t.by_coeffs = t.max_coeff_norm <= tol::kFloat;
  return t;
}

bool is_zero(const CrossedElement& x) { return zero_test(x).by_n0; }

bool SelfCheck::ok() const {
  return samples > 0 && transfer_residual <= tol::kFloat && completeness_residual <= tol::kFloat &&
         multiplicativity_residual <= tol::kFloat;
}

SelfCheck backend_self_check(const Backend& B, int samples, std::uint64_t seed) {
  SelfCheck sc;
  std::mt19937_64 rng(seed);
  const int top = B.graded() ? std::min(1, B.max_level() - 1) : 0;
  for (int i = 0; i < samples; ++i) {
    const int level = top > 0 ? i % (top + 1) : 0;
    const BlockElement a = B.random_element(rng, level);
    const BlockElement b = B.random_element(rng, B.clamp_level(level + 1));
    const BlockElement c = B.random_element(rng, level);
    const double scale = 1.0 + a.norm() * (b.norm() + c.norm());
    const BlockElement lhs = B.delta_star(B.mul(B.delta(a), b));
    const BlockElement rhs = B.mul(B.lift(a, lhs.level()), B.delta_star(b));
    sc.transfer_residual = std::max(sc.transfer_residual, B.distance(lhs, rhs) / scale);
    const BlockElement d1 = B.delta_unit(1);
    const BlockElement comp = B.mul(B.mul(d1, b), d1);
    sc.completeness_residual =
        std::max(sc.completeness_residual, B.distance(B.delta(B.delta_star(b)), comp) / (1.0 + b.norm()));
    sc.multiplicativity_residual = std::max(
        sc.multiplicativity_residual, B.distance(B.delta(B.mul(a, c)), B.mul(B.delta(a), B.delta(c))) / scale);
    ++sc.samples;
  }
  return sc;
}

BackendPtr register_backend(BackendPtr backend) {
  if (!backend) throw ContractError("null backend");
  const SelfCheck sc = backend_self_check(*backend);
  if (!sc.ok())
    throw ContractError("backend " + backend->name() + " failed its self-check (transfer " +
                        std::to_string(sc.transfer_residual) + ", completeness " +
                        std::to_string(sc.completeness_residual) + ")");
  return backend;
}

CrossedElement random_crossed(const BackendPtr& backend, std::mt19937_64& rng, int deg, int level) {
  CrossedElement x(backend);
  for (int k = -deg; k <= deg; ++k) x.set(k, backend->random_element(rng, level));
  return x;
}

}  // namespace xprod::cross
