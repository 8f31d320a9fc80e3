#include "xprod/dynsys_ext.hpp"

#include <algorithm>
#include <functional>

#include "xprod/errors.hpp"

namespace xprod::dynsys {

ReversibleExtension::ReversibleExtension(PointSet X, PartialMap gamma)
    : X_(std::move(X)), gamma_(std::move(gamma)) {
  fibers_ = gamma_.fibers();
  delta_ = funalg::endomorphism_from_map(X_, gamma_);
  for (int n = 0; n <= static_cast<int>(X_.size()); ++n)
    masks_.push_back(funalg::indicator(X_.size(), funalg::iterated_domain(gamma_, n)));
}

const FunElement& ReversibleExtension::domain_mask(int n) const {
  if (n < 0) throw ContractError("negative mask index");
  return masks_[std::min<std::size_t>(static_cast<std::size_t>(n), masks_.size() - 1)];
}

std::vector<OrbitPoint> ReversibleExtension::orbit_points(int depth) const {
  if (depth < 0) throw ContractError("orbit depth must be nonnegative");
  std::vector<OrbitPoint> out;
  std::vector<PointIndex> chain;
  std::function<void(PointIndex)> walk = [&](PointIndex x) {
    chain.push_back(x);
    if (fibers_[x].empty()) {
      out.push_back(OrbitPoint{chain, true});
    } else if (static_cast<int>(chain.size()) == depth + 1) {
      out.push_back(OrbitPoint{chain, false});
    } else {
      for (auto y : fibers_[x]) walk(y);
    }
    chain.pop_back();
  };
  for (PointIndex x = 0; x < X_.size(); ++x) walk(x);
  std::sort(out.begin(), out.end());
  return out;
}

OrbitPoint ReversibleExtension::gamma_tilde(const OrbitPoint& p) const {
  if (p.entries.empty()) throw ContractError("empty orbit point");
  const auto& g = gamma_(p.entries.front());
  if (!g) throw DomainError("gamma_tilde: x_0 = '" + X_.label(p.entries.front()) + "' is outside Delta");
  OrbitPoint q;
  q.entries.reserve(p.entries.size() + 1);
  q.entries.push_back(*g);
  q.entries.insert(q.entries.end(), p.entries.begin(), p.entries.end());
  q.terminated = p.terminated;
  return q;
}

OrbitPoint ReversibleExtension::gamma_tilde_inv(const OrbitPoint& p) const {
  if (p.entries.size() < 2) {
    if (p.terminated) throw DomainError("gamma_tilde_inv: x_1 = 0 on a terminated point");
    throw ContractError("gamma_tilde_inv: cylinder too shallow to read x_1");
  }
  return OrbitPoint{{p.entries.begin() + 1, p.entries.end()}, p.terminated};
}

PointIndex ReversibleExtension::projection_Phi(const OrbitPoint& p) {
  if (p.entries.empty()) throw ContractError("empty orbit point");
  return p.entries.front();
}

EStarElement ReversibleExtension::make_element(std::vector<FunElement> coeffs) const {
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n].size() != static_cast<Eigen::Index>(X_.size()))
      throw ValidationError("E_* coefficient has wrong length");
    coeffs[n] = coeffs[n].cwiseProduct(domain_mask(static_cast<int>(n)));
  }
  while (!coeffs.empty() && coeffs.back().isZero(0.0)) coeffs.pop_back();
  return EStarElement{std::move(coeffs)};
}

EStarElement ReversibleExtension::unit() const {
  return make_element({FunElement::Ones(static_cast<Eigen::Index>(X_.size()))});
}

EStarElement ReversibleExtension::add(const EStarElement& a, const EStarElement& b) const {
  std::vector<FunElement> c(std::max(a.coeffs.size(), b.coeffs.size()),
                            FunElement::Zero(static_cast<Eigen::Index>(X_.size())));
  for (std::size_t n = 0; n < a.coeffs.size(); ++n) c[n] += a.coeffs[n];
  for (std::size_t n = 0; n < b.coeffs.size(); ++n) c[n] += b.coeffs[n];
  return make_element(std::move(c));
}

EStarElement ReversibleExtension::scale(Complex s, const EStarElement& a) const {
  std::vector<FunElement> c = a.coeffs;
  for (auto& v : c) v *= s;
  return make_element(std::move(c));
}

EStarElement ReversibleExtension::star(const EStarElement& a) const {
  std::vector<FunElement> c = a.coeffs;
  for (auto& v : c) v = v.conjugate();
  return make_element(std::move(c));
}

FunElement ReversibleExtension::delta_power(const FunElement& a, int j) const {
  FunElement out = a;
  for (int i = 0; i < j; ++i) out = delta_ * out;
  return out;
}

EStarElement ReversibleExtension::mul(const EStarElement& a, const EStarElement& b) const {
  const auto size = static_cast<Eigen::Index>(X_.size());
  const std::size_t len = std::max(a.coeffs.size(), b.coeffs.size());
  auto coeff = [&](const EStarElement& e, std::size_t n) -> FunElement {
    return n < e.coeffs.size() ? e.coeffs[n] : FunElement::Zero(size);
  };
  // (a.b)_n = a_n sum_{j=0..n} delta^j(b_{n-j}) + b_n sum_{j=1..n} delta^j(a_{n-j})
  std::vector<FunElement> c(len, FunElement::Zero(size));
  for (std::size_t n = 0; n < len; ++n) {
    FunElement sb = FunElement::Zero(size);
    for (std::size_t j = 0; j <= n; ++j) sb += delta_power(coeff(b, n - j), static_cast<int>(j));
    FunElement sa = FunElement::Zero(size);
    for (std::size_t j = 1; j <= n; ++j) sa += delta_power(coeff(a, n - j), static_cast<int>(j));
    c[n] = coeff(a, n).cwiseProduct(sb) + coeff(b, n).cwiseProduct(sa);
    const FunElement outside = c[n].cwiseProduct(
        FunElement::Ones(size) - domain_mask(static_cast<int>(n)));
    if (!outside.isZero(0.0)) throw std::logic_error("E_* product left A_n");
  }
  return make_element(std::move(c));
}

Complex ReversibleExtension::phi_eval(const EStarElement& a, const OrbitPoint& p) const {
  if (!p.terminated && p.depth() < a.depth())
    throw ContractError("phi_eval: orbit point shallower than the element");
  Complex acc{0.0, 0.0};
  for (std::size_t n = 0; n < a.coeffs.size() && n < p.entries.size(); ++n)
    acc += a.coeffs[n](static_cast<Eigen::Index>(p.entries[n]));
  return acc;
}

bool ReversibleExtension::estar_equal(const EStarElement& a, const EStarElement& b, double tol) const {
  const int depth = std::max({a.depth(), b.depth(), 0});
  for (const auto& p : orbit_points(depth))
    if (std::abs(phi_eval(a, p) - phi_eval(b, p)) > tol) return false;
  return true;
}

std::size_t count_terminated(const std::vector<OrbitPoint>& pts) {
  return static_cast<std::size_t>(
      std::count_if(pts.begin(), pts.end(), [](const OrbitPoint& p) { return p.terminated; }));
}

}  // namespace xprod::dynsys
