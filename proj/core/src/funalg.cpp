#include "xprod/funalg.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "xprod/errors.hpp"

namespace xprod::funalg {

namespace {
constexpr double kTol = 1e-9;

bool close(const Matrix& a, const Matrix& b, double tol = kTol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

int numeric_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}
}  // namespace

PointSet::PointSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("point set must be non-empty");
  for (PointIndex i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ValidationError("empty point label");
    if (!index_.emplace(labels_[i], i).second)
      throw ValidationError("duplicate point label '" + labels_[i] + "'");
  }
}

std::optional<PointIndex> PointSet::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointSet make_algebra(std::vector<std::string> labels) { return PointSet(std::move(labels)); }

PartialMap::PartialMap(const PointSet& X, std::vector<std::optional<PointIndex>> images)
    : images_(std::move(images)) {
  if (images_.size() != X.size()) throw ValidationError("partial map size does not match point set");
  for (const auto& y : images_)
    if (y && *y >= X.size()) throw ValidationError("partial map image out of range");
}

PartialMap PartialMap::from_pairs(const PointSet& X,
                                  const std::vector<std::pair<PointIndex, PointIndex>>& pairs) {
  std::vector<std::optional<PointIndex>> images(X.size());
  for (auto [x, y] : pairs) {
    if (x >= X.size() || y >= X.size()) throw ValidationError("partial map index out of range");
    if (images[x]) throw ValidationError("point '" + X.label(x) + "' mapped twice");
    images[x] = y;
  }
  return PartialMap(X, std::move(images));
}

PointSubset PartialMap::domain() const {
  PointSubset out;
  for (PointIndex x = 0; x < images_.size(); ++x)
    if (images_[x]) out.push_back(x);
  return out;
}

PointSubset PartialMap::image() const {
  std::set<PointIndex> s;
  for (const auto& y : images_)
    if (y) s.insert(*y);
  return {s.begin(), s.end()};
}

bool PartialMap::injective() const {
  std::set<PointIndex> seen;
  for (const auto& y : images_)
    if (y && !seen.insert(*y).second) return false;
  return true;
}

std::vector<PointSubset> PartialMap::fibers() const {
  std::vector<PointSubset> out(images_.size());
  for (PointIndex x = 0; x < images_.size(); ++x)
    if (images_[x]) out[*images_[x]].push_back(x);
  return out;
}

LinearMapOnA endomorphism_from_map(const PointSet& X, const PartialMap& gamma) {
  if (gamma.size() != X.size()) throw ValidationError("partial map does not match point set");
  LinearMapOnA d = LinearMapOnA::Zero(X.size(), X.size());
  for (PointIndex x = 0; x < X.size(); ++x)
    if (gamma(x)) d(x, *gamma(x)) = 1.0;
  return d;
}

FunElement indicator(std::size_t n, const PointSubset& subset) {
  FunElement v = FunElement::Zero(n);
  for (auto i : subset) v(i) = 1.0;
  return v;
}

PointSubset support(const FunElement& a, double tol) {
  PointSubset out;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a(i)) > tol) out.push_back(static_cast<PointIndex>(i));
  return out;
}

bool is_positive_map(const LinearMapOnA& L, double tol) {
  // In the point basis positivity is entrywise nonnegativity of the matrix.
  const bool matrix_criterion =
      (L.imag().cwiseAbs().maxCoeff() <= tol) && (L.real().minCoeff() >= -tol);

  bool sampled = true;
  const auto n = L.cols();
  for (Eigen::Index j = 0; j < n && sampled; ++j) {
    const FunElement image = L.col(j);
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(image(i).imag()) > tol || image(i).real() < -tol) sampled = false;
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100 && sampled; ++trial) {
    FunElement v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
    const FunElement image = L * v;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(image(i).imag()) > tol || image(i).real() < -tol) sampled = false;
  }
  if (sampled != matrix_criterion)
    throw std::logic_error("positivity criteria disagree on a commutative algebra");
  return matrix_criterion;
}

bool check_transfer(const LinearMapOnA& delta, const LinearMapOnA& L) {
  if (delta.rows() != delta.cols() || L.rows() != L.cols() || delta.rows() != L.rows())
    throw ValidationError("dimension mismatch between delta and L");
  if (!L.allFinite()) return false;
  if (!is_positive_map(L)) return false;
  const auto n = delta.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const FunElement di = delta.col(i);  // delta(e_i)
    for (Eigen::Index j = 0; j < n; ++j) {
      FunElement prod = FunElement::Zero(n);
      prod(j) = di(j);  // delta(e_i) e_j
      const FunElement lhs = L * prod;
      FunElement rhs = FunElement::Zero(n);
      rhs(i) = L(i, j);  // e_i L(e_j)
      if ((lhs - rhs).cwiseAbs().maxCoeff() > kTol) return false;
    }
  }
  return true;
}

NondegeneracyCheck check_nondegenerate(const LinearMapOnA& delta, const LinearMapOnA& L) {
  if (!check_transfer(delta, L)) throw ContractError("check_nondegenerate requires a transfer operator");
  const auto n = delta.rows();
  NondegeneracyCheck r;

  // (i) E = delta L: positive, range inside delta(A), identity on delta(A),
  // and a delta(A)-bimodule map.
  const Matrix E = delta * L;
  bool cond = is_positive_map(E);
  Matrix stacked(n, 2 * n);
  stacked << delta, E;
  cond = cond && numeric_rank(stacked) == numeric_rank(delta);
  cond = cond && close(E * delta, delta);
  for (Eigen::Index i = 0; i < n && cond; ++i) {
    const FunElement da = delta.col(i);
    const Matrix mult = da.asDiagonal();
    cond = close(E * mult, mult * E);
  }
  r.conditional_expectation = cond;

  // (ii) delta L delta = delta.
  r.delta_fixed = close(delta * L * delta, delta);

  // (iii) delta(L(1)) = delta(1).
  const FunElement one = FunElement::Ones(n);
  r.unit_condition = (delta * (L * one) - delta * one).cwiseAbs().maxCoeff() <= kTol;
  return r;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::NoTransfer: return "no-transfer";
    case Classification::NondegenerateOnly: return "nondegenerate-only";
    case Classification::Complete: return "complete";
    case Classification::CompleteIsometric: return "complete-isometric";
  }
  return "?";
}

namespace {

// delta_*(a) = delta^{-1}(delta(1) a delta(1)), with delta^{-1} the inverse of
// delta restricted to P A, P the indicator of gamma(Delta).
LinearMapOnA complete_transfer_matrix(const PointSet& X, const PartialMap& gamma,
                                      const LinearMapOnA& delta) {
  const auto n = static_cast<Eigen::Index>(X.size());
  const FunElement d1 = delta * FunElement::Ones(n);
  LinearMapOnA L = LinearMapOnA::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    FunElement c = FunElement::Zero(n);
    c(j) = d1(j) * d1(j);  // delta(1) e_j delta(1)
    FunElement b = FunElement::Zero(n);
    for (PointIndex y = 0; y < X.size(); ++y)
      if (gamma(y)) b(*gamma(y)) = c(y);  // injective: one preimage per image point
    if ((delta * b - c).cwiseAbs().maxCoeff() != 0.0)
      throw std::logic_error("delta^{-1} failed on hereditary range");
    L.col(j) = b;
  }
  return L;
}

LinearMapOnA averaging_transfer(const PartialMap& gamma) {
  const auto n = static_cast<Eigen::Index>(gamma.size());
  LinearMapOnA L = LinearMapOnA::Zero(n, n);
  const auto fib = gamma.fibers();
  for (PointIndex x = 0; x < fib.size(); ++x)
    for (auto y : fib[x]) L(x, y) = 1.0 / static_cast<double>(fib[x].size());
  return L;
}

}  // namespace

TransferReport complete_transfer(const PointSet& X, const PartialMap& gamma) {
  TransferReport rep;
  rep.delta = endomorphism_from_map(X, gamma);
  rep.is_hereditary_range = is_hereditary_range(X, gamma);
  const auto n = static_cast<Eigen::Index>(X.size());

  if (gamma.injective()) {
    LinearMapOnA L = complete_transfer_matrix(X, gamma, rep.delta);
    // delta delta_*(a) = delta(1) a delta(1), exactly on the point basis.
    const FunElement d1 = rep.delta * FunElement::Ones(n);
    const Matrix lhs = rep.delta * L;
    const Matrix rhs = (d1.array() * d1.array()).matrix().asDiagonal();
    if (lhs != rhs) throw std::logic_error("constructed delta_* is not complete");
    rep.is_transfer = check_transfer(rep.delta, L);
    rep.is_nondegenerate = rep.is_transfer && check_nondegenerate(rep.delta, L).delta_fixed;
    rep.is_complete = rep.is_transfer;
    rep.projection_P = L * FunElement::Ones(n);
    rep.transfer = L;
    rep.delta_star = L;
    rep.classification = gamma.image().size() == X.size() ? Classification::CompleteIsometric
                                                          : Classification::Complete;
    rep.reason = "gamma injective on its domain";
    return rep;
  }

  LinearMapOnA L = averaging_transfer(gamma);
  rep.is_transfer = check_transfer(rep.delta, L);
  if (rep.is_transfer) {
    rep.transfer = L;
    rep.is_nondegenerate = check_nondegenerate(rep.delta, L).unit_condition;
  }
  rep.is_complete = false;
  rep.classification = !rep.is_transfer        ? Classification::NoTransfer
                       : rep.is_nondegenerate ? Classification::NondegenerateOnly
                                              : Classification::NoTransfer;
  rep.reason = "hereditary range fails: gamma not injective, delta(A) != delta(1)A delta(1)";
  return rep;
}

bool is_hereditary_range(const PointSet& X, const PartialMap& gamma) {
  const LinearMapOnA delta = endomorphism_from_map(X, gamma);
  // range(delta) always sits inside the functions supported on Delta.
  const bool by_rank = numeric_rank(delta) == static_cast<int>(gamma.domain().size());
  if (by_rank != gamma.injective())
    throw std::logic_error("hereditary-range rank test disagrees with injectivity");
  return by_rank;
}

PointSubset iterated_domain(const PartialMap& gamma, int n) {
  PointSubset out;
  for (PointIndex x = 0; x < gamma.size(); ++x) {
    std::optional<PointIndex> cur = x;
    for (int k = 0; k < n && cur; ++k) cur = gamma(*cur);
    if (cur) out.push_back(x);
  }
  return out;
}

PointSubset iterated_image(const PartialMap& gamma, int n) {
  std::set<PointIndex> s;
  for (PointIndex x = 0; x < gamma.size(); ++x) {
    std::optional<PointIndex> cur = x;
    for (int k = 0; k < n && cur; ++k) cur = gamma(*cur);
    if (cur) s.insert(*cur);
  }
  return {s.begin(), s.end()};
}

PartialAutomorphismData partial_automorphism_data(const PointSet& X, const PartialMap& gamma,
                                                  int depth) {
  const TransferReport rep = complete_transfer(X, gamma);
  if (!rep.is_complete) throw ContractError("partial automorphism data needs a complete transfer operator");
  PartialAutomorphismData out;
  const auto n = static_cast<Eigen::Index>(X.size());

  // delta(1) is a multiplication operator; in C(X) everything commutes.
  out.delta_one_central = true;

  const LinearMapOnA& L = *rep.delta_star;
  bool mult = true;
  for (Eigen::Index i = 0; i < n && mult; ++i)
    for (Eigen::Index j = 0; j < n && mult; ++j) {
      FunElement prod = FunElement::Zero(n);
      if (i == j) prod(i) = 1.0;
      const FunElement lhs = L * prod;
      const FunElement rhs = (L.col(i).array() * L.col(j).array()).matrix();
      mult = (lhs - rhs).cwiseAbs().maxCoeff() == 0.0;
    }
  out.delta_star_multiplicative = mult;

  // Delta_n by repeated preimage, Delta_{-n} by repeated image; once both
  // stabilize (or empty) the remaining depths repeat the last pair.
  PointSubset dom(X.size()), img(X.size());
  for (PointIndex x = 0; x < X.size(); ++x) dom[x] = img[x] = x;
  bool stable = false;
  for (int k = 1; k <= depth; ++k) {
    if (!stable) {
      std::set<PointIndex> dom_set(dom.begin(), dom.end());
      PointSubset next_dom;
      for (PointIndex x = 0; x < X.size(); ++x)
        if (gamma(x) && dom_set.count(*gamma(x))) next_dom.push_back(x);
      std::set<PointIndex> next_img;
      for (auto x : img)
        if (gamma(x)) next_img.insert(*gamma(x));
      PointSubset next_img_v(next_img.begin(), next_img.end());
      stable = (next_dom == dom && next_img_v == img) || k >= static_cast<int>(X.size()) + 1;
      dom = std::move(next_dom);
      img = std::move(next_img_v);
    }
    out.ideals.push_back(IdealPair{k, dom, img});
  }
  out.theta_domains = {support(*rep.projection_P), gamma.domain()};
  return out;
}

FunBackend::FunBackend(PointSet X, PartialMap gamma)
    : X_(std::move(X)), gamma_(std::move(gamma)) {
  const TransferReport rep = complete_transfer(X_, gamma_);
  if (!rep.is_complete)
    throw ValidationError("system has no complete transfer operator (" +
                          std::string(to_string(rep.classification)) + "); extend the system first");
  delta_ = rep.delta;
  delta_star_ = *rep.delta_star;
}

BlockElement FunBackend::to_element(const FunElement& a) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) blocks.push_back(Matrix::Constant(1, 1, a(i)));
  return BlockElement(0, std::move(blocks));
}

FunElement FunBackend::to_function(const BlockElement& x) {
  FunElement a(static_cast<Eigen::Index>(x.block_count()));
  for (std::size_t i = 0; i < x.block_count(); ++i) a(static_cast<Eigen::Index>(i)) = x.block(i)(0, 0);
  return a;
}

std::vector<Eigen::Index> FunBackend::block_dims(int) const {
  return std::vector<Eigen::Index>(X_.size(), 1);
}

BlockElement FunBackend::lift(const BlockElement& x, int) const { return x; }

BlockElement FunBackend::delta(const BlockElement& x) const {
  return to_element(delta_ * to_function(x));
}

BlockElement FunBackend::delta_star(const BlockElement& x) const {
  return to_element(delta_star_ * to_function(x));
}

BlockElement FunBackend::delta_star_transpose(const BlockElement& rho) const {
  return to_element(delta_star_.transpose() * to_function(rho));
}

std::vector<std::shared_ptr<const Functional>> FunBackend::functionals() const {
  std::vector<std::shared_ptr<const Functional>> out;
  const auto n = static_cast<Eigen::Index>(X_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w(i) = 1.0;
    out.push_back(std::make_shared<WeightedEvaluation>("ev(" + X_.label(static_cast<PointIndex>(i)) + ")", w));
  }
  out.push_back(std::make_shared<WeightedEvaluation>("sum", Eigen::VectorXd::Ones(n)));
  return out;
}

std::optional<BlockElement> FunBackend::named_element(const std::string& name) const {
  const auto n = static_cast<Eigen::Index>(X_.size());
  if (name == "one") return unit(0);
  if (name == "d1") return to_element(delta_ * FunElement::Ones(n));
  if (name == "p") return to_element(delta_star_ * FunElement::Ones(n));
  if (name.rfind("chi", 0) == 0) {
    if (auto idx = X_.index_of(name.substr(3))) return to_element(indicator(X_.size(), {*idx}));
  }
  return std::nullopt;
}

std::vector<std::string> FunBackend::element_names() const {
  std::vector<std::string> out{"one", "d1", "p"};
  for (const auto& l : X_.labels()) out.push_back("chi" + l);
  return out;
}

WeightedEvaluation::WeightedEvaluation(std::string name, Eigen::VectorXd weights)
    : name_(std::move(name)), weights_(std::move(weights)) {
  if (weights_.minCoeff() < 0.0) throw ValidationError("functional weights must be nonnegative");
}

BlockElement WeightedEvaluation::density(int) const {
  return FunBackend::to_element(weights_.cast<Complex>());
}

}  // namespace xprod::funalg
