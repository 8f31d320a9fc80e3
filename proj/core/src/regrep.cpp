#include "xprod/regrep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <Eigen/Eigenvalues>

#include "xprod/errors.hpp"

namespace xprod::regrep {

int required_level(int window, int coeff_level) { return 2 * window + coeff_level; }

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix kron_identity_left(Eigen::Index r, const Matrix& m) {
  Matrix out = Matrix::Zero(r * m.rows(), r * m.cols());
  for (Eigen::Index j = 0; j < r; ++j) out.block(j * m.rows(), j * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

TruncatedRep::TruncatedRep(BackendPtr backend, std::shared_ptr<const Functional> f, int window, int coeff_level)
    : backend_(std::move(backend)), f_(std::move(f)), window_(window), coeff_level_(coeff_level) {
  if (!backend_ || !f_) throw ContractError("rep needs a backend and a functional");
  if (window_ < 1) throw ValidationError("window must be >= 1");
  if (coeff_level_ < 0) throw ValidationError("coefficient level must be >= 0");
  if (backend_->graded()) {
    base_level_ = window_ + coeff_level_;
    if (backend_->max_level() < required_level(window_, coeff_level_))
      throw ResourceError("window " + std::to_string(window_) + " needs algebra level " +
                          std::to_string(required_level(window_, coeff_level_)) + ", backend has " +
                          std::to_string(backend_->max_level()));
  } else {
    base_level_ = 0;
    coeff_level_ = 0;
  }

  const BlockElement rho = f_->density(base_level_);
  double scale = 0.0, worst = 0.0;
  for (const auto& b : rho.blocks()) {
    if (b.size() == 0) continue;
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol::kFloat * (1.0 + b.cwiseAbs().maxCoeff()))
      throw ValidationError("functional " + f_->name() + " has a non-Hermitian density");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(b), Eigen::EigenvaluesOnly);
    scale = std::max(scale, es.eigenvalues().cwiseAbs().maxCoeff());
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  if (worst < -tol::kFloat * std::max(1.0, scale))
    throw ValidationError("functional " + f_->name() + " is not positive");
  if (scale == 0.0) throw ValidationError("functional " + f_->name() + " is zero");

  for (int n = -window_; n <= window_; ++n) build_level(n);

  U_ = Matrix::Zero(dim_, dim_);
  Ustar_ = Matrix::Zero(dim_, dim_);
  for (int n = -window_ + 1; n <= window_; ++n) {
    const LevelSpace& src = level(n - 1);
    const LevelSpace& dst = level(n);
    for (Eigen::Index j = 0; j < src.dim; ++j)
      U_.block(dst.offset, src.offset + j, dst.dim, 1) = coordinates(n, up(n, preimage(n - 1, j)));
  }
  for (int n = -window_; n < window_; ++n) {
    const LevelSpace& src = level(n + 1);
    const LevelSpace& dst = level(n);
    for (Eigen::Index j = 0; j < src.dim; ++j)
      Ustar_.block(dst.offset, src.offset + j, dst.dim, 1) = coordinates(n, down(n, preimage(n + 1, j)));
  }
}

void TruncatedRep::build_level(int n) {
  LevelSpace L;
  L.n = n;
  L.algebra_level = backend_->clamp_level(base_level_ + std::max(n, 0));
  L.cut = n < 0 ? backend_->lift(backend_->delta_unit(-n), L.algebra_level) : backend_->unit(L.algebra_level);
  BlockElement tau = f_->density(base_level_);
  for (int k = 0; k < n; ++k) tau = backend_->delta_star_transpose(tau);
  if (tau.level() != L.algebra_level) tau = backend_->lift(tau, L.algebra_level);
  L.density = tau;

  const std::size_t blocks = tau.block_count();
  std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> grams(blocks);
  double lmax = 0.0;
  for (std::size_t s = 0; s < blocks; ++s) {
    if (tau.block(s).size() == 0) continue;
    grams[s].compute(hermitian_part(tau.block(s).transpose()));
    lmax = std::max(lmax, grams[s].eigenvalues().maxCoeff());
    L.min_gram_eigenvalue = std::min(L.min_gram_eigenvalue, grams[s].eigenvalues().minCoeff());
  }
  const double cutoff = tol::kNullRelative * lmax;

  Eigen::Index offset = 0;
  for (std::size_t s = 0; s < blocks; ++s) {
    const Eigen::Index d = tau.block(s).rows();
    std::vector<Eigen::Index> keep;
    if (d > 0 && lmax > 0.0)
      for (Eigen::Index i = 0; i < d; ++i)
        if (grams[s].eigenvalues()(i) > cutoff) keep.push_back(i);
    Matrix V(d, static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd lam(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      V.col(static_cast<Eigen::Index>(c)) = grams[s].eigenvectors().col(keep[c]);
      lam(static_cast<Eigen::Index>(c)) = grams[s].eigenvalues()(keep[c]);
    }

    Matrix W(d, 0);
    if (d > 0 && !keep.empty()) {
      Eigen::SelfAdjointEigenSolver<Matrix> cs(hermitian_part(L.cut.block(s)));
      std::vector<Eigen::Index> on;
      for (Eigen::Index i = 0; i < d; ++i)
        if (cs.eigenvalues()(i) > 0.5) on.push_back(i);
      W.resize(d, static_cast<Eigen::Index>(on.size()));
      for (std::size_t c = 0; c < on.size(); ++c) W.col(static_cast<Eigen::Index>(c)) = cs.eigenvectors().col(on[c]);
    }
    L.block_offset.push_back(offset);
    offset += W.cols() * V.cols();
    L.range.push_back(std::move(W));
    L.eigvecs.push_back(std::move(V));
    L.eigvals.push_back(std::move(lam));
  }
  L.dim = offset;
  L.offset = dim_;
  dim_ += L.dim;
  levels_.push_back(std::move(L));
}

const LevelSpace& TruncatedRep::level(int n) const {
  if (n < -window_ || n > window_) throw ContractError("level " + std::to_string(n) + " outside the window");
  return levels_[static_cast<std::size_t>(n + window_)];
}

double TruncatedRep::min_gram_eigenvalue() const {
  double m = 0.0;
  for (const auto& L : levels_) m = std::min(m, L.min_gram_eigenvalue);
  return m;
}

BlockElement TruncatedRep::at_level(int n, const BlockElement& v) const {
  const int target = level(n).algebra_level;
  if (v.level() > target)
    throw ContractError("element at level " + std::to_string(v.level()) + " does not fit H_" + std::to_string(n));
  return v.level() == target ? v : backend_->lift(v, target);
}

Vector TruncatedRep::coordinates(int n, const BlockElement& v0) const {
  const LevelSpace& L = level(n);
  const BlockElement v = at_level(n, v0);
  Vector out = Vector::Zero(L.dim);
  for (std::size_t s = 0; s < L.range.size(); ++s) {
    const Matrix& W = L.range[s];
    const Matrix& V = L.eigvecs[s];
    if (W.cols() == 0 || V.cols() == 0) continue;
    const Matrix phi = W.adjoint() * L.cut.block(s) * v.block(s) * V.conjugate() *
                       L.eigvals[s].cwiseSqrt().cast<Complex>().asDiagonal();
    out.segment(L.block_offset[s], phi.size()) = Eigen::Map<const Vector>(phi.data(), phi.size());
  }
  return out;
}

BlockElement TruncatedRep::preimage(int n, Eigen::Index i) const {
  const LevelSpace& L = level(n);
  if (i < 0 || i >= L.dim) throw ContractError("basis index out of range");
  BlockElement v = backend_->zero(L.algebra_level);
  for (std::size_t s = L.range.size(); s-- > 0;) {
    if (L.block_offset[s] > i) continue;
    const Eigen::Index local = i - L.block_offset[s];
    const Eigen::Index rank = L.range[s].cols();
    if (rank == 0 || local >= rank * L.eigvecs[s].cols()) continue;
    const Eigen::Index ii = local % rank, jj = local / rank;
    v.block(s) = L.range[s].col(ii) * L.eigvecs[s].col(jj).transpose() / std::sqrt(L.eigvals[s](jj));
    return v;
  }
  throw std::logic_error("basis index not located");
}

Complex TruncatedRep::inner(int n, const BlockElement& v0, const BlockElement& u0) const {
  const BlockElement v = at_level(n, v0), u = at_level(n, u0);
  if (n >= 0) return (*f_)(backend_->delta_star_power(backend_->mul(u.adjoint(), v), n));
  return (*f_)(backend_->mul(backend_->mul(u.adjoint(), level(n).cut), v));
}

BlockElement TruncatedRep::up(int n, const BlockElement& v) const {
  if (n > 0) return backend_->delta(v);
  return backend_->mul(backend_->delta_unit(-n + 1), v);
}

BlockElement TruncatedRep::down(int n, const BlockElement& u) const {
  if (n >= 0) return backend_->delta_star(u);
  return backend_->mul(backend_->delta_unit(-n), u);
}

Matrix TruncatedRep::pi(const BlockElement& a) const {
  if (backend_->graded() && a.level() > coeff_level_)
    throw ContractError("coefficient level " + std::to_string(a.level()) + " exceeds the rep's " +
                        std::to_string(coeff_level_));
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& L : levels_) {
    const BlockElement ap = at_level(L.n, L.n < 0 ? backend_->delta_power(a, -L.n) : a);
    for (std::size_t s = 0; s < L.range.size(); ++s) {
      const Eigen::Index r = L.eigvecs[s].cols(), rank = L.range[s].cols();
      if (r == 0 || rank == 0) continue;
      const Matrix m = L.range[s].adjoint() * ap.block(s) * L.range[s];
      out.block(L.offset + L.block_offset[s], L.offset + L.block_offset[s], rank * r, rank * r) =
          kron_identity_left(r, m);
    }
  }
  return out;
}

Matrix TruncatedRep::apply(const cross::CrossedElement& x) const {
  if (x.backend() != backend_) throw ContractError("element and rep use different backends");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& [k, a] : x.terms()) {
    Matrix t = pi(a);
    for (int i = 0; i < k; ++i) t = t * U_;
    for (int i = 0; i < -k; ++i) t = Ustar_ * t;
    out += t;
  }
  return out;
}

std::vector<Eigen::Index> TruncatedRep::interior_indices(int radius) const {
  std::vector<Eigen::Index> idx;
  for (const auto& L : levels_)
    if (std::abs(L.n) <= radius)
      for (Eigen::Index i = 0; i < L.dim; ++i) idx.push_back(L.offset + i);
  return idx;
}

Matrix TruncatedRep::interior(const Matrix& T, int radius) const {
  const auto idx = interior_indices(radius);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Matrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = T(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return out;
}

Matrix rep_apply(const TruncatedRep& rep, const cross::CrossedElement& x) {
  if (x.degree() > rep.window())
    throw ContractError("degree " + std::to_string(x.degree()) + " too large for window " +
                        std::to_string(rep.window()));
  return rep.apply(x);
}

double oracle_norm(const TruncatedRep& rep, const cross::CrossedElement& x) {
  const Matrix T = rep_apply(rep, x);
  const Matrix C = rep.interior(T, rep.window() - x.degree());
  return C.size() == 0 ? 0.0 : spectral_norm(C);
}

bool check_star_property(const TruncatedRep& rep, const cross::CrossedElement& x) {
  return cross::coeff_N(x, 0).norm() <= oracle_norm(rep, x) + tol::kStar;
}

double check_adjoint_pairing(const TruncatedRep& rep) {
  double worst = 0.0;
  const Backend& B = rep.backend();
  for (int n = -rep.window(); n < rep.window(); ++n) {
    const Eigen::Index dn = rep.level(n).dim, dm = rep.level(n + 1).dim;
    for (Eigen::Index i = 0; i < dn; ++i) {
      const BlockElement v = rep.preimage(n, i);
      const BlockElement Uv = n + 1 > 0 ? B.delta(v) : B.mul(B.delta_unit(-n), v);
      for (Eigen::Index j = 0; j < dm; ++j) {
        const BlockElement u = rep.preimage(n + 1, j);
        const BlockElement Usu = n >= 0 ? B.delta_star(u) : B.mul(B.delta_unit(-n), u);
        worst = std::max(worst, std::abs(rep.inner(n + 1, Uv, u) - rep.inner(n, v, Usu)));
      }
    }
  }
  return worst;
}

double adjoint_residual(const TruncatedRep& rep) {
  if (rep.dimension() == 0) return 0.0;
  return (rep.op_Ustar() - rep.op_U().adjoint()).cwiseAbs().maxCoeff();
}

double RelationResiduals::max() const { return std::max({u_pi_ustar, ustar_pi_u, support_central}); }

RelationResiduals check_relations(const TruncatedRep& rep, const BlockElement& a) {
  RelationResiduals r;
  const int radius = rep.window() - 2;
  if (radius < 0) throw ContractError("relations need window >= 2");
  const Backend& B = rep.backend();
  const Matrix& U = rep.op_U();
  const Matrix& Us = rep.op_Ustar();
  const Matrix pa = rep.pi(a);
  auto diff = [&](const Matrix& x, const Matrix& y) {
    const Matrix d = rep.interior(x - y, radius);
    return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
  };
  r.u_pi_ustar = diff(U * pa * Us, rep.pi(B.delta(a)));
  r.ustar_pi_u = diff(Us * pa * U, rep.pi(B.delta_star(a)));
  const Matrix p = Us * U;
  r.support_central = diff(p * pa, pa * p);
  return r;
}

FamilyOracle::FamilyOracle(BackendPtr backend, int window, int coeff_level) : window_(window) {
  for (const auto& f : backend->functionals())
    reps_.push_back(std::make_shared<const TruncatedRep>(backend, f, window, coeff_level));
}

double FamilyOracle::norm(const cross::CrossedElement& x) const {
  double best = 0.0;
  for (const auto& r : reps_) best = std::max(best, oracle_norm(*r, x));
  return best;
}

bool FamilyOracle::star_property(const cross::CrossedElement& x) const {
  return cross::coeff_N(x, 0).norm() <= norm(x) + tol::kStar;
}

double FamilyOracle::max_abs(const cross::CrossedElement& x) const {
  double best = 0.0;
  for (const auto& r : reps_) {
    const Matrix T = rep_apply(*r, x);
    if (T.size() > 0) best = std::max(best, T.cwiseAbs().maxCoeff());
  }
  return best;
}

}  // namespace xprod::regrep
