#include "xprod/ckalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <tuple>

#include "xprod/errors.hpp"

namespace xprod::ck {

std::string format_word(const Word& w) {
  if (w.empty()) return "()";
  const bool wide = std::any_of(w.begin(), w.end(), [](int s) { return s >= 9; });
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) s += '.';
    s += std::to_string(w[i] + 1);
  }
  return s;
}

std::vector<std::vector<int>> CKMatrix::rows() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_), std::vector<int>(static_cast<std::size_t>(n_)));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (*this)(i, j);
  return out;
}

CKMatrix validate_matrix(const std::vector<std::vector<int>>& rows) {
  const auto n = rows.size();
  if (n == 0) throw ValidationError("matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ValidationError("matrix is not square: row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j)
      if (rows[i][j] != 0 && rows[i][j] != 1)
        throw ValidationError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") is not 0 or 1");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (std::all_of(rows[i].begin(), rows[i].end(), [](int v) { return v == 0; }))
      throw ValidationError("row " + std::to_string(i + 1) + " is zero");
  for (std::size_t j = 0; j < n; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any = any || rows[i][j] == 1;
    if (!any) throw ValidationError("column " + std::to_string(j + 1) + " is zero");
  }
  CKMatrix A;
  A.n_ = static_cast<int>(n);
  for (const auto& r : rows) A.entries_.insert(A.entries_.end(), r.begin(), r.end());
  return A;
}

std::vector<Word> admissible_words(const CKMatrix& A, int k) {
  if (k < 0) throw ContractError("negative word length");
  std::vector<Word> cur{Word{}};
  for (int step = 0; step < k; ++step) {
    std::vector<Word> next;
    for (const auto& w : cur)
      for (int s = 0; s < A.size(); ++s)
        if (w.empty() || A(w.back(), s) == 1) {
          Word e = w;
          e.push_back(s);
          next.push_back(std::move(e));
        }
    if (next.size() > kWordGuard) throw ResourceError("admissible word count exceeds guard");
    cur = std::move(next);
  }
  return cur;
}

bool SpectralCoeffs::perfect_squares() const {
  return std::all_of(gamma.begin(), gamma.end(), [](int g) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(g))));
    return r * r == g;
  });
}

SpectralCoeffs spectral_coeffs(const CKMatrix& A) {
  SpectralCoeffs c;
  c.gamma.assign(static_cast<std::size_t>(A.size()), 0);
  for (int i = 0; i < A.size(); ++i)
    for (int r = 0; r < A.size(); ++r) c.gamma[static_cast<std::size_t>(r)] += A(i, r);
  return c;
}

// ---------------------------------------------------------------------------

AFStructure::AFStructure(CKMatrix A, int max_level) : A_(std::move(A)), spectral_(spectral_coeffs(A_)) {
  if (max_level < 0) throw ContractError("negative level");
  const int n = A_.size();
  std::vector<Word> all{Word{}};
  std::size_t total_words = 0;
  for (int k = 0; k <= max_level; ++k) {
    if (k > 0) all = admissible_words(A_, k);
    std::vector<Block> blocks(static_cast<std::size_t>(n));
    std::size_t entries = 0;
    for (int r = 0; r < n; ++r) {
      Block& b = blocks[static_cast<std::size_t>(r)];
      for (const auto& w : all)
        if (w.empty() || A_(w.back(), r) == 1) b.words.push_back(w);
      total_words += b.words.size();
      entries += b.words.size() * b.words.size();
      if (total_words > kWordGuard) throw ResourceError("word count guard exceeded at level " + std::to_string(k));
      if (entries > kEntryGuard) throw ResourceError("element size guard exceeded at level " + std::to_string(k));
      for (std::size_t i = 0; i < b.words.size(); ++i) b.index.emplace(b.words[i], i);
    }
    if (k > 0) {
      const auto& below = levels_.back();
      for (int r = 0; r < n; ++r) {
        Block& b = blocks[static_cast<std::size_t>(r)];
        for (const auto& w : b.words) {
          const Word tail(w.begin() + 1, w.end());
          b.tail.push_back(below[static_cast<std::size_t>(r)].index.at(tail));
          const int s = w.back();
          const Word prefix(w.begin(), w.end() - 1);
          b.last.push_back(s);
          b.prefix.push_back(below[static_cast<std::size_t>(s)].index.at(prefix));
          const int t = w.size() >= 2 ? w[1] : r;
          b.scale.push_back(1.0 / std::sqrt(static_cast<double>(spectral_.gamma[static_cast<std::size_t>(t)])));
        }
      }
    }
    levels_.push_back(std::move(blocks));
  }
}

void AFStructure::check_level(int level) const {
  if (level < 0) throw ContractError("negative level");
  if (level > max_level())
    throw ResourceError("level " + std::to_string(level) + " exceeds the built depth " + std::to_string(max_level()));
}

const AFStructure::Block& AFStructure::block(int level, int b) const {
  check_level(level);
  return levels_[static_cast<std::size_t>(level)][static_cast<std::size_t>(b)];
}

const std::vector<Word>& AFStructure::words(int level, int b) const { return block(level, b).words; }

std::optional<std::size_t> AFStructure::index(int level, int b, const Word& w) const {
  const auto& bl = block(level, b);
  auto it = bl.index.find(w);
  if (it == bl.index.end()) return std::nullopt;
  return it->second;
}

std::vector<Eigen::Index> AFStructure::block_dims(int level) const {
  check_level(level);
  std::vector<Eigen::Index> d;
  for (const auto& b : levels_[static_cast<std::size_t>(level)]) d.push_back(static_cast<Eigen::Index>(b.words.size()));
  return d;
}

std::size_t AFStructure::dimension(int level) const {
  std::size_t s = 0;
  for (auto d : block_dims(level)) s += static_cast<std::size_t>(d * d);
  return s;
}

AFLevelElement AFStructure::zero(int level) const { return BlockElement::zero(level, block_dims(level)); }
AFLevelElement AFStructure::unit(int level) const { return BlockElement::identity(level, block_dims(level)); }

AFLevelElement AFStructure::matrix_unit(int b, const Word& mu, const Word& nu) const {
  if (mu.size() != nu.size()) throw ContractError("matrix unit words differ in length");
  const int k = static_cast<int>(mu.size());
  auto i = index(k, b, mu);
  auto j = index(k, b, nu);
  if (!i || !j) throw ContractError("word not in W_" + std::to_string(b + 1) + "(" + std::to_string(k) + ")");
  AFLevelElement x = zero(k);
  x.block(static_cast<std::size_t>(b))(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = 1.0;
  return x;
}

AFLevelElement AFStructure::embed_level(const AFLevelElement& x) const {
  const int k = x.level();
  check_level(k + 1);
  AFLevelElement out = zero(k + 1);
  for (int s = 0; s < symbols(); ++s) {
    const Block& b = block(k + 1, s);
    Matrix& o = out.block(static_cast<std::size_t>(s));
    const auto m = static_cast<Eigen::Index>(b.words.size());
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        const int r = b.last[static_cast<std::size_t>(p)];
        if (b.last[static_cast<std::size_t>(q)] != r) continue;
        o(p, q) = x.block(static_cast<std::size_t>(r))(static_cast<Eigen::Index>(b.prefix[static_cast<std::size_t>(p)]),
                                                      static_cast<Eigen::Index>(b.prefix[static_cast<std::size_t>(q)]));
      }
  }
  return out;
}

AFLevelElement AFStructure::lift(const AFLevelElement& x, int level) const {
  if (level < x.level()) throw ContractError("cannot lift to a lower level");
  AFLevelElement out = x;
  while (out.level() < level) out = embed_level(out);
  return out;
}

AFLevelElement AFStructure::alpha_q_inv_sqrt(int level) const {
  if (level < 1) throw ContractError("alpha(Q) lives at level >= 1");
  AFLevelElement out = zero(level);
  for (int r = 0; r < symbols(); ++r) {
    const Block& b = block(level, r);
    for (std::size_t p = 0; p < b.words.size(); ++p)
      out.block(static_cast<std::size_t>(r))(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) = b.scale[p];
  }
  return out;
}

AFLevelElement AFStructure::ck_delta(const AFLevelElement& x) const {
  const int k = x.level();
  check_level(k + 1);
  AFLevelElement out = zero(k + 1);
  for (int r = 0; r < symbols(); ++r) {
    const Block& b = block(k + 1, r);
    const Matrix& xr = x.block(static_cast<std::size_t>(r));
    Matrix& o = out.block(static_cast<std::size_t>(r));
    const auto m = static_cast<Eigen::Index>(b.words.size());
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q)
        o(p, q) = b.scale[static_cast<std::size_t>(p)] * b.scale[static_cast<std::size_t>(q)] *
                  xr(static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(p)]),
                     static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(q)]));
  }
  return out;
}

AFLevelElement AFStructure::ck_delta_star(const AFLevelElement& x) const {
  const int k = x.level();
  if (k < 1) throw ContractError("delta_* needs level >= 1; lift via embed_level first");
  check_level(k);
  AFLevelElement out = zero(k - 1);
  for (int r = 0; r < symbols(); ++r) {
    const Block& b = block(k, r);
    const Matrix& xr = x.block(static_cast<std::size_t>(r));
    Matrix& o = out.block(static_cast<std::size_t>(r));
    const auto m = static_cast<Eigen::Index>(b.words.size());
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q)
        o(static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(p)]),
          static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(q)])) +=
            b.scale[static_cast<std::size_t>(p)] * b.scale[static_cast<std::size_t>(q)] * xr(p, q);
  }
  return out;
}

AFLevelElement AFStructure::prepend(int i, int j, const AFLevelElement& x) const {
  const int k = x.level();
  check_level(k + 1);
  AFLevelElement out = zero(k + 1);
  for (int r = 0; r < symbols(); ++r) {
    const Block& b = block(k + 1, r);
    Matrix& o = out.block(static_cast<std::size_t>(r));
    const auto m = static_cast<Eigen::Index>(b.words.size());
    for (Eigen::Index p = 0; p < m; ++p) {
      if (b.words[static_cast<std::size_t>(p)].front() != i) continue;
      for (Eigen::Index q = 0; q < m; ++q) {
        if (b.words[static_cast<std::size_t>(q)].front() != j) continue;
        o(p, q) = x.block(static_cast<std::size_t>(r))(static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(p)]),
                                                      static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(q)]));
      }
    }
  }
  return out;
}

AFLevelElement AFStructure::strip(int i, int j, const AFLevelElement& x) const {
  const int k = x.level();
  if (k < 1) throw ContractError("strip needs level >= 1");
  check_level(k);
  AFLevelElement out = zero(k - 1);
  for (int r = 0; r < symbols(); ++r) {
    const Block& b = block(k, r);
    const Matrix& xr = x.block(static_cast<std::size_t>(r));
    Matrix& o = out.block(static_cast<std::size_t>(r));
    const auto m = static_cast<Eigen::Index>(b.words.size());
    for (Eigen::Index p = 0; p < m; ++p) {
      if (b.words[static_cast<std::size_t>(p)].front() != i) continue;
      for (Eigen::Index q = 0; q < m; ++q) {
        if (b.words[static_cast<std::size_t>(q)].front() != j) continue;
        o(static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(p)]),
          static_cast<Eigen::Index>(b.tail[static_cast<std::size_t>(q)])) = xr(p, q);
      }
    }
  }
  return out;
}

AFLevelElement AFStructure::range_projection(const Word& mu) const {
  AFLevelElement x = unit(0);
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) x = prepend(*it, *it, x);
  return x;
}

AFLevelElement AFStructure::support_projection(int i) const {
  AFLevelElement x = zero(0);
  for (int r = 0; r < symbols(); ++r)
    if (A_(i, r) == 1) x.block(static_cast<std::size_t>(r))(0, 0) = 1.0;
  return x;
}

double verify_isometry(const CKMatrix& A, int depth) {
  if (depth < 1) throw ContractError("depth must be >= 1");
  const AFStructure af(A, depth);
  double worst = 0.0;
  for (int k = 1; k <= depth; ++k) worst = std::max(worst, (af.ck_delta_star(af.unit(k)) - af.unit(k - 1)).norm());
  return worst;
}

// ---------------------------------------------------------------------------
// Sparse 0/1-valued elements for the exhaustive relation checks.

namespace {

using Key = std::tuple<int, std::size_t, std::size_t>;

struct Sparse {
  int level = 0;
  std::map<Key, double> e;
  bool zero() const {
    return std::all_of(e.begin(), e.end(), [](const auto& kv) { return kv.second == 0.0; });
  }
};

Sparse clean(Sparse s) {
  for (auto it = s.e.begin(); it != s.e.end();) it = it->second == 0.0 ? s.e.erase(it) : std::next(it);
  return s;
}

bool same(const Sparse& a, const Sparse& b) {
  return a.level == b.level && clean(a).e == clean(b).e;
}

class SparseOps {
 public:
  explicit SparseOps(const AFStructure& af) : af_(af) {}

  Sparse unit(int k) const {
    Sparse s{k, {}};
    for (int r = 0; r < af_.symbols(); ++r)
      for (std::size_t p = 0; p < af_.words(k, r).size(); ++p) s.e[{r, p, p}] = 1.0;
    return s;
  }

  Sparse support(int i) const {
    Sparse s{0, {}};
    for (int r = 0; r < af_.symbols(); ++r)
      if (af_.matrix()(i, r) == 1) s.e[{r, 0, 0}] = 1.0;
    return s;
  }

  Sparse strip(int i, int j, const Sparse& x) const {
    Sparse out{x.level - 1, {}};
    for (const auto& [key, v] : x.e) {
      const auto [r, p, q] = key;
      const auto& w = af_.words(x.level, r);
      if (w[p].front() != i || w[q].front() != j) continue;
      const Word tp(w[p].begin() + 1, w[p].end());
      const Word tq(w[q].begin() + 1, w[q].end());
      out.e[{r, *af_.index(x.level - 1, r, tp), *af_.index(x.level - 1, r, tq)}] += v;
    }
    return clean(out);
  }

  Sparse prepend(int i, int j, const Sparse& x) const {
    Sparse out{x.level + 1, {}};
    for (const auto& [key, v] : x.e) {
      const auto [r, p, q] = key;
      const auto& w = af_.words(x.level, r);
      Word a{i}, b{j};
      a.insert(a.end(), w[p].begin(), w[p].end());
      b.insert(b.end(), w[q].begin(), w[q].end());
      auto ia = af_.index(x.level + 1, r, a);
      auto ib = af_.index(x.level + 1, r, b);
      if (ia && ib) out.e[{r, *ia, *ib}] += v;
    }
    return clean(out);
  }

  Sparse embed(const Sparse& x) const {
    Sparse out{x.level + 1, {}};
    for (const auto& [key, v] : x.e) {
      const auto [r, p, q] = key;
      const auto& w = af_.words(x.level, r);
      for (int s = 0; s < af_.symbols(); ++s) {
        if (af_.matrix()(r, s) != 1) continue;
        Word a = w[p], b = w[q];
        a.push_back(r);
        b.push_back(r);
        out.e[{s, *af_.index(x.level + 1, s, a), *af_.index(x.level + 1, s, b)}] += v;
      }
    }
    return out;
  }

  Sparse lift(Sparse x, int level) const {
    while (x.level < level) x = embed(x);
    return x;
  }

  static Sparse mul(const Sparse& a, const Sparse& b) {
    if (a.level != b.level) throw std::logic_error("sparse product across levels");
    Sparse out{a.level, {}};
    for (const auto& [ka, va] : a.e)
      for (const auto& [kb, vb] : b.e)
        if (std::get<0>(ka) == std::get<0>(kb) && std::get<2>(ka) == std::get<1>(kb))
          out.e[{std::get<0>(ka), std::get<1>(ka), std::get<2>(kb)}] += va * vb;
    return clean(out);
  }

  static Sparse add(Sparse a, const Sparse& b) {
    for (const auto& [k, v] : b.e) a.e[k] += v;
    return clean(a);
  }

  Sparse range_projection(const Word& mu) const {
    Sparse x = unit(0);
    for (auto it = mu.rbegin(); it != mu.rend(); ++it) x = prepend(*it, *it, x);
    return x;
  }

 private:
  const AFStructure& af_;
};

// S_mu^* S_nu over all |mu| = |nu| = k by depth-first stripping, pruning on zero.
bool word_orthogonality(const SparseOps& ops, const AFStructure& af, int k, std::size_t& checks) {
  const int n = af.symbols();
  bool ok = true;
  struct Frame {
    Sparse x;
    Word mu, nu;
  };
  std::vector<Frame> stack{{ops.unit(k), {}, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(f.mu.size()) == k) {
      ++checks;
      const bool expect_nonzero = f.mu == f.nu;
      if (expect_nonzero) {
        ok = ok && same(f.x, ops.support(f.mu.back()));
      } else {
        ok = ok && f.x.zero();
      }
      continue;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Word mu = f.mu, nu = f.nu;
        mu.push_back(i);
        nu.push_back(j);
        const bool admissible = (f.mu.empty() || (af.matrix()(f.mu.back(), i) == 1 && af.matrix()(f.nu.back(), j) == 1));
        if (!admissible) continue;
        Sparse y = ops.strip(i, j, f.x);
        if (y.zero()) {
          ++checks;
          ok = ok && (mu != nu);
          continue;
        }
        stack.push_back({std::move(y), std::move(mu), std::move(nu)});
      }
  }
  return ok;
}

}  // namespace

CKRelationReport check_ck_relations(const CKMatrix& A, int depth) {
  if (depth < 1) throw ContractError("depth must be >= 1");
  CKRelationReport rep;
  rep.depth = depth;
  const AFStructure af(A, depth + 1);
  const SparseOps ops(af);
  const int n = A.size();

  std::vector<Sparse> P;
  for (int i = 0; i < n; ++i) P.push_back(ops.range_projection(Word{i}));
  rep.ranges_orthogonal = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ++rep.checks;
      const Sparse prod = SparseOps::mul(P[static_cast<std::size_t>(i)], P[static_cast<std::size_t>(j)]);
      rep.ranges_orthogonal = rep.ranges_orthogonal && (i == j ? same(prod, P[static_cast<std::size_t>(i)]) : prod.zero());
    }

  rep.support_relation = true;
  for (int k = 1; k <= depth; ++k)
    for (int i = 0; i < n; ++i) {
      ++rep.checks;
      rep.support_relation = rep.support_relation && same(ops.strip(i, i, ops.unit(k)), ops.lift(ops.support(i), k - 1));
    }

  rep.word_orthogonality = true;
  for (int k = 1; k <= depth; ++k) rep.word_orthogonality = word_orthogonality(ops, af, k, rep.checks) && rep.word_orthogonality;

  rep.word_ranges_orthogonal = true;
  rep.partition_of_unity = true;
  rep.commutation = true;
  for (int k = 1; k <= depth; ++k) {
    const auto words = admissible_words(A, k);
    std::vector<Sparse> proj;
    for (const auto& w : words) proj.push_back(ops.range_projection(w));
    Sparse total{k, {}};
    for (std::size_t a = 0; a < words.size(); ++a) {
      total = SparseOps::add(std::move(total), proj[a]);
      for (std::size_t b = 0; b < words.size(); ++b) {
        ++rep.checks;
        const Sparse prod = SparseOps::mul(proj[a], proj[b]);
        rep.word_ranges_orthogonal = rep.word_ranges_orthogonal && (a == b ? same(prod, proj[a]) : prod.zero());
      }
      for (int i = 0; i < n; ++i) {
        ++rep.checks;
        const Sparse q = ops.lift(ops.support(i), k);
        rep.commutation = rep.commutation && same(SparseOps::mul(q, proj[a]), SparseOps::mul(proj[a], q));
      }
    }
    ++rep.checks;
    rep.partition_of_unity = rep.partition_of_unity && same(total, ops.unit(k));
  }

  // S F S^* and S_i^* F S_i stay inside F compatibly with the direct limit:
  // each map commutes with the level embedding.
  std::mt19937_64 rng(0xC4A1u);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < depth; ++k) {
    std::vector<Matrix> blocks;
    for (auto d : af.block_dims(k)) {
      Matrix m(d, d);
      for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = 0; q < d; ++q) m(p, q) = Complex(g(rng), g(rng));
      blocks.push_back(std::move(m));
    }
    const BlockElement x(k, std::move(blocks));
    const BlockElement ex = af.embed_level(x);
    worst = std::max(worst, (af.ck_delta(ex) - af.embed_level(af.ck_delta(x))).max_abs());
    if (k >= 1) {
      worst = std::max(worst, (af.ck_delta_star(ex) - af.embed_level(af.ck_delta_star(x))).max_abs());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          ++rep.checks;
          worst = std::max(worst, (af.strip(i, j, ex) - af.embed_level(af.strip(i, j, x))).max_abs());
        }
    }
    ++rep.checks;
  }
  rep.delta_consistency_residual = worst;
  rep.inclusions = worst <= tol::kFloat;
  return rep;
}

// ---------------------------------------------------------------------------

PathState::PathState(std::shared_ptr<const AFStructure> af, int start_symbol) : af_(std::move(af)) {
  const CKMatrix& A = af_->matrix();
  if (start_symbol < 0 || start_symbol >= A.size()) throw ContractError("path start out of range");
  path_.push_back(start_symbol);
  for (int k = 0; k <= af_->max_level() + 1; ++k) {
    int next = 0;
    while (A(path_.back(), next) != 1) ++next;
    path_.push_back(next);
  }
}

std::string PathState::name() const { return "path" + std::to_string(path_.front() + 1); }

int PathState::symbol(int position) const { return path_.at(static_cast<std::size_t>(position)); }

BlockElement PathState::density(int level) const {
  BlockElement rho = af_->zero(level);
  const Word mu(path_.begin(), path_.begin() + level);
  const int r = path_[static_cast<std::size_t>(level)];
  const auto idx = af_->index(level, r, mu);
  if (!idx) throw std::logic_error("path prefix is not admissible");
  rho.block(static_cast<std::size_t>(r))(static_cast<Eigen::Index>(*idx), static_cast<Eigen::Index>(*idx)) = 1.0;
  return rho;
}

// ---------------------------------------------------------------------------

CKBackend::CKBackend(CKMatrix A, int max_level)
    : af_(std::make_shared<const AFStructure>(std::move(A), max_level)) {}

CKBackend::CKBackend(std::shared_ptr<const AFStructure> af) : af_(std::move(af)) {}

std::vector<Eigen::Index> CKBackend::block_dims(int level) const { return af_->block_dims(level); }

BlockElement CKBackend::lift(const BlockElement& x, int level) const { return af_->lift(x, level); }

BlockElement CKBackend::delta(const BlockElement& x) const { return af_->ck_delta(x); }

BlockElement CKBackend::delta_star(const BlockElement& x) const {
  return af_->ck_delta_star(x.level() == 0 ? af_->embed_level(x) : x);
}

BlockElement CKBackend::delta_star_transpose(const BlockElement& rho) const { return af_->ck_delta(rho); }

std::vector<std::shared_ptr<const Functional>> CKBackend::functionals() const {
  std::vector<std::shared_ptr<const Functional>> out;
  for (int i = 0; i < af_->symbols(); ++i) out.push_back(std::make_shared<PathState>(af_, i));
  return out;
}

std::optional<BlockElement> CKBackend::named_element(const std::string& name) const {
  if (name == "one") return af_->unit(0);
  if (name.size() < 2) return std::nullopt;
  const char head = name.front();
  if (head != 'P' && head != 'Q') return std::nullopt;
  Word w;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '1' || name[i] > '9') return std::nullopt;
    const int s = name[i] - '1';
    if (s >= af_->symbols()) return std::nullopt;
    w.push_back(s);
  }
  if (head == 'Q') return w.size() == 1 ? std::optional<BlockElement>(af_->support_projection(w.front())) : std::nullopt;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (af_->matrix()(w[i - 1], w[i]) != 1) return std::nullopt;
  if (static_cast<int>(w.size()) > af_->max_level()) return std::nullopt;
  return af_->range_projection(w);
}

std::vector<std::string> CKBackend::element_names() const {
  std::vector<std::string> out{"one"};
  for (int i = 0; i < af_->symbols(); ++i) out.push_back("P" + std::to_string(i + 1));
  for (int i = 0; i < af_->symbols(); ++i) out.push_back("Q" + std::to_string(i + 1));
  return out;
}

}  // namespace xprod::ck
