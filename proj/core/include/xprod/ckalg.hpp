#pragma once

// Cuntz-Krieger data for a 0/1 matrix A: admissible words, the AF filtration
// of the coefficient algebra F_A, the isometry S = alpha(Q)^{-1/2} sum_i S_i and
// the endomorphism delta = S . S* with its transfer operator delta_* = S* . S.
//
// Level k of F_A is spanned by S_mu P_i S_nu* with |mu| = |nu| = k and
// mu, nu in W_i(k) = { admissible mu : A(last(mu), i) = 1 }. These are matrix
// units, so level k is the direct sum over i of |W_i(k)| x |W_i(k)| matrices.
// S_i itself is never materialized; every map below is a closed-form block
// action (prepend or strip a symbol).

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xprod/backend.hpp"
#include "xprod/block_element.hpp"

namespace xprod::ck {

/// Symbols are 0-based internally and printed 1-based.
using Word = std::vector<int>;

std::string format_word(const Word& w);

class CKMatrix {
 public:
  CKMatrix() = default;
  int size() const { return n_; }
  int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  std::vector<std::vector<int>> rows() const;

 private:
  friend CKMatrix validate_matrix(const std::vector<std::vector<int>>& rows);
  int n_ = 0;
  std::vector<int> entries_;
};

/// Square 0/1 matrix with no zero row and no zero column.
CKMatrix validate_matrix(const std::vector<std::vector<int>>& rows);

/// All admissible words of length k in lexicographic order; k = 0 gives the
/// empty word.
std::vector<Word> admissible_words(const CKMatrix& A, int k);

struct SpectralCoeffs {
  std::vector<int> gamma;  // column sums, gamma_r = #{ i : A(i, r) = 1 }
  bool perfect_squares() const;
};

SpectralCoeffs spectral_coeffs(const CKMatrix& A);

using AFLevelElement = BlockElement;

inline constexpr int kDefaultDepthCap = 6;
inline constexpr std::size_t kWordGuard = 1'000'000;
inline constexpr std::size_t kEntryGuard = 20'000'000;

/// Levels 0..max_level of the AF filtration, built once and read-only after.
class AFStructure {
 public:
  AFStructure(CKMatrix A, int max_level);

  const CKMatrix& matrix() const { return A_; }
  const SpectralCoeffs& spectral() const { return spectral_; }
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  int symbols() const { return A_.size(); }

  /// W_block(level), lexicographic.
  const std::vector<Word>& words(int level, int block) const;
  std::optional<std::size_t> index(int level, int block, const Word& w) const;
  std::vector<Eigen::Index> block_dims(int level) const;
  std::size_t dimension(int level) const;

  AFLevelElement zero(int level) const;
  AFLevelElement unit(int level) const;
  /// S_mu P_i S_nu^*, both words in W_i(k).
  AFLevelElement matrix_unit(int block, const Word& mu, const Word& nu) const;

  AFLevelElement embed_level(const AFLevelElement& x) const;
  AFLevelElement lift(const AFLevelElement& x, int level) const;
  /// alpha(Q)^{-1/2} at level k >= 1 (diagonal, entries gamma_t^{-1/2}).
  AFLevelElement alpha_q_inv_sqrt(int level) const;
  AFLevelElement ck_delta(const AFLevelElement& x) const;
  AFLevelElement ck_delta_star(const AFLevelElement& x) const;
  /// S_i x S_j^*, level k -> k+1.
  AFLevelElement prepend(int i, int j, const AFLevelElement& x) const;
  /// S_i^* x S_j, level k -> k-1.
  AFLevelElement strip(int i, int j, const AFLevelElement& x) const;

  /// Range projection P_mu = S_mu S_mu^* at level |mu|.
  AFLevelElement range_projection(const Word& mu) const;
  /// Support projection Q_i = sum_r A(i, r) P_r at level 0.
  AFLevelElement support_projection(int i) const;

 private:
  struct Block {
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
    std::vector<std::size_t> tail;    // index of w[1..] in the same block one level down
    std::vector<int> last;            // last symbol (source block for embedding)
    std::vector<std::size_t> prefix;  // index of w[..k-1] in block `last` one level down
    std::vector<double> scale;        // gamma_t^{-1/2}, t the second symbol of (w, block)
  };
  const Block& block(int level, int b) const;
  void check_level(int level) const;

  CKMatrix A_;
  SpectralCoeffs spectral_;
  std::vector<std::vector<Block>> levels_;
};

/// max_k || delta_*(1) - 1 || at levels k = 1..depth, i.e. ||S*S - 1||.
double verify_isometry(const CKMatrix& A, int depth);

struct CKRelationReport {
  int depth = 0;
  bool ranges_orthogonal = false;       // P_i P_j = 0, i != j; P_i projections
  bool support_relation = false;        // S_i^* S_i = Q_i = sum_r A(i,r) P_r
  bool word_orthogonality = false;      // S_mu^* S_nu = delta_{mu,nu} Q_{last(mu)}
  bool word_ranges_orthogonal = false;  // P_mu P_nu = delta_{mu,nu} P_mu
  bool partition_of_unity = false;      // sum_{|mu|=k} P_mu = 1
  bool inclusions = false;              // S F S^*, S_i^* F S_i inside F (embedding-consistent)
  bool commutation = false;             // Q_i commutes with every P_nu
  double delta_consistency_residual = 0.0;
  std::size_t checks = 0;

  bool all_pass() const {
    return ranges_orthogonal && support_relation && word_orthogonality && word_ranges_orthogonal &&
           partition_of_unity && inclusions && commutation;
  }
};

CKRelationReport check_ck_relations(const CKMatrix& A, int depth);

/// Path state f_p(x) = x_{p_k}[p_1..p_{k}, p_1..p_{k}] along an infinite
/// admissible path (eventually periodic, generated greedily).
class PathState final : public Functional {
 public:
  PathState(std::shared_ptr<const AFStructure> af, int start_symbol);
  std::string name() const override;
  BlockElement density(int level) const override;
  int symbol(int position) const;

 private:
  std::shared_ptr<const AFStructure> af_;
  std::vector<int> path_;
};

class CKBackend final : public Backend {
 public:
  CKBackend(CKMatrix A, int max_level);
  explicit CKBackend(std::shared_ptr<const AFStructure> af);

  const AFStructure& structure() const { return *af_; }
  std::shared_ptr<const AFStructure> structure_ptr() const { return af_; }

  std::string name() const override { return "ckalg"; }
  bool graded() const override { return true; }
  int max_level() const override { return af_->max_level(); }
  std::vector<Eigen::Index> block_dims(int level) const override;
  BlockElement lift(const BlockElement& x, int level) const override;
  BlockElement delta(const BlockElement& x) const override;
  BlockElement delta_star(const BlockElement& x) const override;
  BlockElement delta_star_transpose(const BlockElement& rho) const override;
  std::vector<std::shared_ptr<const Functional>> functionals() const override;
  std::optional<BlockElement> named_element(const std::string& name) const override;
  std::vector<std::string> element_names() const override;

 private:
  std::shared_ptr<const AFStructure> af_;
};

}  // namespace xprod::ck
