#pragma once

// Generalized Schur complements S(M; Lambda) of PSD block matrices, the
// structured (upper-times-lower) Cholesky factorization they induce, and
// executable predicates for the identities these complements satisfy.

#include <cstddef>
#include <vector>

#include "outerfact/linalg.hpp"
#include "outerfact/tolerances.hpp"

namespace outerfact {

/// Strictly increasing set of block labels.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts the labels; throws Error(validation) on duplicates.
  explicit IndexSet(std::vector<std::size_t> members);
  IndexSet(std::initializer_list<std::size_t> members)
      : IndexSet(std::vector<std::size_t>(members)) {}

  /// {first, ..., last_exclusive - 1}
  static IndexSet range(std::size_t first, std::size_t last_exclusive);

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t operator[](std::size_t i) const { return members_[i]; }

  bool contains(std::size_t label) const;
  bool subset_of(const IndexSet& other) const;
  /// Throws Error(validation) if any label is >= host.
  void check_within(std::size_t host) const;

  IndexSet complement(std::size_t host) const;
  IndexSet united(const IndexSet& other) const;
  IndexSet intersected(const IndexSet& other) const;
  IndexSet minus(const IndexSet& other) const;

  /// Position of each member inside `super`, which must contain this set.
  std::vector<std::size_t> positions_in(const IndexSet& super) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

/// Scalar row indices covered by the given block labels.
std::vector<Index> scalar_indices(const IndexSet& labels, Index block);

/// Compact submatrix on rows/columns `labels`.
ComplexMatrix restrict_to(const ComplexMatrix& m, const IndexSet& labels, Index block);

/// Embeds a compact matrix on `labels` into a host of `host` block labels:
/// compact block (j, k) goes to (labels[j], labels[k]), zeros elsewhere.
ComplexMatrix pad(const ComplexMatrix& compact, const IndexSet& labels, std::size_t host,
                  Index block);

/// M_LL - M_LC (M_CC)^+ M_CL for a Hermitian PSD `m` and scalar indices `keep`
/// (C the complement). No PSD check; uses a Cholesky solve when M_CC is well
/// conditioned and the eigen-pseudoinverse otherwise.
ComplexMatrix schur_complement_raw(const ComplexMatrix& m, const std::vector<Index>& keep,
                                   double rank_tol);

struct SchurResult {
  IndexSet lambda;
  PsdMatrix compact;
  std::size_t host_size = 0;  // block labels of the host matrix
  Index block_size = 1;

  ComplexMatrix padded() const { return pad(compact.matrix(), lambda, host_size, block_size); }
};

SchurResult schur_complement(const PsdMatrix& m, const IndexSet& lambda, const Tolerances& tol,
                             Index block = 1);

/// M = P^* P with P block lower triangular, such that the leading
/// (k+1) x (k+1) block corner P_k satisfies P_k^* P_k = S(M; {0..k}).
struct StructuredCholesky {
  ComplexMatrix factor;
  Index block_size = 1;

  std::size_t blocks() const { return static_cast<std::size_t>(factor.rows() / block_size); }
  ComplexMatrix block(std::size_t i, std::size_t j) const;
  /// Leading (k+1) x (k+1) block corner.
  ComplexMatrix leading(std::size_t k) const;
};

StructuredCholesky structured_cholesky(const PsdMatrix& m, Index block, const Tolerances& tol);

/// For every block row i: ran P_{i,0..i-1} is contained in ran P_{ii}.
bool cholesky_range_conditions(const StructuredCholesky& p, double rank_tol);

struct IdentityCheck {
  bool holds = false;
  double gap = 0.0;  // relative to max(1, ||M||_F)
};

/// S(M; J) == S(S(M; K); J) for J contained in K. Throws Error(validation)
/// if J is not a subset of K.
IdentityCheck check_quotient_identity(const PsdMatrix& m, const IndexSet& j, const IndexSet& k,
                                      double rel_tol, const Tolerances& tol, Index block = 1);

struct InclusionExclusion {
  bool identity_holds = false;      // S(K u J) = S(K) + S(J) - S(K n J)
  bool zero_pattern_holds = false;  // S(K u J) vanishes on (K\J) x (J\K) and its transpose
  double identity_gap = 0.0;
  double zero_gap = 0.0;
};

InclusionExclusion check_inclusion_exclusion(const PsdMatrix& m, const IndexSet& j,
                                             const IndexSet& k, double rel_tol,
                                             const Tolerances& tol, Index block = 1);

/// Lower triangular 2x2 block factor [[P, 0], [Q, R]].
struct BlockFactor {
  ComplexMatrix p, q, r;

  ComplexMatrix assembled() const;
};

/// Given [[A, B], [B^*, C]] = L^* L with L = [[P, 0], [Q, R]], returns whether
/// ran Q is contained in ran R, which holds exactly when S(0) = P^* P.
/// Throws Error(validation) if the factorization identity is off by more
/// than rel_tol.
bool block_factor_predicate(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                            const BlockFactor& f, double rel_tol, double rank_tol);

struct IsometryFactor {
  ComplexMatrix v;                 // maps ran L onto ran L~; zero on (ran L)^perp
  double upper_block_norm = 0.0;   // ||V_12||
  double isometry_defect = 0.0;    // ||V^* V - proj(ran L)||
  double intertwining_defect = 0.0;  // ||L~ - V L||
};

/// The isometry V, block lower triangular, with L~ = V L, for two factors
/// with L^* L = L~^* L~ and ran Q inside ran R. Throws Error(validation) when
/// those hypotheses fail.
IsometryFactor unique_isometry_factor(const BlockFactor& f, const BlockFactor& g, double rel_tol,
                                      double rank_tol);

}  // namespace outerfact
