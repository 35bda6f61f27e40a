#pragma once

// Dense complex matrix primitives: Hermitian/PSD handling, rank-revealing
// factorization, pseudoinverse and range inclusion.

#include <complex>

#include <Eigen/Dense>

#include "outerfact/tolerances.hpp"

namespace outerfact {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Throws Error(validation) if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

/// max |M - M*| entry; 0 for an exactly Hermitian matrix.
double hermitian_defect(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// A square Hermitian positive semidefinite matrix. The stored matrix is
/// always exactly Hermitian; the defect of the input it was built from is
/// kept for reporting.
class PsdMatrix {
 public:
  PsdMatrix() = default;

  /// Checks finiteness, Hermitian defect <= herm_tol and
  /// min eigenvalue >= -psd_tol * max(lambda_max, 1). Throws Error(not_psd)
  /// when either check fails.
  static PsdMatrix validated(const ComplexMatrix& m, const Tolerances& tol);

  /// Symmetrizes without the eigenvalue check. For values that are PSD by
  /// construction (Schur complements, Gram matrices, certified truncations).
  static PsdMatrix trusted(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index size() const noexcept { return m_.rows(); }
  double hermitian_defect() const noexcept { return defect_; }

 private:
  PsdMatrix(ComplexMatrix m, double defect) : m_(std::move(m)), defect_(defect) {}

  ComplexMatrix m_;
  double defect_ = 0.0;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

HermitianEigen eigh(const ComplexMatrix& hermitian);
double min_eigenvalue(const ComplexMatrix& hermitian);
double max_abs_eigenvalue(const ComplexMatrix& hermitian);

/// Moore-Penrose pseudoinverse; singular values <= rank_tol * sigma_max are
/// treated as zero. The zero matrix maps to the zero matrix.
ComplexMatrix pseudoinverse(const ComplexMatrix& m, double rank_tol);

/// Pseudoinverse of a Hermitian matrix through its eigendecomposition.
ComplexMatrix hermitian_pseudoinverse(const ComplexMatrix& hermitian, double rank_tol);

struct RankFactor {
  ComplexMatrix factor;  // r x n, factor^* factor = Y
  Index rank = 0;
};

/// Y = C^* C with C having one row per eigenvalue > rank_tol * lambda_max,
/// rows ordered by decreasing eigenvalue.
RankFactor rank_factor(const PsdMatrix& y, double rank_tol);

/// ||(I - R R^+) Q||_F / max(1, ||Q||_F).
double range_defect(const ComplexMatrix& q, const ComplexMatrix& r, double rank_tol);

/// ran Q contained in ran R, i.e. range_defect(Q, R) <= rank_tol.
bool range_included(const ComplexMatrix& q, const ComplexMatrix& r, double rank_tol);

/// A <= B in the Loewner order: lambda_min(B - A) >= -tol * max(1, ||B||_2).
bool psd_order_leq(const PsdMatrix& a, const PsdMatrix& b, double tol);

/// Principal square root of a Hermitian PSD matrix (negative round-off
/// eigenvalues clipped to zero).
ComplexMatrix psd_sqrt(const ComplexMatrix& hermitian);

/// Unitary factor U of the polar decomposition A = U H of a square matrix.
ComplexMatrix polar_unitary(const ComplexMatrix& a);

/// ||A - B||_F / max(1, scale).
double relative_gap(const ComplexMatrix& a, const ComplexMatrix& b, double scale);

}  // namespace outerfact
