#pragma once

// Outer factorization Q = P^* P of a PSD matrix trigonometric polynomial in
// one variable, outerness and maximality tests, and sampled inner-outer
// splitting.

#include <optional>
#include <vector>

#include "outerfact/toeplitz_schur.hpp"
#include "outerfact/trigpoly.hpp"

namespace outerfact {

struct OuterCertificates {
  double residual = 0.0;            // max over the torus grid of ||Q - P^* P||_F
  bool residual_ok = false;         // residual <= residual_tol * max(1, ||Q_0||_F)
  double schur_gap = 0.0;           // ||S(T_P^* T_P; 0) - P_0^* P_0||_F / max(1, ||Q_0||_F)
  bool schur_outer = false;         // schur_gap <= 10 * conv_tol
  bool schur_converged = false;
  bool ranges_included = false;     // ran P_k inside ran P_0 for every k
  std::optional<double> min_root_modulus;  // scalar one-variable factors only
  std::optional<bool> roots_outer;

  bool all_passed() const;
};

struct OuterFactorization {
  AnalyticPoly p;                  // r x h coefficients, r the numerical rank
  OuterCertificates certificates;
  PsdMatrix y;                     // extracted Gram matrix of the coefficient row
  Index rank = 0;
  bool converged = false;          // truncation limits met conv_tol
  std::vector<int> trunc_used;
  double trunc_gap = 0.0;

  bool ok() const { return converged && certificates.residual_ok; }
};

/// Fixes the constant left-unitary freedom of a factor: with blocks[0] = P_0
/// (r x h, full row rank) every block is multiplied by U^* where U is the
/// polar unitary of P_0 (r == h) or of P_0 W, W the columns of P_0^* P_0
/// picked by pivoted Cholesky (r < h). Afterwards P_0 (resp. P_0 W) is PSD.
void normalize_gauge(std::vector<ComplexMatrix>& blocks);

/// Rank of Y with eigenvalues <= max(rank_tol * lambda_max, floor) dropped.
RankFactor rank_factor_with_floor(const PsdMatrix& y, double rank_tol, double floor);

/// Threshold below which eigenvalues of an extracted Y are treated as
/// truncation noise.
double truncation_noise_floor(double trunc_gap, double scale, const Tolerances& tol);

/// Certificates for a computed factor of q.
OuterCertificates certify_factor(const LaurentPoly& q, const AnalyticPoly& p, const Tolerances& tol);

/// Y = S(m) - pad(S(m-1)) with S(m-1) = S(S(m); {0..m-1}) in the top-left
/// corner, Y = C^* C, P_j = block m - j of C, gauge fixed. Throws
/// Error(not_psd) for symbols that are not PSD on the torus and
/// Error(numerical) if rank Y exceeds the block size. Non-convergence is
/// reported through `converged`.
OuterFactorization factor_outer_1d(const LaurentPoly& q, const Tolerances& tol);

struct OuternessReport {
  bool is_outer = false;
  double first_gap = 0.0;   // ||S(T_F^* T_F; 0) - F_0^* F_0|| / scale
  double block_gap = 0.0;   // same for {0..k}, k = degree, against the Toeplitz product
  bool converged = false;
  std::optional<double> min_root_modulus;
  std::optional<bool> roots_outer;
};

/// Compares S(T_F^* T_F; 0) with F_0^* F_0 (and the {0..k} analogue for
/// k = degree). Scalar inputs are cross-checked against their roots.
OuternessReport outerness_test(const AnalyticPoly& f, const Tolerances& tol);

/// Points r e^{i theta} with r = i / radii (i < radii), theta = 2 pi j / angles.
std::vector<Complex> disk_grid(std::size_t radii, std::size_t angles);

struct MaximalityReport {
  bool dominates = false;
  double worst = 0.0;  // min over points of lambda_min(F^* F - G^* G)
};

/// F^* F >= G^* G at every disk point (within psd_tol * scale). Throws
/// Error(validation) if F^* F and G^* G differ on the torus grid.
MaximalityReport maximality_test(const AnalyticPoly& f, const AnalyticPoly& g,
                                 std::span<const Complex> disk_points, const Tolerances& tol);

struct InnerOuterSamples {
  OuterFactorization outer;
  std::vector<Complex> points;
  std::vector<ComplexMatrix> v;       // V(z) = A(z) F(z)^+
  double max_isometry_defect = 0.0;   // ||V^* V F - F|| over the samples
  double max_reconstruction = 0.0;    // ||V F - A|| over the samples
};

/// F is the outer factor of A^* A; V is sampled on the torus grid. Throws
/// Error(numerical) if the factor of A^* A fails its residual check.
InnerOuterSamples inner_outer_samples(const AnalyticPoly& a, std::size_t points,
                                      const Tolerances& tol);

}  // namespace outerfact
