#pragma once

// Schur complements S(T_Q; Lambda) of the infinite (multilevel) Toeplitz
// operator of a PSD trigonometric polynomial, computed as monotone limits of
// finite sections, and the stationary block recursion they satisfy in one
// variable.

#include <vector>

#include "outerfact/trigpoly.hpp"

namespace outerfact {

struct TruncationStep {
  std::vector<int> box;          // upper multi-index of the section
  double gap = 0.0;              // ||S_new - S_prev||_F / max(1, ||Q_0||_F); 0 on the first step
  double monotone_min_eig = 0.0; // lambda_min(S_prev - S_new) / max(1, ||Q_0||_F)
};

struct LimitSchur {
  std::vector<Exponent> lambda;  // lexicographically sorted
  PsdMatrix value;               // compact, blocks in the order of `lambda`
  std::vector<int> trunc_used;
  bool converged = false;
  double gap = 0.0;
  std::vector<TruncationStep> history;

  /// Smallest monotone_min_eig over all doubling steps (0 with one step).
  double worst_monotonicity() const;
};

/// Throws Error(not_psd) if torus_min_eig(q) < -psd_tol * scale.
void require_torus_psd(const LaurentPoly& q, const Tolerances& tol);

/// Doubling schedule: start with n_i + 1 points per variable (or enough to
/// hold Lambda), double until successive values differ by <= conv_tol or the
/// per-variable limit is reached (converged = false).
LimitSchur limiting_schur(const LaurentPoly& q, std::vector<Exponent> lambda,
                          const Tolerances& tol);

/// Several index sets sharing each finite section. Checks the symbol once.
std::vector<LimitSchur> limiting_schur_many(const LaurentPoly& q,
                                            std::vector<std::vector<Exponent>> lambdas,
                                            const Tolerances& tol);

/// {0, ..., m} as one-variable multi-indices.
std::vector<Exponent> leading_indices(int m);

struct BauerFactors {
  std::vector<ComplexMatrix> blocks;  // F_0, ..., F_m
  LimitSchur schur;                   // S(m)
  double assembly_gap = 0.0;          // ||F(m)^* F(m) - S(m)||_F / max(1, ||Q_0||_F)
  bool ranges_included = false;       // ran F_j inside ran F_0
};

/// F(m) lower triangular block Toeplitz with F_{i-j} in block (i, j).
ComplexMatrix lower_block_toeplitz(const std::vector<ComplexMatrix>& blocks);

/// F_0 = S(m)_{mm}^{1/2} and F_j = F_0^+ S(m)_{m, m-j}, read off the last
/// block row of S(m) = F(m)^* F(m).
BauerFactors bauer_recursion(const LaurentPoly& q, int m, const Tolerances& tol);

struct InheritanceReport {
  bool holds = false;
  double gap = 0.0;  // max entry of |S(m) - [[Q_0, B^*], [B, S(m-1)]]| / max(1, ||Q_0||_F)
};

/// For deg Q <= m: S(m) = [[Q_0, row(Q_j^*)], [col(Q_j), S(m-1)]] with
/// S(m-1) in the bottom-right corner. Holds when gap <= 10 * conv_tol.
InheritanceReport inheritance_check(const LaurentPoly& q, int m, const Tolerances& tol);

}  // namespace outerfact
