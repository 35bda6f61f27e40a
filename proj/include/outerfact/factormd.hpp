#pragma once

// Two-variable factorizability: the Y-condition on Schur complements of the
// Toeplitz operator, factor extraction, the Schur complement decomposition
// identities, and the stable-factorization test through T_{1/q}.

#include <map>
#include <optional>
#include <vector>

#include "outerfact/factor1d.hpp"

namespace outerfact {

struct MultiConditionReport {
  std::vector<int> degree;                 // n = (n_1, n_2); K = box_points(n)
  PsdMatrix y;                             // S(K) - pad(S(K \ {n})), blocks ordered like K
  std::map<Exponent, double> violation;    // m in K - K: ||sum_{k-l=m} Y_{k,l} - Q_m||_F
  double max_violation = 0.0;
  Index rank_y = 0;
  bool passed = false;                     // max_violation <= residual_tol and rank_y <= h
  bool converged = false;
  double trunc_gap = 0.0;
  std::vector<int> trunc_used;
  double coherence_gap = 0.0;  // ||S(K \ {n}) - S(S(K); K \ {n})||_F
};

/// Throws Error(validation) unless q has two variables.
MultiConditionReport check_multi_condition(const LaurentPoly& q, const Tolerances& tol);

/// sum over (k, l) in K x K with k - l = m of the (k, l) block of y.
CoeffMap diagonal_sums(const ComplexMatrix& y, const std::vector<int>& degree, Index block);

struct Factor2dResult {
  MultiConditionReport condition;
  std::optional<OuterFactorization> factor;  // set when the condition passed
};

/// Y = C^* C, P_k = block (n - k) of C, gauge fixed on P_0. Throws
/// Error(numerical) if rank Y exceeds the block size after passing.
Factor2dResult factor_outer_2d(const LaurentPoly& q, const Tolerances& tol);

struct TwoVarReport {
  std::vector<int> degree;
  ComplexMatrix s0, s1, s2, s_kminus, s_k;  // padded onto K
  double schureq1_gap = 0.0;     // ||S(K \ {n}) - (S_1 + S_2 - S_0)||_F
  double schureq2_gap = 0.0;     // ||S(K) - (Y_0 + T_1 S_1 T_1^* + T_2 S_2 T_2^* - T_1 T_2 S_0 T_2^* T_1^*)||_F
  double zero_pattern_gap = 0.0; // max |S(K \ {n})| on {1..n_1}x{0} by {0}x{1..n_2}
  bool converged = false;

  bool holds(double tol) const {
    return schureq1_gap <= tol && schureq2_gap <= tol && zero_pattern_gap <= tol;
  }
};

/// Y_0 = T_Q - T_1 T_Q T_1^* - T_2 T_Q T_2^* + T_1 T_2 T_Q T_2^* T_1^* on K:
/// block (k, l) is Q_{k-l} when min(k_1, l_1) = 0 and min(k_2, l_2) = 0.
ComplexMatrix assemble_y0(const LaurentPoly& q);

/// T_v X T_v^* for X indexed by the box with upper corner `upper`: block
/// (k, l) moves to (k + e_v, l + e_v); blocks leaving the box are dropped.
ComplexMatrix shift_on_box(const ComplexMatrix& x, const std::vector<int>& upper, std::size_t var,
                           Index block);

TwoVarReport check_2var_decomposition(const LaurentPoly& q, const Tolerances& tol);

/// Gap threshold for TwoVarReport::holds: truncation error enters at
/// conv_tol relative to the scale of Q.
double decomposition_threshold(const LaurentPoly& q, const Tolerances& tol);

struct GwReport {
  bool stable_factorable = false;
  double max_entry = 0.0;      // largest tested entry of the inverse
  double inverse_norm = 0.0;   // Frobenius norm of the inverse
  double min_on_torus = 0.0;
  std::size_t grid_points = 0;
};

/// Inverts (c_{k-l}) on K \ {n}, c the Fourier coefficients of 1/q, and
/// tests its entries at k in {1..n_1}x{0}, l in {0}x{1..n_2}. Throws
/// Error(not_psd) unless q > 10 * psd_tol * scale on the grid, and
/// Error(validation) for matrix-valued or non-two-variable input.
GwReport check_gw_stability(const LaurentPoly& q, const Tolerances& tol);

}  // namespace outerfact
