#pragma once

// Matrix-valued trigonometric (Laurent) and analytic polynomials on the
// d-torus, their evaluation and grids, multilevel Toeplitz truncations and
// discrete Fourier coefficients.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "outerfact/linalg.hpp"
#include "outerfact/tolerances.hpp"

namespace outerfact {

/// Multi-exponent, one entry per variable. Compared lexicographically.
using Exponent = std::vector<int>;
using CoeffMap = std::map<Exponent, ComplexMatrix>;

/// k == 0 or the first nonzero entry of k is positive.
bool is_canonical(const Exponent& k);
Exponent negated(const Exponent& k);
Exponent difference(const Exponent& a, const Exponent& b);

/// Lexicographic enumeration of prod_i {0..upper_i}.
std::vector<Exponent> box_points(const std::vector<int>& upper);
/// Position of k in box_points(upper).
std::size_t box_linear_index(const Exponent& k, const std::vector<int>& upper);
std::size_t box_count(const std::vector<int>& upper);

/// z^k for z on the torus or in the polydisk (negative powers need z != 0).
Complex monomial(std::span<const Complex> z, const Exponent& k);

class AnalyticPoly;

/// Q(z) = sum_{k in K-K} Q_k z^k with Q_{-k} = Q_k^*. Only canonical
/// exponents are stored; the others are derived by symmetry.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  /// `coeffs` must use canonical exponents within K - K. Q_0 is symmetrized
  /// after checking its Hermitian defect against herm_tol.
  static LaurentPoly from_canonical(std::vector<int> degree, Index block, CoeffMap coeffs,
                                    double herm_tol = 1e-10);

  /// Accepts any exponents in K - K; every non-canonical exponent needs its
  /// canonical partner with Q_{-k} = Q_k^* within herm_tol.
  static LaurentPoly from_full(std::vector<int> degree, Index block, const CoeffMap& coeffs,
                               double herm_tol = 1e-10);

  /// Coefficients of P(z)^* P(z) on the torus, computed by exact convolution.
  static LaurentPoly square_of(const AnalyticPoly& p);

  /// Constant polynomial.
  static LaurentPoly constant(std::size_t dims, const ComplexMatrix& q0);

  std::size_t dims() const noexcept { return degree_.size(); }
  Index block_size() const noexcept { return block_; }
  const std::vector<int>& degree() const noexcept { return degree_; }
  const CoeffMap& canonical() const noexcept { return coeffs_; }

  /// Q_k; the zero matrix outside the stored support.
  ComplexMatrix coeff(const Exponent& k) const;
  /// max(1, ||Q_0||_F), the scale for relative comparisons.
  double scale() const;

 private:
  std::vector<int> degree_;
  Index block_ = 0;
  CoeffMap coeffs_;
};

/// P(z) = sum_{k in K} P_k z^k with h_out x h_in coefficients.
class AnalyticPoly {
 public:
  AnalyticPoly() = default;

  static AnalyticPoly from_coeffs(std::vector<int> degree, Index rows, Index cols,
                                  CoeffMap coeffs);

  std::size_t dims() const noexcept { return degree_.size(); }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  const std::vector<int>& degree() const noexcept { return degree_; }
  const CoeffMap& coeffs() const noexcept { return coeffs_; }

  ComplexMatrix coeff(const Exponent& k) const;

 private:
  std::vector<int> degree_;
  Index rows_ = 0;
  Index cols_ = 0;
  CoeffMap coeffs_;
};

/// Q(z) for z on the torus. Throws Error(validation) off the torus.
ComplexMatrix eval(const LaurentPoly& q, std::span<const Complex> z);
ComplexMatrix eval(const AnalyticPoly& p, std::span<const Complex> z);

/// Uniform grid on T^d: point j has coordinates exp(2 pi i j_l / points).
class TorusGrid {
 public:
  TorusGrid(std::size_t dims, std::size_t points_per_dim);

  std::size_t dims() const noexcept { return dims_; }
  std::size_t points_per_dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return total_; }
  /// Coordinates of the point with lexicographic position `linear`.
  std::vector<Complex> point(std::size_t linear) const;

 private:
  std::size_t dims_;
  std::size_t n_;
  std::size_t total_;
  std::vector<Complex> roots_;
};

/// Minimum over the grid of the smallest eigenvalue of Q(z).
double torus_min_eig(const LaurentPoly& q, std::size_t points_per_dim);

/// Max over the grid of ||Q(z) - P(z)^* P(z)||_F.
double residual(const LaurentPoly& q, const AnalyticPoly& p, std::size_t points_per_dim);

/// Finite section (Q_{i-j}) of the multilevel Toeplitz operator on the box
/// prod_i {0..upper_i}, multi-indices in lexicographic order.
struct ToeplitzTruncation {
  std::vector<int> box;
  Index block_size = 1;
  PsdMatrix matrix;

  std::size_t linear_index(const Exponent& k) const { return box_linear_index(k, box); }
};

/// Throws Error(validation) unless box_i >= degree_i for every variable.
ToeplitzTruncation toeplitz_truncation(const LaurentPoly& q, const std::vector<int>& box);

/// Matrix-valued samples on a uniform torus grid, lexicographic point order.
struct TorusSamples {
  std::vector<std::size_t> shape;
  Index rows = 1;
  Index cols = 1;
  std::vector<ComplexMatrix> values;
};

TorusSamples sample_torus(const std::function<ComplexMatrix(std::span<const Complex>)>& f,
                          std::size_t dims, std::size_t points_per_dim, Index rows, Index cols);

/// Discrete Fourier coefficients c_k, |k_i| <= max_exponent_i, of sampled
/// f = sum c_k z^k. Requires at least 4 * max_exponent_i points in each
/// dimension; throws Error(validation) otherwise.
CoeffMap fourier_coeffs(const TorusSamples& f, const std::vector<int>& max_exponent);

/// Roots of a scalar one-variable polynomial via companion eigenvalues.
/// Throws Error(validation) for the zero polynomial or non-scalar input.
std::vector<Complex> scalar_roots(const AnalyticPoly& p);

/// No roots in the open unit disk: min |root| >= 1 - tol.
bool outer_by_roots(const std::vector<Complex>& roots, double tol);

}  // namespace outerfact
