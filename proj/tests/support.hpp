#pragma once

// Builders and independent oracles shared by the unit and acceptance tests.

#include <Eigen/QR>
#include <complex>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "outerfact/factormd.hpp"
#include "outerfact/schur.hpp"

namespace testing_support {

using namespace outerfact;

inline ComplexMatrix scalar(Complex v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

inline ComplexMatrix mat(Index rows, Index cols, std::initializer_list<Complex> entries) {
  ComplexMatrix m(rows, cols);
  auto it = entries.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

/// One-variable scalar Laurent polynomial from canonical coefficients q_0..q_m.
inline LaurentPoly laurent1(std::vector<Complex> q) {
  CoeffMap c;
  for (std::size_t k = 0; k < q.size(); ++k) c.emplace(Exponent{static_cast<int>(k)}, scalar(q[k]));
  return LaurentPoly::from_canonical({static_cast<int>(q.size()) - 1}, 1, std::move(c));
}

/// One-variable scalar analytic polynomial p_0 + p_1 z + ...
inline AnalyticPoly analytic1(std::vector<Complex> p) {
  CoeffMap c;
  for (std::size_t k = 0; k < p.size(); ++k) c.emplace(Exponent{static_cast<int>(k)}, scalar(p[k]));
  return AnalyticPoly::from_coeffs({static_cast<int>(p.size()) - 1}, 1, 1, std::move(c));
}

/// c + a z_1 + b z_2 + d z_1 z_2.
inline AnalyticPoly analytic2(Complex c, Complex a, Complex b, Complex d = 0.0) {
  CoeffMap m;
  m.emplace(Exponent{0, 0}, scalar(c));
  m.emplace(Exponent{1, 0}, scalar(a));
  m.emplace(Exponent{0, 1}, scalar(b));
  m.emplace(Exponent{1, 1}, scalar(d));
  return AnalyticPoly::from_coeffs({1, 1}, 1, 1, std::move(m));
}

/// 5 + z_1 + 1/z_1 + z_2 + 1/z_2.
inline LaurentPoly negative_case() {
  CoeffMap m;
  m.emplace(Exponent{0, 0}, scalar(5.0));
  m.emplace(Exponent{1, 0}, scalar(1.0));
  m.emplace(Exponent{0, 1}, scalar(1.0));
  return LaurentPoly::from_canonical({1, 1}, 1, std::move(m));
}

/// |4 + z_1 + z_2|^2 written out by hand.
inline LaurentPoly positive_case() {
  CoeffMap m;
  m.emplace(Exponent{0, 0}, scalar(18.0));
  m.emplace(Exponent{1, 0}, scalar(4.0));
  m.emplace(Exponent{0, 1}, scalar(4.0));
  m.emplace(Exponent{1, -1}, scalar(1.0));
  return LaurentPoly::from_canonical({1, 1}, 1, std::move(m));
}

/// P(z) = [[1, z], [0, 1]].
inline AnalyticPoly matrix_example() {
  CoeffMap m;
  m.emplace(Exponent{0}, mat(2, 2, {1.0, 0.0, 0.0, 1.0}));
  m.emplace(Exponent{1}, mat(2, 2, {0.0, 1.0, 0.0, 0.0}));
  return AnalyticPoly::from_coeffs({1}, 2, 2, std::move(m));
}

inline ComplexMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// G^* G with G rank x n, so rank-deficient whenever rank < n.
inline ComplexMatrix random_psd(std::mt19937_64& rng, Index n, Index rank) {
  const ComplexMatrix g = random_complex(rng, rank, n);
  return g.adjoint() * g;
}

/// Random PSD matrix of random size in [1, max_n], rank-deficient about a third of the time.
inline ComplexMatrix random_psd_any(std::mt19937_64& rng, Index max_n) {
  const Index n = std::uniform_int_distribution<Index>(1, max_n)(rng);
  const bool deficient = std::uniform_int_distribution<int>(0, 2)(rng) == 0;
  const Index r = deficient ? std::uniform_int_distribution<Index>(0, n)(rng) : n;
  return random_psd(rng, n, r);
}

inline IndexSet random_subset(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> out;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) out.push_back(i);
  return IndexSet(std::move(out));
}

/// Schur complement through Eigen's complete orthogonal decomposition, an
/// algorithm independent of the library's eigen/SVD path.
inline ComplexMatrix oracle_schur(const ComplexMatrix& m, const IndexSet& keep) {
  const IndexSet drop = keep.complement(static_cast<std::size_t>(m.rows()));
  auto pick = [&](const IndexSet& r, const IndexSet& c) {
    ComplexMatrix out(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        out(static_cast<Index>(i), static_cast<Index>(j)) =
            m(static_cast<Index>(r[i]), static_cast<Index>(c[j]));
    return out;
  };
  const ComplexMatrix ll = pick(keep, keep);
  if (drop.empty()) return ll;
  const ComplexMatrix cc = pick(drop, drop);
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(cc);
  cod.setThreshold(1e-10);
  return ll - pick(keep, drop) * cod.pseudoInverse() * pick(drop, keep);
}

/// Finite Toeplitz section of a one-variable scalar symbol, filled entry by entry.
inline ComplexMatrix oracle_toeplitz1(const std::vector<Complex>& q, Index n) {
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Index d = i - j;
      if (std::abs(d) < static_cast<Index>(q.size())) {
        t(i, j) = d >= 0 ? q[static_cast<std::size_t>(d)] : std::conj(q[static_cast<std::size_t>(-d)]);
      }
    }
  }
  return t;
}

/// Residuals of |a + b z_1 + c z_2 + d z_1 z_2|^2 = 5 + z_1 + 1/z_1 + z_2 + 1/z_2,
/// matched coefficient by coefficient.
inline std::vector<Complex> single_square_residuals(Complex a, Complex b, Complex c, Complex d) {
  return {std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d) - 5.0,
          std::conj(a) * b + std::conj(c) * d - 1.0,  // z_1
          std::conj(a) * c + std::conj(b) * d - 1.0,  // z_2
          std::conj(a) * d,                           // z_1 z_2
          std::conj(c) * b};                          // z_1 / z_2
}

/// Exact case analysis: conj(a) d = 0 and conj(c) b = 0 force a zero in each
/// pair; every combination kills one of the degree-one equations.
inline bool single_square_exists_by_cases() {
  // a = 0: conj(c) d = 1 and conj(b) d = 1 need b, c != 0, but conj(c) b = 0.
  // d = 0: conj(a) b = 1 and conj(a) c = 1 need b, c != 0, same contradiction.
  return false;
}

/// Smallest sum of squared residuals found by Gauss-Newton from random starts.
inline double single_square_search(std::mt19937_64& rng, int restarts) {
  auto unpack = [](const Eigen::VectorXd& x) {
    return std::make_tuple(Complex(x(0), x(1)), Complex(x(2), x(3)), Complex(x(4), x(5)),
                           Complex(x(6), x(7)));
  };
  auto residual_vec = [&](const Eigen::VectorXd& x) {
    const auto [a, b, c, d] = unpack(x);
    const auto r = single_square_residuals(a, b, c, d);
    Eigen::VectorXd out(10);
    for (std::size_t i = 0; i < r.size(); ++i) {
      out(2 * static_cast<Index>(i)) = r[i].real();
      out(2 * static_cast<Index>(i) + 1) = r[i].imag();
    }
    return out;
  };
  std::normal_distribution<double> g(0.0, 1.5);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < restarts; ++s) {
    Eigen::VectorXd x(8);
    for (Index i = 0; i < 8; ++i) x(i) = g(rng);
    double mu = 1e-3;
    Eigen::VectorXd r = residual_vec(x);
    for (int it = 0; it < 200; ++it) {
      Eigen::MatrixXd jac(10, 8);
      for (Index k = 0; k < 8; ++k) {
        Eigen::VectorXd xp = x;
        xp(k) += 1e-7;
        jac.col(k) = (residual_vec(xp) - r) / 1e-7;
      }
      const Eigen::MatrixXd a = jac.transpose() * jac + mu * Eigen::MatrixXd::Identity(8, 8);
      const Eigen::VectorXd step = a.ldlt().solve(-jac.transpose() * r);
      const Eigen::VectorXd rn = residual_vec(x + step);
      if (rn.squaredNorm() < r.squaredNorm()) {
        x += step;
        r = rn;
        mu = std::max(mu * 0.3, 1e-12);
      } else {
        mu *= 10.0;
      }
    }
    best = std::min(best, r.squaredNorm());
  }
  return best;
}

}  // namespace testing_support
