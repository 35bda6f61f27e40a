#include "outerfact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "outerfact/error.hpp"

namespace outerfact {

void require_finite(const ComplexMatrix& m, const char* what) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        fail(ErrorKind::validation, std::string(what) + ": non-finite entry");
      }
    }
  }
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

PsdMatrix PsdMatrix::validated(const ComplexMatrix& m, const Tolerances& tol) {
  require_finite(m, "PSD matrix");
  if (m.rows() != m.cols()) fail(ErrorKind::validation, "PSD matrix must be square");
  const double defect = outerfact::hermitian_defect(m);
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (defect > tol.herm_tol * scale) {
    fail(ErrorKind::not_psd, "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  ComplexMatrix h = hermitian_part(m);
  if (h.size() != 0) {
    const Eigen::VectorXd ev = eigh(h).values;
    const double floor = std::max(ev(ev.size() - 1), 1.0);
    if (ev(0) < -tol.psd_tol * floor) {
      fail(ErrorKind::not_psd,
           "matrix is not positive semidefinite (min eigenvalue " + std::to_string(ev(0)) + ")");
    }
  }
  return PsdMatrix(std::move(h), defect);
}

PsdMatrix PsdMatrix::trusted(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), "PSD matrix must be square");
  return PsdMatrix(hermitian_part(m), outerfact::hermitian_defect(m));
}

HermitianEigen eigh(const ComplexMatrix& hermitian) {
  if (hermitian.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_abs_eigenvalue(const ComplexMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix pseudoinverse(const ComplexMatrix& m, double rank_tol) {
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double cut = rank_tol * s(0);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

ComplexMatrix hermitian_pseudoinverse(const ComplexMatrix& hermitian, double rank_tol) {
  ComplexMatrix out = ComplexMatrix::Zero(hermitian.rows(), hermitian.cols());
  if (hermitian.size() == 0) return out;
  const HermitianEigen e = eigh(hermitian);
  const double top = e.values.cwiseAbs().maxCoeff();
  if (top == 0.0) return out;
  std::vector<Index> kept;
  for (Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values(i)) > rank_tol * top) kept.push_back(i);
  }
  const ComplexMatrix basis = e.vectors(Eigen::all, kept);
  const Eigen::VectorXd inv = e.values(kept).cwiseInverse();
  return basis * inv.cast<Complex>().asDiagonal() * basis.adjoint();
}

RankFactor rank_factor(const PsdMatrix& y, double rank_tol) {
  const Index n = y.size();
  RankFactor out;
  out.factor = ComplexMatrix::Zero(0, n);
  if (n == 0) return out;
  const HermitianEigen e = eigh(y.matrix());
  const double top = e.values(n - 1);
  if (top <= 0.0) return out;
  Index r = 0;
  for (Index i = n - 1; i >= 0 && e.values(i) > rank_tol * top; --i) ++r;
  out.rank = r;
  out.factor.resize(r, n);
  for (Index k = 0; k < r; ++k) {
    const Index i = n - 1 - k;
    out.factor.row(k) = std::sqrt(e.values(i)) * e.vectors.col(i).adjoint();
  }
  return out;
}

double range_defect(const ComplexMatrix& q, const ComplexMatrix& r, double rank_tol) {
  require(q.rows() == r.rows(), "range_included: row counts differ");
  const double scale = std::max(1.0, q.norm());
  if (q.size() == 0) return 0.0;
  if (r.cols() == 0) return q.norm() / scale;
  Eigen::JacobiSVD<ComplexMatrix> svd(r, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Index k = 0;
  while (k < s.size() && s(0) > 0.0 && s(k) > rank_tol * s(0)) ++k;
  const ComplexMatrix u = svd.matrixU().leftCols(k);
  return (q - u * (u.adjoint() * q)).norm() / scale;
}

bool range_included(const ComplexMatrix& q, const ComplexMatrix& r, double rank_tol) {
  return range_defect(q, r, rank_tol) <= rank_tol;
}

bool psd_order_leq(const PsdMatrix& a, const PsdMatrix& b, double tol) {
  require(a.size() == b.size(), "psd_order_leq: dimension mismatch");
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, max_abs_eigenvalue(b.matrix()));
  return min_eigenvalue(hermitian_part(b.matrix() - a.matrix())) >= -tol * scale;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& hermitian) {
  if (hermitian.size() == 0) return hermitian;
  const HermitianEigen e = eigh(hermitian_part(hermitian));
  const Eigen::VectorXd root = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * root.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), "polar decomposition needs a square matrix");
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double relative_gap(const ComplexMatrix& a, const ComplexMatrix& b, double scale) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "relative_gap: dimension mismatch");
  return (a - b).norm() / std::max(1.0, scale);
}

}  // namespace outerfact
