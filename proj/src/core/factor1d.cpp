#include "outerfact/factor1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "outerfact/error.hpp"
#include "outerfact/schur.hpp"
#include "parallel.hpp"

namespace outerfact {

namespace {

constexpr double kRootModulusTol = 1e-6;

Exponent zero_exponent(std::size_t dims) { return Exponent(dims, 0); }

}  // namespace

bool OuterCertificates::all_passed() const {
  return residual_ok && schur_outer && ranges_included && roots_outer.value_or(true);
}

void normalize_gauge(std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty() || blocks.front().rows() == 0) return;
  const ComplexMatrix& p0 = blocks.front();
  const Index r = p0.rows();
  const Index h = p0.cols();
  ComplexMatrix u;
  if (r == h) {
    u = polar_unitary(p0);
  } else {
    // Pivoted Cholesky on G = P_0^* P_0 picks r columns spanning ran G; G does
    // not depend on the gauge, so neither does the choice.
    const ComplexMatrix g = p0.adjoint() * p0;
    Eigen::VectorXd residual_diag = g.diagonal().real();
    ComplexMatrix l = ComplexMatrix::Zero(h, r);
    std::vector<Index> pivots;
    for (Index k = 0; k < r; ++k) {
      Index piv = 0;
      residual_diag.maxCoeff(&piv);
      pivots.push_back(piv);
      const double d = std::sqrt(std::max(residual_diag(piv), 0.0));
      ComplexVector col = g.col(piv);
      for (Index j = 0; j < k; ++j) col -= l.col(j) * std::conj(l(piv, j));
      l.col(k) = d > 0.0 ? ComplexVector(col / d) : ComplexVector::Zero(h);
      for (Index i = 0; i < h; ++i) residual_diag(i) -= std::norm(l(i, k));
      residual_diag(piv) = -INFINITY;
    }
    const ComplexMatrix w = g(Eigen::all, pivots);
    u = polar_unitary(p0 * w);
  }
  for (auto& b : blocks) b = u.adjoint() * b;
}

RankFactor rank_factor_with_floor(const PsdMatrix& y, double rank_tol, double floor) {
  RankFactor full = rank_factor(y, rank_tol);
  Index keep = 0;
  for (Index k = 0; k < full.rank; ++k) {
    if (full.factor.row(k).squaredNorm() > floor) ++keep;
  }
  full.factor = full.factor.topRows(keep).eval();
  full.rank = keep;
  return full;
}

double truncation_noise_floor(double trunc_gap, double scale, const Tolerances& tol) {
  return 10.0 * std::max(trunc_gap, tol.conv_tol) * scale;
}

OuterCertificates certify_factor(const LaurentPoly& q, const AnalyticPoly& p,
                                 const Tolerances& tol) {
  OuterCertificates c;
  const double scale = q.scale();
  c.residual = residual(q, p, tol.grid_points(q.dims()));
  c.residual_ok = c.residual <= tol.residual_tol * scale;

  const Exponent zero = zero_exponent(p.dims());
  const ComplexMatrix p0 = p.coeff(zero);
  c.ranges_included = true;
  for (const auto& [k, pk] : p.coeffs()) {
    c.ranges_included = c.ranges_included && range_included(pk, p0, tol.rank_tol);
  }

  const LaurentPoly square = LaurentPoly::square_of(p);
  const LimitSchur s0 = limiting_schur(square, {zero}, tol);
  c.schur_gap = (s0.value.matrix() - p0.adjoint() * p0).norm() / scale;
  c.schur_converged = s0.converged;
  c.schur_outer = c.schur_gap <= 10.0 * tol.conv_tol;

  if (p.dims() == 1 && p.rows() == 1 && p.cols() == 1) {
    const auto roots = scalar_roots(p);
    double lo = INFINITY;
    for (const Complex& z : roots) lo = std::min(lo, std::abs(z));
    c.min_root_modulus = lo;
    c.roots_outer = outer_by_roots(roots, kRootModulusTol);
  }
  return c;
}

OuterFactorization factor_outer_1d(const LaurentPoly& q, const Tolerances& tol) {
  require(q.dims() == 1, "factor_outer_1d needs a one-variable polynomial");
  tol.validate();
  const int m = q.degree()[0];
  const Index h = q.block_size();

  LimitSchur s_m = limiting_schur(q, leading_indices(m), tol);
  const ComplexMatrix& s = s_m.value.matrix();
  const Index lead = static_cast<Index>(m) * h;
  std::vector<Index> head(static_cast<std::size_t>(lead));
  for (Index i = 0; i < lead; ++i) head[static_cast<std::size_t>(i)] = i;
  ComplexMatrix y = s;
  if (lead > 0) y.topLeftCorner(lead, lead) -= schur_complement_raw(s, head, tol.rank_tol);

  OuterFactorization out;
  out.y = PsdMatrix::trusted(y);
  out.converged = s_m.converged;
  out.trunc_used = s_m.trunc_used;
  out.trunc_gap = s_m.gap;

  const RankFactor c = rank_factor_with_floor(
      out.y, tol.rank_tol, truncation_noise_floor(s_m.gap, q.scale(), tol));
  if (c.rank > h) {
    fail(ErrorKind::numerical, "rank of the extracted Gram matrix exceeds the block size");
  }
  out.rank = c.rank;

  std::vector<ComplexMatrix> blocks;
  for (int j = 0; j <= m; ++j) blocks.push_back(c.factor.middleCols(static_cast<Index>(m - j) * h, h));
  normalize_gauge(blocks);
  CoeffMap coeffs;
  for (int j = 0; j <= m; ++j) coeffs.emplace(Exponent{j}, blocks[static_cast<std::size_t>(j)]);
  out.p = AnalyticPoly::from_coeffs({m}, c.rank, h, std::move(coeffs));
  out.certificates = certify_factor(q, out.p, tol);
  return out;
}

OuternessReport outerness_test(const AnalyticPoly& f, const Tolerances& tol) {
  require(f.dims() == 1, "outerness_test needs a one-variable polynomial");
  tol.validate();
  const int k = f.degree()[0];
  const LaurentPoly q = LaurentPoly::square_of(f);
  auto lims = limiting_schur_many(q, {leading_indices(0), leading_indices(k)}, tol);

  std::vector<ComplexMatrix> blocks;
  for (int j = 0; j <= k; ++j) blocks.push_back(f.coeff({j}));
  const ComplexMatrix toeplitz = lower_block_toeplitz(blocks);
  const ComplexMatrix& f0 = blocks.front();

  OuternessReport out;
  out.first_gap = (lims[0].value.matrix() - f0.adjoint() * f0).norm() / q.scale();
  out.block_gap = (lims[1].value.matrix() - toeplitz.adjoint() * toeplitz).norm() / q.scale();
  out.converged = lims[0].converged && lims[1].converged;
  out.is_outer = out.first_gap <= 10.0 * tol.conv_tol;
  if (f.rows() == 1 && f.cols() == 1) {
    const auto roots = scalar_roots(f);
    double lo = INFINITY;
    for (const Complex& z : roots) lo = std::min(lo, std::abs(z));
    out.min_root_modulus = lo;
    out.roots_outer = outer_by_roots(roots, kRootModulusTol);
  }
  return out;
}

std::vector<Complex> disk_grid(std::size_t radii, std::size_t angles) {
  std::vector<Complex> pts;
  pts.reserve(radii * angles);
  for (std::size_t i = 0; i < radii; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(radii);
    for (std::size_t j = 0; j < angles; ++j) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angles);
      pts.push_back(std::polar(r, theta));
    }
  }
  return pts;
}

MaximalityReport maximality_test(const AnalyticPoly& f, const AnalyticPoly& g,
                                 std::span<const Complex> disk_points, const Tolerances& tol) {
  require(f.dims() == 1 && g.dims() == 1, "maximality_test needs one-variable polynomials");
  require(f.cols() == g.cols(), "factors act on spaces of different dimension");
  const LaurentPoly qf = LaurentPoly::square_of(f);
  const double scale = qf.scale();
  const TorusGrid grid(1, tol.grid_points(1));
  double torus_gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto z = grid.point(i);
    const ComplexMatrix fz = eval(f, z);
    const ComplexMatrix gz = eval(g, z);
    torus_gap = std::max(torus_gap, (fz.adjoint() * fz - gz.adjoint() * gz).norm());
  }
  if (torus_gap > tol.residual_tol * scale) {
    fail(ErrorKind::validation, "factors do not have the same symbol on the torus");
  }
  MaximalityReport out;
  out.worst = INFINITY;
  for (const Complex& z : disk_points) {
    require(std::abs(z) <= 1.0, "disk point outside the closed unit disk");
    const Complex pt[1] = {z};
    const ComplexMatrix fz = eval(f, pt);
    const ComplexMatrix gz = eval(g, pt);
    out.worst = std::min(out.worst, min_eigenvalue(hermitian_part(fz.adjoint() * fz - gz.adjoint() * gz)));
  }
  if (disk_points.empty()) out.worst = 0.0;
  out.dominates = out.worst >= -tol.psd_tol * scale;
  return out;
}

InnerOuterSamples inner_outer_samples(const AnalyticPoly& a, std::size_t points,
                                      const Tolerances& tol) {
  require(a.dims() == 1, "inner_outer_samples needs a one-variable polynomial");
  InnerOuterSamples out;
  out.outer = factor_outer_1d(LaurentPoly::square_of(a), tol);
  if (!out.outer.certificates.residual_ok) {
    fail(ErrorKind::numerical, "outer factor of A^* A failed its residual check");
  }
  const TorusGrid grid(1, points);
  out.points.resize(grid.size());
  out.v.resize(grid.size());
  std::vector<double> iso(grid.size()), rec(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const auto z = grid.point(i);
    const ComplexMatrix fz = eval(out.outer.p, z);
    const ComplexMatrix az = eval(a, z);
    out.points[i] = z[0];
    out.v[i] = az * pseudoinverse(fz, tol.rank_tol);
    iso[i] = (out.v[i].adjoint() * out.v[i] * fz - fz).norm();
    rec[i] = (out.v[i] * fz - az).norm();
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.max_isometry_defect = std::max(out.max_isometry_defect, iso[i]);
    out.max_reconstruction = std::max(out.max_reconstruction, rec[i]);
  }
  return out;
}

}  // namespace outerfact
