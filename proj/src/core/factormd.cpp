#include "outerfact/factormd.hpp"

#include <algorithm>
#include <cmath>

#include "outerfact/error.hpp"
#include "outerfact/schur.hpp"

namespace outerfact {

namespace {

void require_two_vars(const LaurentPoly& q) {
  require(q.dims() == 2, "two-variable routine called with a polynomial in " +
                             std::to_string(q.dims()) + " variable(s)");
}

std::vector<Exponent> without_last(std::vector<Exponent> pts) {
  if (!pts.empty()) pts.pop_back();
  return pts;
}

std::vector<Exponent> sub_box(int u1, int u2) {
  if (u1 < 0 || u2 < 0) return {};
  return box_points({u1, u2});
}

// Linear positions of `pts` inside the box with upper corner `upper`.
IndexSet labels_in(const std::vector<Exponent>& pts, const std::vector<int>& upper) {
  std::vector<std::size_t> out;
  for (const auto& k : pts) out.push_back(box_linear_index(k, upper));
  return IndexSet(std::move(out));
}

ComplexMatrix pad_to_box(const LimitSchur& s, const std::vector<int>& upper, Index h) {
  return pad(s.value.matrix(), labels_in(s.lambda, upper), box_count(upper), h);
}

// max |x| over blocks (k, l) with k in {1..n_1}x{0}, l in {0}x{1..n_2} and
// their transposes.
double corner_entries(const ComplexMatrix& x, const std::vector<int>& upper, Index h) {
  double worst = 0.0;
  for (int a = 1; a <= upper[0]; ++a) {
    for (int b = 1; b <= upper[1]; ++b) {
      const Index k = static_cast<Index>(box_linear_index({a, 0}, upper)) * h;
      const Index l = static_cast<Index>(box_linear_index({0, b}, upper)) * h;
      worst = std::max({worst, x.block(k, l, h, h).cwiseAbs().maxCoeff(),
                        x.block(l, k, h, h).cwiseAbs().maxCoeff()});
    }
  }
  return worst;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

CoeffMap diagonal_sums(const ComplexMatrix& y, const std::vector<int>& degree, Index block) {
  const auto pts = box_points(degree);
  require(y.rows() == static_cast<Index>(pts.size()) * block && y.cols() == y.rows(),
          "Y does not match the degree box");
  CoeffMap sums;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      auto [it, inserted] =
          sums.try_emplace(difference(pts[i], pts[j]), ComplexMatrix::Zero(block, block));
      it->second += y.block(static_cast<Index>(i) * block, static_cast<Index>(j) * block, block, block);
    }
  }
  return sums;
}

MultiConditionReport check_multi_condition(const LaurentPoly& q, const Tolerances& tol) {
  require_two_vars(q);
  tol.validate();
  const Index h = q.block_size();
  const std::vector<int>& n = q.degree();
  const auto box = box_points(n);
  auto lims = limiting_schur_many(q, {box, without_last(box)}, tol);

  MultiConditionReport out;
  out.degree = n;
  out.converged = lims[0].converged && lims[1].converged;
  out.trunc_gap = std::max(lims[0].gap, lims[1].gap);
  out.trunc_used = lims[0].trunc_used;

  const ComplexMatrix& s_k = lims[0].value.matrix();
  const ComplexMatrix& s_km = lims[1].value.matrix();
  const Index lead = s_km.rows();
  ComplexMatrix y = s_k;
  y.topLeftCorner(lead, lead) -= s_km;
  out.y = PsdMatrix::trusted(y);

  std::vector<Index> head(static_cast<std::size_t>(lead));
  for (Index i = 0; i < lead; ++i) head[static_cast<std::size_t>(i)] = i;
  out.coherence_gap = (schur_complement_raw(s_k, head, tol.rank_tol) - s_km).norm();

  for (const auto& [m, sum] : diagonal_sums(out.y.matrix(), n, h)) {
    const double v = (sum - q.coeff(m)).norm();
    out.violation.emplace(m, v);
    out.max_violation = std::max(out.max_violation, v);
  }
  out.rank_y = rank_factor_with_floor(out.y, tol.rank_tol,
                                      truncation_noise_floor(out.trunc_gap, q.scale(), tol))
                   .rank;
  out.passed = out.max_violation <= tol.residual_tol && out.rank_y <= h;
  return out;
}

Factor2dResult factor_outer_2d(const LaurentPoly& q, const Tolerances& tol) {
  Factor2dResult out;
  out.condition = check_multi_condition(q, tol);
  if (!out.condition.passed) return out;

  const MultiConditionReport& cond = out.condition;
  const Index h = q.block_size();
  const std::vector<int>& n = q.degree();
  const RankFactor c = rank_factor_with_floor(
      cond.y, tol.rank_tol, truncation_noise_floor(cond.trunc_gap, q.scale(), tol));
  if (c.rank > h) fail(ErrorKind::numerical, "rank of Y exceeds the block size");

  const auto box = box_points(n);
  std::vector<ComplexMatrix> blocks;
  for (const auto& k : box) {
    const Exponent pos = difference(n, k);
    blocks.push_back(c.factor.middleCols(static_cast<Index>(box_linear_index(pos, n)) * h, h));
  }
  normalize_gauge(blocks);  // box.front() is the zero exponent
  CoeffMap coeffs;
  for (std::size_t i = 0; i < box.size(); ++i) coeffs.emplace(box[i], blocks[i]);

  OuterFactorization f;
  f.p = AnalyticPoly::from_coeffs(n, c.rank, h, std::move(coeffs));
  f.y = cond.y;
  f.rank = c.rank;
  f.converged = cond.converged;
  f.trunc_used = cond.trunc_used;
  f.trunc_gap = cond.trunc_gap;
  f.certificates = certify_factor(q, f.p, tol);
  out.factor = std::move(f);
  return out;
}

ComplexMatrix assemble_y0(const LaurentPoly& q) {
  require_two_vars(q);
  const Index h = q.block_size();
  const auto box = box_points(q.degree());
  const auto count = static_cast<Index>(box.size());
  ComplexMatrix y0 = ComplexMatrix::Zero(count * h, count * h);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < count; ++j) {
      const Exponent& k = box[static_cast<std::size_t>(i)];
      const Exponent& l = box[static_cast<std::size_t>(j)];
      if (std::min(k[0], l[0]) == 0 && std::min(k[1], l[1]) == 0) {
        y0.block(i * h, j * h, h, h) = q.coeff(difference(k, l));
      }
    }
  }
  return y0;
}

ComplexMatrix shift_on_box(const ComplexMatrix& x, const std::vector<int>& upper, std::size_t var,
                           Index block) {
  require(var < upper.size(), "shift variable out of range");
  const auto box = box_points(upper);
  require(x.rows() == static_cast<Index>(box.size()) * block && x.cols() == x.rows(),
          "matrix does not match the box");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < box.size(); ++i) {
    Exponent ki = box[i];
    if (++ki[var] > upper[var]) continue;
    const Index to_i = static_cast<Index>(box_linear_index(ki, upper)) * block;
    for (std::size_t j = 0; j < box.size(); ++j) {
      Exponent kj = box[j];
      if (++kj[var] > upper[var]) continue;
      const Index to_j = static_cast<Index>(box_linear_index(kj, upper)) * block;
      out.block(to_i, to_j, block, block) =
          x.block(static_cast<Index>(i) * block, static_cast<Index>(j) * block, block, block);
    }
  }
  return out;
}

TwoVarReport check_2var_decomposition(const LaurentPoly& q, const Tolerances& tol) {
  require_two_vars(q);
  tol.validate();
  const Index h = q.block_size();
  const std::vector<int>& n = q.degree();
  const auto box = box_points(n);
  auto lims = limiting_schur_many(q,
                                  {sub_box(n[0] - 1, n[1] - 1), sub_box(n[0] - 1, n[1]),
                                   sub_box(n[0], n[1] - 1), without_last(box), box},
                                  tol);

  TwoVarReport out;
  out.degree = n;
  out.s0 = pad_to_box(lims[0], n, h);
  out.s1 = pad_to_box(lims[1], n, h);
  out.s2 = pad_to_box(lims[2], n, h);
  out.s_kminus = pad_to_box(lims[3], n, h);
  out.s_k = pad_to_box(lims[4], n, h);
  out.converged = std::all_of(lims.begin(), lims.end(), [](const LimitSchur& s) { return s.converged; });

  out.schureq1_gap = (out.s_kminus - (out.s1 + out.s2 - out.s0)).norm();
  const ComplexMatrix rhs = assemble_y0(q) + shift_on_box(out.s1, n, 0, h) +
                            shift_on_box(out.s2, n, 1, h) -
                            shift_on_box(shift_on_box(out.s0, n, 0, h), n, 1, h);
  out.schureq2_gap = (out.s_k - rhs).norm();
  out.zero_pattern_gap = corner_entries(out.s_kminus, n, h);
  return out;
}

double decomposition_threshold(const LaurentPoly& q, const Tolerances& tol) {
  return std::max(tol.residual_tol, 10.0 * tol.conv_tol) * q.scale();
}

GwReport check_gw_stability(const LaurentPoly& q, const Tolerances& tol) {
  require_two_vars(q);
  require(q.block_size() == 1, "stable factorization test needs a scalar polynomial");
  tol.validate();
  const std::vector<int>& n = q.degree();
  GwReport out;
  out.grid_points = std::max(tol.grid_points(2),
                             next_pow2(4 * static_cast<std::size_t>(std::max({n[0], n[1], 1}))));
  out.min_on_torus = torus_min_eig(q, out.grid_points);
  if (out.min_on_torus <= 10.0 * tol.psd_tol * q.scale()) {
    fail(ErrorKind::not_psd, "polynomial is not strictly positive on the torus");
  }
  if (n[0] == 0 || n[1] == 0) {
    out.stable_factorable = true;
    return out;
  }

  const TorusSamples inv_q = sample_torus(
      [&](std::span<const Complex> z) {
        ComplexMatrix v(1, 1);
        v(0, 0) = 1.0 / eval(q, z)(0, 0).real();
        return v;
      },
      2, out.grid_points, 1, 1);
  const CoeffMap c = fourier_coeffs(inv_q, n);

  const auto pts = without_last(box_points(n));
  const auto count = static_cast<Index>(pts.size());
  ComplexMatrix t(count, count);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < count; ++j) {
      t(i, j) = c.at(difference(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]))(0, 0);
    }
  }
  const ComplexMatrix inv = hermitian_part(t).llt().solve(ComplexMatrix::Identity(count, count));
  out.inverse_norm = inv.norm();
  // K \ {n} keeps the linear positions of K, so the box indexing still applies.
  ComplexMatrix padded = ComplexMatrix::Zero(count + 1, count + 1);
  padded.topLeftCorner(count, count) = inv;
  out.max_entry = corner_entries(padded, n, 1);
  out.stable_factorable = out.max_entry <= tol.residual_tol * out.inverse_norm;
  return out;
}

}  // namespace outerfact
