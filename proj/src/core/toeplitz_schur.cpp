#include "outerfact/toeplitz_schur.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "outerfact/error.hpp"
#include "outerfact/schur.hpp"
#include "parallel.hpp"

namespace outerfact {

double LimitSchur::worst_monotonicity() const {
  double worst = 0.0;
  for (const auto& s : history) worst = std::min(worst, s.monotone_min_eig);
  return worst;
}

void require_torus_psd(const LaurentPoly& q, const Tolerances& tol) {
  const double lo = torus_min_eig(q, tol.grid_points(q.dims()));
  if (lo < -tol.psd_tol * q.scale()) {
    fail(ErrorKind::not_psd,
         "symbol is not positive semidefinite on the torus (min eigenvalue " +
             std::to_string(lo) + ")");
  }
}

namespace {

void check_lambda(const LaurentPoly& q, std::vector<Exponent>& lambda) {
  std::sort(lambda.begin(), lambda.end());
  require(std::adjacent_find(lambda.begin(), lambda.end()) == lambda.end(),
          "index set has duplicate multi-indices");
  for (const auto& k : lambda) {
    require(k.size() == q.dims(), "multi-index has the wrong number of variables");
    for (int v : k) require(v >= 0, "multi-indices must be nonnegative");
  }
}

std::vector<Index> keep_indices(const std::vector<Exponent>& lambda, const std::vector<int>& box,
                                Index h) {
  std::vector<Index> keep;
  keep.reserve(lambda.size() * static_cast<std::size_t>(h));
  for (const auto& k : lambda) {
    const Index base = static_cast<Index>(box_linear_index(k, box)) * h;
    for (Index r = 0; r < h; ++r) keep.push_back(base + r);
  }
  return keep;
}

}  // namespace

std::vector<LimitSchur> limiting_schur_many(const LaurentPoly& q,
                                            std::vector<std::vector<Exponent>> lambdas,
                                            const Tolerances& tol) {
  tol.validate();
  require_torus_psd(q, tol);
  const std::size_t dims = q.dims();
  const Index h = q.block_size();
  const auto limit = static_cast<int>(tol.trunc_limit(dims));

  // Points per variable of the first section.
  std::vector<int> size(dims);
  for (std::size_t d = 0; d < dims; ++d) size[d] = q.degree()[d] + 1;
  for (auto& lambda : lambdas) {
    check_lambda(q, lambda);
    for (const auto& k : lambda) {
      for (std::size_t d = 0; d < dims; ++d) size[d] = std::max(size[d], k[d] + 1);
    }
  }

  const double scale = q.scale();
  std::vector<LimitSchur> out(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i].lambda = lambdas[i];

  std::vector<ComplexMatrix> previous(lambdas.size());
  std::vector<char> done(lambdas.size(), 0);
  for (bool first = true;; first = false) {
    std::vector<int> box(dims);
    for (std::size_t d = 0; d < dims; ++d) box[d] = size[d] - 1;
    const ToeplitzTruncation t = toeplitz_truncation(q, box);

    std::vector<ComplexMatrix> current(lambdas.size());
    detail::parallel_for(lambdas.size(), [&](std::size_t i) {
      if (done[i]) return;
      current[i] = schur_complement_raw(t.matrix.matrix(), keep_indices(lambdas[i], box, h),
                                        tol.rank_tol);
    });

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (done[i]) continue;
      TruncationStep step;
      step.box = box;
      if (!first) {
        const ComplexMatrix diff = previous[i] - current[i];
        step.gap = diff.norm() / scale;
        step.monotone_min_eig = min_eigenvalue(hermitian_part(diff)) / scale;
      }
      out[i].history.push_back(step);
      out[i].gap = step.gap;
      out[i].trunc_used = box;
      out[i].value = PsdMatrix::trusted(current[i]);
      if (!first && step.gap <= tol.conv_tol) {
        out[i].converged = true;
        done[i] = 1;
      }
      previous[i] = std::move(current[i]);
    }

    const bool all_done = std::all_of(done.begin(), done.end(), [](char c) { return c != 0; });
    const bool at_limit =
        std::all_of(size.begin(), size.end(), [limit](int s) { return s >= limit; });
    if (all_done || at_limit) break;
    for (auto& s : size) s = std::min(std::max(2 * s, 2), std::max(limit, s));
  }
  return out;
}

LimitSchur limiting_schur(const LaurentPoly& q, std::vector<Exponent> lambda,
                          const Tolerances& tol) {
  return std::move(limiting_schur_many(q, {std::move(lambda)}, tol).front());
}

std::vector<Exponent> leading_indices(int m) {
  std::vector<Exponent> out;
  for (int i = 0; i <= m; ++i) out.push_back({i});
  return out;
}

ComplexMatrix lower_block_toeplitz(const std::vector<ComplexMatrix>& blocks) {
  require(!blocks.empty(), "need at least one block");
  const Index r = blocks.front().rows();
  const Index c = blocks.front().cols();
  const auto n = static_cast<Index>(blocks.size());
  ComplexMatrix out = ComplexMatrix::Zero(n * r, n * c);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) out.block(i * r, j * c, r, c) = blocks[static_cast<std::size_t>(i - j)];
  }
  return out;
}

BauerFactors bauer_recursion(const LaurentPoly& q, int m, const Tolerances& tol) {
  require(q.dims() == 1, "the stationary recursion is for one variable");
  require(m >= 0, "degree must be nonnegative");
  const Index h = q.block_size();
  BauerFactors out;
  out.schur = limiting_schur(q, leading_indices(m), tol);
  const ComplexMatrix& s = out.schur.value.matrix();
  const Index last = static_cast<Index>(m) * h;
  const ComplexMatrix f0 = psd_sqrt(s.block(last, last, h, h));
  const ComplexMatrix f0_pinv = pseudoinverse(f0, tol.rank_tol);
  out.blocks.push_back(f0);
  for (int j = 1; j <= m; ++j) {
    out.blocks.push_back(f0_pinv * s.block(last, static_cast<Index>(m - j) * h, h, h));
  }
  const ComplexMatrix f = lower_block_toeplitz(out.blocks);
  out.assembly_gap = (f.adjoint() * f - s).norm() / q.scale();
  out.ranges_included = true;
  for (int j = 1; j <= m; ++j) {
    out.ranges_included = out.ranges_included &&
                          range_included(out.blocks[static_cast<std::size_t>(j)], f0, tol.rank_tol);
  }
  return out;
}

InheritanceReport inheritance_check(const LaurentPoly& q, int m, const Tolerances& tol) {
  require(q.dims() == 1, "inheritance check is for one variable");
  require(q.degree()[0] <= m, "inheritance check needs deg Q <= m");
  const Index h = q.block_size();
  auto both = limiting_schur_many(q, {leading_indices(m), leading_indices(m - 1)}, tol);
  const ComplexMatrix& s_m = both[0].value.matrix();
  ComplexMatrix expected(s_m.rows(), s_m.cols());
  expected.topLeftCorner(h, h) = q.coeff({0});
  for (int i = 1; i <= m; ++i) {
    const ComplexMatrix qi = q.coeff({i});
    expected.block(static_cast<Index>(i) * h, 0, h, h) = qi;
    expected.block(0, static_cast<Index>(i) * h, h, h) = qi.adjoint();
  }
  if (m > 0) expected.bottomRightCorner(m * h, m * h) = both[1].value.matrix();
  InheritanceReport out;
  out.gap = (s_m - expected).cwiseAbs().maxCoeff() / q.scale();
  out.holds = out.gap <= 10.0 * tol.conv_tol;
  return out;
}

}  // namespace outerfact
