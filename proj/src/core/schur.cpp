#include "outerfact/schur.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "outerfact/error.hpp"

namespace outerfact {

IndexSet::IndexSet(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  require(std::adjacent_find(members_.begin(), members_.end()) == members_.end(),
          "index set has duplicate labels");
}

IndexSet IndexSet::range(std::size_t first, std::size_t last_exclusive) {
  std::vector<std::size_t> m;
  for (std::size_t i = first; i < last_exclusive; ++i) m.push_back(i);
  return IndexSet(std::move(m));
}

bool IndexSet::contains(std::size_t label) const {
  return std::binary_search(members_.begin(), members_.end(), label);
}

bool IndexSet::subset_of(const IndexSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

void IndexSet::check_within(std::size_t host) const {
  require(members_.empty() || members_.back() < host, "index set exceeds host label range");
}

IndexSet IndexSet::complement(std::size_t host) const {
  check_within(host);
  return IndexSet::range(0, host).minus(*this);
}

IndexSet IndexSet::united(const IndexSet& other) const {
  std::vector<std::size_t> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet IndexSet::intersected(const IndexSet& other) const {
  std::vector<std::size_t> out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  std::vector<std::size_t> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

std::vector<std::size_t> IndexSet::positions_in(const IndexSet& super) const {
  require(subset_of(super), "index set is not contained in the enclosing set");
  std::vector<std::size_t> pos;
  pos.reserve(members_.size());
  for (std::size_t label : members_) {
    const auto it = std::lower_bound(super.members_.begin(), super.members_.end(), label);
    pos.push_back(static_cast<std::size_t>(it - super.members_.begin()));
  }
  return pos;
}

std::vector<Index> scalar_indices(const IndexSet& labels, Index block) {
  std::vector<Index> idx;
  idx.reserve(labels.size() * static_cast<std::size_t>(block));
  for (std::size_t label : labels.members()) {
    for (Index r = 0; r < block; ++r) idx.push_back(static_cast<Index>(label) * block + r);
  }
  return idx;
}

ComplexMatrix restrict_to(const ComplexMatrix& m, const IndexSet& labels, Index block) {
  const auto idx = scalar_indices(labels, block);
  return m(idx, idx);
}

ComplexMatrix pad(const ComplexMatrix& compact, const IndexSet& labels, std::size_t host,
                  Index block) {
  labels.check_within(host);
  const auto idx = scalar_indices(labels, block);
  require(compact.rows() == static_cast<Index>(idx.size()) && compact.cols() == compact.rows(),
          "pad: compact size does not match index set");
  const Index n = static_cast<Index>(host) * block;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  out(idx, idx) = compact;
  return out;
}

ComplexMatrix schur_complement_raw(const ComplexMatrix& m, const std::vector<Index>& keep,
                                   double rank_tol) {
  const Index n = m.rows();
  std::vector<char> kept(static_cast<std::size_t>(n), 0);
  for (Index i : keep) kept[static_cast<std::size_t>(i)] = 1;
  std::vector<Index> drop;
  for (Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) drop.push_back(i);
  }
  ComplexMatrix s = m(keep, keep);
  if (drop.empty() || keep.empty()) return s;
  const ComplexMatrix cc = m(drop, drop);
  const ComplexMatrix cl = m(drop, keep);
  Eigen::LLT<ComplexMatrix> llt(cc);
  if (llt.info() == Eigen::Success && llt.rcond() > 10.0 * rank_tol) {
    s.noalias() -= cl.adjoint() * llt.solve(cl);
  } else {
    s.noalias() -= cl.adjoint() * (hermitian_pseudoinverse(cc, rank_tol) * cl);
  }
  return hermitian_part(s);
}

SchurResult schur_complement(const PsdMatrix& m, const IndexSet& lambda, const Tolerances& tol,
                             Index block) {
  require(block > 0 && m.size() % block == 0, "matrix size is not a multiple of the block size");
  const std::size_t host = static_cast<std::size_t>(m.size() / block);
  lambda.check_within(host);
  SchurResult out;
  out.lambda = lambda;
  out.host_size = host;
  out.block_size = block;
  out.compact = PsdMatrix::trusted(
      schur_complement_raw(m.matrix(), scalar_indices(lambda, block), tol.rank_tol));
  return out;
}

ComplexMatrix StructuredCholesky::block(std::size_t i, std::size_t j) const {
  return factor.block(static_cast<Index>(i) * block_size, static_cast<Index>(j) * block_size,
                      block_size, block_size);
}

ComplexMatrix StructuredCholesky::leading(std::size_t k) const {
  const Index n = static_cast<Index>(k + 1) * block_size;
  return factor.topLeftCorner(n, n);
}

StructuredCholesky structured_cholesky(const PsdMatrix& m, Index block, const Tolerances& tol) {
  require(block > 0 && m.size() % block == 0, "matrix size is not a multiple of the block size");
  const Index blocks = m.size() / block;
  StructuredCholesky out;
  out.block_size = block;
  out.factor = ComplexMatrix::Zero(m.size(), m.size());
  if (m.size() == 0) return out;
  // Corners shrink as blocks are peeled, so their round-off is judged against
  // the whole matrix rather than against the corner itself.
  const double floor = tol.rank_tol * std::max(max_abs_eigenvalue(m.matrix()), 0.0);
  ComplexMatrix current = m.matrix();
  for (Index k = blocks - 1; k >= 0; --k) {
    const Index lead = k * block;
    const HermitianEigen e = eigh(hermitian_part(current.block(lead, lead, block, block)));
    Eigen::VectorXd root_values = Eigen::VectorXd::Zero(block);
    Eigen::VectorXd inv_values = Eigen::VectorXd::Zero(block);
    for (Index i = 0; i < block; ++i) {
      if (e.values(i) > floor) {
        root_values(i) = std::sqrt(e.values(i));
        inv_values(i) = 1.0 / root_values(i);
      }
    }
    out.factor.block(lead, lead, block, block) =
        e.vectors * root_values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    if (k == 0) break;
    const ComplexMatrix upper = current.block(0, lead, lead, block);
    const ComplexMatrix row =
        e.vectors * inv_values.cast<Complex>().asDiagonal() * e.vectors.adjoint() * upper.adjoint();
    out.factor.block(lead, 0, block, lead) = row;
    current = hermitian_part(current.topLeftCorner(lead, lead) - row.adjoint() * row);
  }
  return out;
}

bool cholesky_range_conditions(const StructuredCholesky& p, double rank_tol) {
  const Index h = p.block_size;
  for (std::size_t i = 1; i < p.blocks(); ++i) {
    const Index lead = static_cast<Index>(i) * h;
    const ComplexMatrix row = p.factor.block(lead, 0, h, lead);
    if (!range_included(row, p.block(i, i), rank_tol)) return false;
  }
  return true;
}

namespace {

std::size_t host_blocks(const PsdMatrix& m, Index block) {
  require(block > 0 && m.size() % block == 0, "matrix size is not a multiple of the block size");
  return static_cast<std::size_t>(m.size() / block);
}

}  // namespace

IdentityCheck check_quotient_identity(const PsdMatrix& m, const IndexSet& j, const IndexSet& k,
                                      double rel_tol, const Tolerances& tol, Index block) {
  const std::size_t host = host_blocks(m, block);
  k.check_within(host);
  require(j.subset_of(k), "quotient identity needs J contained in K");
  const SchurResult s_j = schur_complement(m, j, tol, block);
  const SchurResult s_k = schur_complement(m, k, tol, block);
  const IndexSet j_in_k(j.positions_in(k));
  const SchurResult nested = schur_complement(s_k.compact, j_in_k, tol, block);
  IdentityCheck out;
  out.gap = relative_gap(s_j.compact.matrix(), nested.compact.matrix(), m.matrix().norm());
  out.holds = out.gap <= rel_tol;
  return out;
}

InclusionExclusion check_inclusion_exclusion(const PsdMatrix& m, const IndexSet& j,
                                             const IndexSet& k, double rel_tol,
                                             const Tolerances& tol, Index block) {
  const std::size_t host = host_blocks(m, block);
  j.check_within(host);
  k.check_within(host);
  const IndexSet n = k.united(j);
  const IndexSet common = k.intersected(j);
  const ComplexMatrix s_n = schur_complement(m, n, tol, block).padded();
  const ComplexMatrix combo = schur_complement(m, k, tol, block).padded() +
                              schur_complement(m, j, tol, block).padded() -
                              schur_complement(m, common, tol, block).padded();
  const double scale = std::max(1.0, m.matrix().norm());

  InclusionExclusion out;
  out.identity_gap = (s_n - combo).norm() / scale;
  const auto only_k = scalar_indices(k.minus(common), block);
  const auto only_j = scalar_indices(j.minus(common), block);
  double worst = 0.0;
  if (!only_k.empty() && !only_j.empty()) {
    worst = std::max(s_n(only_k, only_j).cwiseAbs().maxCoeff(),
                     s_n(only_j, only_k).cwiseAbs().maxCoeff());
  }
  out.zero_gap = worst / scale;
  out.identity_holds = out.identity_gap <= rel_tol;
  out.zero_pattern_holds = out.zero_gap <= rel_tol;
  return out;
}

ComplexMatrix BlockFactor::assembled() const {
  require(q.cols() == p.cols() && q.rows() == r.rows(), "block factor has inconsistent shapes");
  ComplexMatrix l = ComplexMatrix::Zero(p.rows() + r.rows(), p.cols() + r.cols());
  l.topLeftCorner(p.rows(), p.cols()) = p;
  l.bottomLeftCorner(q.rows(), q.cols()) = q;
  l.bottomRightCorner(r.rows(), r.cols()) = r;
  return l;
}

bool block_factor_predicate(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                            const BlockFactor& f, double rel_tol, double rank_tol) {
  require(a.rows() == b.rows() && b.cols() == c.rows(), "block matrix has inconsistent shapes");
  ComplexMatrix m(a.rows() + c.rows(), a.cols() + c.cols());
  m << a, b, b.adjoint(), c;
  const ComplexMatrix l = f.assembled();
  require(l.cols() == m.cols(), "factor does not match the block matrix");
  if (relative_gap(l.adjoint() * l, m, m.norm()) > rel_tol) {
    fail(ErrorKind::validation, "block factorization identity does not hold");
  }
  return range_included(f.q, f.r, rank_tol);
}

IsometryFactor unique_isometry_factor(const BlockFactor& f, const BlockFactor& g, double rel_tol,
                                      double rank_tol) {
  const ComplexMatrix l = f.assembled();
  const ComplexMatrix lt = g.assembled();
  require(l.cols() == lt.cols(), "factors act on different spaces");
  const ComplexMatrix gram = l.adjoint() * l;
  if (relative_gap(gram, lt.adjoint() * lt, gram.norm()) > rel_tol) {
    fail(ErrorKind::validation, "factors do not have the same Gram matrix");
  }
  if (!range_included(f.q, f.r, rank_tol)) {
    fail(ErrorKind::validation, "ran Q is not contained in ran R");
  }
  IsometryFactor out;
  const ComplexMatrix l_pinv = pseudoinverse(l, rank_tol);
  out.v = lt * l_pinv;
  const double scale = std::max(1.0, l.norm());
  out.upper_block_norm = out.v.topRightCorner(g.p.rows(), f.r.rows()).norm();
  out.isometry_defect = (out.v.adjoint() * out.v - l * l_pinv).norm();
  out.intertwining_defect = (lt - out.v * l).norm() / scale;
  return out;
}

}  // namespace outerfact
