#include "outerfact/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "outerfact/error.hpp"
#include "parallel.hpp"

namespace outerfact {

bool is_canonical(const Exponent& k) {
  for (int v : k) {
    if (v != 0) return v > 0;
  }
  return true;
}

Exponent negated(const Exponent& k) {
  Exponent out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), [](int v) { return -v; });
  return out;
}

Exponent difference(const Exponent& a, const Exponent& b) {
  require(a.size() == b.size(), "exponents have different lengths");
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::size_t box_count(const std::vector<int>& upper) {
  std::size_t n = 1;
  for (int u : upper) {
    require(u >= 0, "box bounds must be nonnegative");
    n *= static_cast<std::size_t>(u) + 1;
  }
  return n;
}

std::vector<Exponent> box_points(const std::vector<int>& upper) {
  const std::size_t n = box_count(upper);
  std::vector<Exponent> out;
  out.reserve(n);
  Exponent k(upper.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(k);
    for (std::size_t d = upper.size(); d-- > 0;) {
      if (k[d] < upper[d]) {
        ++k[d];
        break;
      }
      k[d] = 0;
    }
  }
  return out;
}

std::size_t box_linear_index(const Exponent& k, const std::vector<int>& upper) {
  require(k.size() == upper.size(), "multi-index has the wrong number of variables");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < k.size(); ++d) {
    require(k[d] >= 0 && k[d] <= upper[d], "multi-index outside the box");
    idx = idx * (static_cast<std::size_t>(upper[d]) + 1) + static_cast<std::size_t>(k[d]);
  }
  return idx;
}

Complex monomial(std::span<const Complex> z, const Exponent& k) {
  require(z.size() == k.size(), "point and exponent have different dimensions");
  Complex out(1.0, 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= 0) {
      for (int p = 0; p < k[i]; ++p) out *= z[i];
    } else {
      const Complex inv = 1.0 / z[i];
      for (int p = 0; p < -k[i]; ++p) out *= inv;
    }
  }
  return out;
}

namespace {

void check_exponent(const Exponent& k, const std::vector<int>& degree, bool allow_negative) {
  require(k.size() == degree.size(), "exponent has the wrong number of variables");
  for (std::size_t i = 0; i < k.size(); ++i) {
    const int lo = allow_negative ? -degree[i] : 0;
    if (k[i] < lo || k[i] > degree[i]) {
      fail(ErrorKind::validation, "exponent outside the degree range");
    }
  }
}

void check_degree(const std::vector<int>& degree) {
  require(!degree.empty(), "polynomial needs at least one variable");
  for (int n : degree) require(n >= 0, "degrees must be nonnegative");
}

}  // namespace

LaurentPoly LaurentPoly::from_canonical(std::vector<int> degree, Index block, CoeffMap coeffs,
                                        double herm_tol) {
  check_degree(degree);
  require(block > 0, "block size must be positive");
  LaurentPoly q;
  q.degree_ = std::move(degree);
  q.block_ = block;
  for (auto& [k, m] : coeffs) {
    check_exponent(k, q.degree_, true);
    require(is_canonical(k), "Laurent coefficients must use canonical exponents");
    require(m.rows() == block && m.cols() == block, "coefficient has the wrong block size");
    require_finite(m, "Laurent coefficient");
  }
  const Exponent zero(q.degree_.size(), 0);
  if (auto it = coeffs.find(zero); it != coeffs.end()) {
    const double scale = std::max(1.0, it->second.cwiseAbs().maxCoeff());
    if (hermitian_defect(it->second) > herm_tol * scale) {
      fail(ErrorKind::validation, "constant coefficient is not Hermitian");
    }
    it->second = hermitian_part(it->second);
  }
  q.coeffs_ = std::move(coeffs);
  return q;
}

LaurentPoly LaurentPoly::from_full(std::vector<int> degree, Index block, const CoeffMap& coeffs,
                                   double herm_tol) {
  CoeffMap canonical;
  for (const auto& [k, m] : coeffs) {
    if (is_canonical(k)) {
      canonical.emplace(k, m);
      continue;
    }
    const auto partner = coeffs.find(negated(k));
    if (partner == coeffs.end()) {
      fail(ErrorKind::validation, "coefficient without its canonical Hermitian partner");
    }
    require(m.rows() == partner->second.cols() && m.cols() == partner->second.rows(),
            "Hermitian partner has the wrong shape");
    const double scale = std::max({1.0, m.cwiseAbs().maxCoeff()});
    if ((m - partner->second.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale) {
      fail(ErrorKind::validation, "coefficients violate Q_{-k} = Q_k^*");
    }
  }
  return from_canonical(std::move(degree), block, std::move(canonical), herm_tol);
}

LaurentPoly LaurentPoly::square_of(const AnalyticPoly& p) {
  const std::vector<int>& degree = p.degree();
  CoeffMap out;
  for (const auto& [a, pa] : p.coeffs()) {
    for (const auto& [b, pb] : p.coeffs()) {
      const Exponent m = difference(b, a);
      if (!is_canonical(m)) continue;
      auto [it, inserted] = out.try_emplace(m, ComplexMatrix::Zero(p.cols(), p.cols()));
      it->second.noalias() += pa.adjoint() * pb;
    }
  }
  return from_canonical(degree, p.cols(), std::move(out));
}

LaurentPoly LaurentPoly::constant(std::size_t dims, const ComplexMatrix& q0) {
  CoeffMap c;
  c.emplace(Exponent(dims, 0), q0);
  return from_canonical(std::vector<int>(dims, 0), q0.rows(), std::move(c));
}

ComplexMatrix LaurentPoly::coeff(const Exponent& k) const {
  require(k.size() == dims(), "exponent has the wrong number of variables");
  if (is_canonical(k)) {
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? ComplexMatrix::Zero(block_, block_) : it->second;
  }
  const auto it = coeffs_.find(negated(k));
  if (it == coeffs_.end()) return ComplexMatrix::Zero(block_, block_);
  return it->second.adjoint();
}

double LaurentPoly::scale() const {
  return std::max(1.0, coeff(Exponent(dims(), 0)).norm());
}

AnalyticPoly AnalyticPoly::from_coeffs(std::vector<int> degree, Index rows, Index cols,
                                       CoeffMap coeffs) {
  check_degree(degree);
  require(rows >= 0 && cols > 0, "analytic polynomial needs positive block dimensions");
  for (const auto& [k, m] : coeffs) {
    check_exponent(k, degree, false);
    require(m.rows() == rows && m.cols() == cols, "coefficient has the wrong shape");
    require_finite(m, "analytic coefficient");
  }
  AnalyticPoly p;
  p.degree_ = std::move(degree);
  p.rows_ = rows;
  p.cols_ = cols;
  p.coeffs_ = std::move(coeffs);
  return p;
}

ComplexMatrix AnalyticPoly::coeff(const Exponent& k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? ComplexMatrix::Zero(rows_, cols_) : it->second;
}

ComplexMatrix eval(const LaurentPoly& q, std::span<const Complex> z) {
  require(z.size() == q.dims(), "point has the wrong number of variables");
  for (const Complex& zi : z) {
    if (std::abs(std::abs(zi) - 1.0) > 1e-10) {
      fail(ErrorKind::validation, "Laurent polynomial evaluated off the torus");
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(q.block_size(), q.block_size());
  for (const auto& [k, m] : q.canonical()) {
    const Complex zk = monomial(z, k);
    if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; })) {
      out += m;
    } else {
      out += zk * m + std::conj(zk) * m.adjoint();
    }
  }
  return out;
}

ComplexMatrix eval(const AnalyticPoly& p, std::span<const Complex> z) {
  require(z.size() == p.dims(), "point has the wrong number of variables");
  ComplexMatrix out = ComplexMatrix::Zero(p.rows(), p.cols());
  for (const auto& [k, m] : p.coeffs()) out += monomial(z, k) * m;
  return out;
}

TorusGrid::TorusGrid(std::size_t dims, std::size_t points_per_dim)
    : dims_(dims), n_(points_per_dim), total_(1) {
  require(dims > 0 && points_per_dim > 0, "torus grid needs positive dimensions");
  for (std::size_t d = 0; d < dims; ++d) total_ *= n_;
  roots_.reserve(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    // Exact values at the quarter points keep z = -1, +-i representable.
    if (4 * j % n_ == 0) {
      static constexpr Complex quarter[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      roots_.push_back(quarter[4 * j / n_]);
    } else {
      roots_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(n_)));
    }
  }
}

std::vector<Complex> TorusGrid::point(std::size_t linear) const {
  std::vector<Complex> z(dims_);
  for (std::size_t d = dims_; d-- > 0;) {
    z[d] = roots_[linear % n_];
    linear /= n_;
  }
  return z;
}

namespace {

// Max of f over the grid points, evaluated in parallel and reduced in
// index order.
double grid_max(const TorusGrid& grid, const std::function<double(std::span<const Complex>)>& f) {
  std::vector<double> values(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const auto z = grid.point(i);
    values[i] = f(z);
  });
  double best = -INFINITY;
  for (double v : values) best = std::max(best, v);
  return best;
}

}  // namespace

double torus_min_eig(const LaurentPoly& q, std::size_t points_per_dim) {
  const TorusGrid grid(q.dims(), points_per_dim);
  return -grid_max(grid, [&](std::span<const Complex> z) { return -min_eigenvalue(eval(q, z)); });
}

double residual(const LaurentPoly& q, const AnalyticPoly& p, std::size_t points_per_dim) {
  require(q.dims() == p.dims(), "residual: polynomials have different numbers of variables");
  require(q.block_size() == p.cols(), "residual: block sizes do not match");
  const TorusGrid grid(q.dims(), points_per_dim);
  return grid_max(grid, [&](std::span<const Complex> z) {
    const ComplexMatrix pz = eval(p, z);
    return (eval(q, z) - pz.adjoint() * pz).norm();
  });
}

ToeplitzTruncation toeplitz_truncation(const LaurentPoly& q, const std::vector<int>& box) {
  require(box.size() == q.dims(), "truncation box has the wrong number of variables");
  for (std::size_t d = 0; d < box.size(); ++d) {
    require(box[d] >= q.degree()[d], "truncation box smaller than the degree");
  }
  const Index h = q.block_size();
  const auto points = box_points(box);
  const Index n = static_cast<Index>(points.size()) * h;
  ComplexMatrix t = ComplexMatrix::Zero(n, n);

  // Every stored coefficient and its adjoint, keyed by exponent.
  std::vector<std::pair<Exponent, ComplexMatrix>> support;
  for (const auto& [k, m] : q.canonical()) {
    support.emplace_back(k, m);
    if (k != negated(k)) support.emplace_back(negated(k), m.adjoint());
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const auto& [delta, m] : support) {
      Exponent j = difference(points[i], delta);
      bool inside = true;
      for (std::size_t d = 0; d < j.size(); ++d) inside = inside && j[d] >= 0 && j[d] <= box[d];
      if (!inside) continue;
      const Index col = static_cast<Index>(box_linear_index(j, box)) * h;
      t.block(static_cast<Index>(i) * h, col, h, h) = m;
    }
  }
  return {box, h, PsdMatrix::trusted(t)};
}

TorusSamples sample_torus(const std::function<ComplexMatrix(std::span<const Complex>)>& f,
                          std::size_t dims, std::size_t points_per_dim, Index rows, Index cols) {
  const TorusGrid grid(dims, points_per_dim);
  TorusSamples out;
  out.shape.assign(dims, points_per_dim);
  out.rows = rows;
  out.cols = cols;
  out.values.resize(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const auto z = grid.point(i);
    out.values[i] = f(z);
  });
  for (const auto& v : out.values) {
    require(v.rows() == rows && v.cols() == cols, "sampled value has the wrong shape");
  }
  return out;
}

namespace {

std::mutex fftw_plan_mutex;

}  // namespace

CoeffMap fourier_coeffs(const TorusSamples& f, const std::vector<int>& max_exponent) {
  const std::size_t dims = f.shape.size();
  require(dims > 0 && max_exponent.size() == dims, "exponent bounds do not match the grid");
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    require(max_exponent[d] >= 0, "exponent bounds must be nonnegative");
    const std::size_t needed = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(max_exponent[d]));
    if (f.shape[d] < needed) {
      fail(ErrorKind::validation, "grid too coarse for the requested exponents (aliasing guard)");
    }
    total *= f.shape[d];
  }
  require(f.values.size() == total, "sample count does not match the grid shape");

  std::vector<int> n(f.shape.begin(), f.shape.end());
  fftw_complex* buffer = fftw_alloc_complex(total);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_plan_mutex);
    plan = fftw_plan_dft(static_cast<int>(dims), n.data(), buffer, buffer, FFTW_FORWARD,
                         FFTW_ESTIMATE);
  }

  std::vector<int> span_upper(dims);
  for (std::size_t d = 0; d < dims; ++d) span_upper[d] = 2 * max_exponent[d];
  const auto offsets = box_points(span_upper);
  CoeffMap out;
  for (const auto& off : offsets) {
    Exponent k(dims);
    for (std::size_t d = 0; d < dims; ++d) k[d] = off[d] - max_exponent[d];
    out.emplace(k, ComplexMatrix::Zero(f.rows, f.cols));
  }

  const double norm = 1.0 / static_cast<double>(total);
  for (Index r = 0; r < f.rows; ++r) {
    for (Index c = 0; c < f.cols; ++c) {
      for (std::size_t i = 0; i < total; ++i) {
        buffer[i][0] = f.values[i](r, c).real();
        buffer[i][1] = f.values[i](r, c).imag();
      }
      fftw_execute(plan);
      for (auto& [k, m] : out) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d < dims; ++d) {
          const int len = n[d];
          idx = idx * static_cast<std::size_t>(len) +
                static_cast<std::size_t>(((k[d] % len) + len) % len);
        }
        m(r, c) = Complex(buffer[idx][0], buffer[idx][1]) * norm;
      }
    }
  }
  {
    std::lock_guard lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(buffer);
  return out;
}

std::vector<Complex> scalar_roots(const AnalyticPoly& p) {
  require(p.dims() == 1 && p.rows() == 1 && p.cols() == 1,
          "scalar_roots needs a scalar one-variable polynomial");
  std::vector<Complex> c(static_cast<std::size_t>(p.degree()[0]) + 1);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = p.coeff({static_cast<int>(j)})(0, 0);
  double top = 0.0;
  for (const Complex& v : c) top = std::max(top, std::abs(v));
  require(top > 0.0, "zero polynomial has no well-defined roots");
  while (std::abs(c.back()) <= 1e-14 * top) c.pop_back();
  const Index deg = static_cast<Index>(c.size()) - 1;
  if (deg == 0) return {};
  ComplexMatrix companion = ComplexMatrix::Zero(deg, deg);
  for (Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  std::sort(roots.begin(), roots.end(),
            [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
  return roots;
}

bool outer_by_roots(const std::vector<Complex>& roots, double tol) {
  return std::all_of(roots.begin(), roots.end(),
                     [tol](const Complex& r) { return std::abs(r) >= 1.0 - tol; });
}

}  // namespace outerfact
