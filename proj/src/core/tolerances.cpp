#include "outerfact/tolerances.hpp"

#include <cmath>

#include "outerfact/error.hpp"

namespace outerfact {

void Tolerances::validate() const {
  for (double v : {herm_tol, psd_tol, rank_tol, conv_tol, residual_tol}) {
    require(std::isfinite(v) && v > 0.0, "tolerances must be positive and finite");
  }
  if (grid_points_per_dim != 0) {
    require((grid_points_per_dim & (grid_points_per_dim - 1)) == 0,
            "grid points per dimension must be a power of two");
  }
  require(max_trunc == 0 || max_trunc >= 2, "max truncation must be at least 2");
}

std::size_t Tolerances::trunc_limit(std::size_t dims) const {
  if (max_trunc != 0) return max_trunc;
  return dims <= 1 ? 512 : 48;
}

std::size_t Tolerances::grid_points(std::size_t dims) const {
  if (grid_points_per_dim != 0) return grid_points_per_dim;
  return dims <= 1 ? 512 : 64;
}

}  // namespace outerfact
