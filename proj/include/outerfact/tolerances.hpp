#pragma once

#include <cstddef>

namespace outerfact {

/// Numerical thresholds shared by every module.
///
/// `max_trunc` and `grid_points_per_dim` use 0 for "pick the default for the
/// number of variables": 512 / 48 truncation points per dimension and
/// 512 / 64 grid points per dimension for one / two variables.
struct Tolerances {
  double herm_tol = 1e-10;
  double psd_tol = 1e-9;
  double rank_tol = 1e-10;
  double conv_tol = 1e-8;
  double residual_tol = 1e-8;
  std::size_t max_trunc = 0;
  std::size_t grid_points_per_dim = 0;

  /// Throws Error(validation) unless all thresholds are positive and the grid
  /// size, when set, is a power of two.
  void validate() const;

  std::size_t trunc_limit(std::size_t dims) const;
  std::size_t grid_points(std::size_t dims) const;
};

}  // namespace outerfact
