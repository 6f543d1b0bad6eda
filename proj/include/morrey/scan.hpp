#pragma once

#include "morrey/grid.hpp"

#include <memory>
#include <vector>

namespace morrey::detail {

/// Lattice offsets of the open ball |o| < k (in cell units), stored as
/// last-axis spans per leading-offset row.
struct OffsetRow {
  int d1 = 0, d2 = 0; // leading-axis offsets (unused below dimension)
  int j0 = 0, j1 = 0; // half-open span along the last axis
};
std::vector<OffsetRow> ball_offsets(int d, int k);
long ball_offset_count(const std::vector<OffsetRow>& rows);

/// Spatial ball sums at every cell, per time slice. Direct prefix-span
/// evaluation for small workloads, FFT convolution for large ones.
class BallSummer {
 public:
  BallSummer(const Grid& grid, const Eigen::ArrayXd& vals);
  ~BallSummer();

  /// Sum of vals over {y : |y - x| < k*hx} clipped to the grid, all cells.
  Eigen::ArrayXd ball_sums(int k);
  /// Number of grid cells in the same ball (independent of t).
  Eigen::ArrayXd ball_counts(int k);

 private:
  struct Fft;
  Eigen::ArrayXd direct_sums(const std::vector<OffsetRow>& rows) const;
  Eigen::ArrayXd fft_sums(int k);
  Eigen::ArrayXd kernel_field(const std::vector<OffsetRow>& rows) const;

  Grid grid_;
  Eigen::ArrayXd vals_;
  Eigen::ArrayXd prefix_; // per (slice, leading idx): prefix along last axis
  std::unique_ptr<Fft> fft_;
};

/// Sliding spatial ball maximum (morphological dilation), |offset| < k.
Eigen::ArrayXd ball_max(const Grid& grid, const Eigen::ArrayXd& vals, int k);

/// out(it, x) = sum over layers [it, it+w) clipped to the grid.
Eigen::ArrayXd time_window_sums(const Grid& grid, const Eigen::ArrayXd& field, int w);
/// Number of layers in [it, it+w) clipped, per layer.
Eigen::ArrayXd time_window_counts(const Grid& grid, int w);
/// out(it, x) = max over layers [it, it+w) clipped (w >= 1).
Eigen::ArrayXd time_window_max(const Grid& grid, const Eigen::ArrayXd& field, int w);
/// Trailing variant: max over layers (it-w, it].
Eigen::ArrayXd trailing_time_window_max(const Grid& grid, const Eigen::ArrayXd& field, int w);

/// Grid-aligned radius multipliers scanned by discrete sups: every k up to
/// 48, then a geometric tail, capped by rho_cap and the grid diameter.
std::vector<int> default_radii(const Grid& grid, double rho_cap);

} // namespace morrey::detail
