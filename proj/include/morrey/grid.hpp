#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace morrey {

enum class GridMode { Parabolic, Elliptic };

/// Uniform cell-centered grid on R^{d+1} (parabolic) or R^d (elliptic).
/// Time step is locked to ht = hx^2 so that cylinders with rho = k*hx
/// contain exactly k^2 time layers.
struct Grid {
  int d = 1;
  int nx = 2;
  int nt = 2;
  double hx = 1.0;
  double ht = 1.0;
  double origin_t = 0.0;             // center of time layer 0
  Eigen::Vector3d origin_x{0, 0, 0}; // center of spatial cell (0,...,0)
  GridMode mode = GridMode::Parabolic;

  long spatial_cells() const {
    long n = 1;
    for (int a = 0; a < d; ++a) n *= nx;
    return n;
  }
  long cells() const { return nt * spatial_cells(); }

  long index(int it, const std::array<int, 3>& ix) const {
    long idx = it;
    for (int a = 0; a < d; ++a) idx = idx * nx + ix[a];
    return idx;
  }
  double center_t(int it) const { return origin_t + it * ht; }
  double center_x(int axis, int i) const { return origin_x[axis] + i * hx; }
  Eigen::Vector3d center(const std::array<int, 3>& ix) const {
    Eigen::Vector3d x{0, 0, 0};
    for (int a = 0; a < d; ++a) x[a] = center_x(a, ix[a]);
    return x;
  }

  double spatial_cell_volume() const {
    double v = 1;
    for (int a = 0; a < d; ++a) v *= hx;
    return v;
  }
  double cell_volume() const {
    return mode == GridMode::Parabolic ? ht * spatial_cell_volume()
                                       : spatial_cell_volume();
  }
  /// Largest distance between two points of the grid's bounding box,
  /// measured in the spatial metric (time enters through sqrt).
  double diameter() const;

  bool same_layout(const Grid& o) const {
    return d == o.d && nx == o.nx && nt == o.nt && mode == o.mode;
  }
};

Grid make_grid(int d, int nx, int nt, double hx,
               double origin_t = 0.0,
               const Eigen::Vector3d& origin_x = Eigen::Vector3d::Zero(),
               GridMode mode = GridMode::Parabolic);

struct GridFunction {
  Grid grid;
  Eigen::ArrayXd values;
};

using AnalyticField = std::function<double(double t, const Eigen::Vector3d& x)>;

/// Sample an analytic expression at all cell centers.
/// Throws if any evaluation is non-finite (singular profiles must cap).
GridFunction sample(const AnalyticField& f, const Grid& grid);
GridFunction zeros(const Grid& grid);

/// C_rho(t,x) = { |x-y| < rho, t <= s < t + rho^2 }, or the symmetric box
/// D_r recentered at base: { |s-t| <= r^2, |y-x| <= r }.
struct ParabolicCylinder {
  enum class Kind { Cylinder, Box };
  double rho = 1.0;
  double t = 0.0;
  Eigen::Vector3d x{0, 0, 0};
  Kind kind = Kind::Cylinder;

  /// Geometric center (t + rho^2/2, x) of a forward cylinder.
  double geometric_center_t() const {
    return kind == Kind::Cylinder ? t + 0.5 * rho * rho : t;
  }
};

/// A lattice region: a time-layer range and a set of spatial row spans
/// (a ball is a stack of axis-aligned segments along the last axis).
struct RowSpan {
  int i1 = 0, i2 = 0; // leading spatial indices (unused below dimension)
  int j0 = 0, j1 = 0; // half-open range along the last active axis
};

struct Region {
  int t0 = 0, t1 = 0; // half-open time-layer range
  std::vector<RowSpan> rows;

  bool empty() const { return t0 >= t1 || rows.empty(); }
  long spatial_count() const {
    long n = 0;
    for (const auto& r : rows) n += r.j1 - r.j0;
    return n;
  }
  long cell_count() const { return empty() ? 0 : (t1 - t0) * spatial_count(); }
};

/// Cells whose centers lie in the region; clipped to the grid.
Region region_cells(const Grid& grid, const ParabolicCylinder& cyl);

/// Prefix sums of |f|^p over all lattice-aligned boxes; O(2^{d+1}) box sums.
class SummedTable {
 public:
  SummedTable(const GridFunction& f, double p);

  /// Sum of |f|^p * cell_volume over the index box
  /// [t0,t1) x [a,b) x [c,d) x [e,f) (active axes only).
  double box_sum(int t0, int t1, int a = 0, int b = 1, int c = 0, int d2 = 1,
                 int e = 0, int f2 = 1) const;
  double region_sum(const Region& r) const;

  double exponent() const { return p_; }
  const Grid& grid() const { return grid_; }

 private:
  long tindex(int it, int i1, int i2, int i3) const;
  Grid grid_;
  double p_;
  Eigen::ArrayXd table_;
};

/// Second-order finite differences; interior central, boundary one-sided.
/// Values within one cell of the boundary are stencil-limited; callers
/// comparing norms should discard that margin.
GridFunction diff_x(const GridFunction& u, int axis);
GridFunction diff_xx(const GridFunction& u, int ai, int aj);
GridFunction diff_t(const GridFunction& u);
GridFunction laplacian(const GridFunction& u);
std::vector<GridFunction> gradient(const GridFunction& u);
/// |D^2 u| = Frobenius norm of the spatial Hessian, per cell.
GridFunction hessian_norm(const GridFunction& u);
/// Pointwise |Du|.
GridFunction gradient_norm(const GridFunction& u);
/// f = dt u + Lap u (the forward heat operator of the kernel representation).
GridFunction heat_operator(const GridFunction& u);

constexpr int kBoundaryMargin = 1;

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// PMG/1 file format.
void write_pmg(const std::string& path, const GridFunction& f);
GridFunction read_pmg(const std::string& path);

} // namespace morrey
