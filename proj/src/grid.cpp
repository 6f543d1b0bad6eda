#include "morrey/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace morrey {

namespace {
constexpr long kMaxCells = 64L * 1024 * 1024;
} // namespace

double Grid::diameter() const {
  double dx2 = 0;
  for (int a = 0; a < d; ++a) dx2 += (nx * hx) * (nx * hx);
  double dt = mode == GridMode::Parabolic ? nt * ht : 0.0;
  return std::sqrt(dx2 + dt); // time counts as length^2
}

Grid make_grid(int d, int nx, int nt, double hx, double origin_t,
               const Eigen::Vector3d& origin_x, GridMode mode) {
  if (d < 1 || d > 3) throw std::invalid_argument("make_grid: d must be 1, 2 or 3");
  if (hx <= 0) throw std::invalid_argument("make_grid: hx must be positive");
  if (mode == GridMode::Elliptic) {
    nt = 1;
  } else if (nt < 2) {
    throw std::invalid_argument("make_grid: nt >= 2 required in parabolic mode");
  }
  if (nx < 2) throw std::invalid_argument("make_grid: nx >= 2 required");
  Grid g;
  g.d = d;
  g.nx = nx;
  g.nt = nt;
  g.hx = hx;
  g.ht = hx * hx;
  g.origin_t = origin_t;
  g.origin_x = origin_x;
  g.mode = mode;
  if (g.cells() > kMaxCells)
    throw std::invalid_argument("make_grid: cell count exceeds memory budget");
  return g;
}

GridFunction sample(const AnalyticField& f, const Grid& grid) {
  GridFunction u{grid, Eigen::ArrayXd(grid.cells())};
  std::array<int, 3> ix{0, 0, 0};
  long idx = 0;
  for (int it = 0; it < grid.nt; ++it) {
    double t = grid.center_t(it);
    const long nsp = grid.spatial_cells();
    for (long s = 0; s < nsp; ++s, ++idx) {
      long rem = s;
      for (int a = grid.d - 1; a >= 0; --a) {
        ix[a] = int(rem % grid.nx);
        rem /= grid.nx;
      }
      double v = f(t, grid.center(ix));
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "sample: non-finite value at t=" << t << " x=("
           << grid.center(ix).head(grid.d).transpose() << ")";
        throw std::runtime_error(os.str());
      }
      u.values[idx] = v;
    }
  }
  return u;
}

GridFunction zeros(const Grid& grid) {
  return GridFunction{grid, Eigen::ArrayXd::Zero(grid.cells())};
}

Region region_cells(const Grid& grid, const ParabolicCylinder& cyl) {
  Region reg;
  const double rho = cyl.rho;
  if (rho <= 0) throw std::invalid_argument("region_cells: rho must be positive");

  // Time layers.
  if (grid.mode == GridMode::Elliptic) {
    reg.t0 = 0;
    reg.t1 = 1;
  } else if (cyl.kind == ParabolicCylinder::Kind::Cylinder) {
    // centers s with t <= s < t + rho^2
    double lo = (cyl.t - grid.origin_t) / grid.ht;
    double hi = (cyl.t + rho * rho - grid.origin_t) / grid.ht;
    reg.t0 = std::max(0, int(std::ceil(lo - 1e-12)));
    reg.t1 = std::min(grid.nt, int(std::floor(hi - 1e-12)) + 1); // strict upper
  } else {
    // |s - t| <= r^2
    double lo = (cyl.t - rho * rho - grid.origin_t) / grid.ht;
    double hi = (cyl.t + rho * rho - grid.origin_t) / grid.ht;
    reg.t0 = std::max(0, int(std::ceil(lo - 1e-12)));
    reg.t1 = std::min(grid.nt, int(std::floor(hi + 1e-12)) + 1);
  }
  if (reg.t0 >= reg.t1) {
    reg.rows.clear();
    return reg;
  }

  // Spatial rows: centers y with |y - x| < rho (cylinder) or <= rho (box).
  const bool closed = cyl.kind == ParabolicCylinder::Kind::Box;
  auto inside = [&](double r2) {
    return closed ? r2 <= rho * rho + 1e-12 * rho * rho
                  : r2 < rho * rho - 1e-12 * rho * rho;
  };
  auto axis_range = [&](int axis, double room2, int& a, int& b) {
    // indices i with (center - x_axis)^2 <= room2 (coarse bound, refined by test)
    double room = std::sqrt(std::max(0.0, room2)) + grid.hx;
    double c = (cyl.x[axis] - grid.origin_x[axis]) / grid.hx;
    a = std::max(0, int(std::floor(c - room / grid.hx)));
    b = std::min(grid.nx, int(std::ceil(c + room / grid.hx)) + 1);
  };

  const double rr = rho * rho;
  if (grid.d == 1) {
    int a, b;
    axis_range(0, rr, a, b);
    int j0 = -1, j1 = -1;
    for (int j = a; j < b; ++j) {
      double dy = grid.center_x(0, j) - cyl.x[0];
      if (inside(dy * dy)) {
        if (j0 < 0) j0 = j;
        j1 = j + 1;
      }
    }
    if (j0 >= 0) reg.rows.push_back({0, 0, j0, j1});
  } else if (grid.d == 2) {
    int a, b;
    axis_range(0, rr, a, b);
    for (int i1 = a; i1 < b; ++i1) {
      double d1 = grid.center_x(0, i1) - cyl.x[0];
      int c, e;
      axis_range(1, rr - d1 * d1, c, e);
      int j0 = -1, j1 = -1;
      for (int j = c; j < e; ++j) {
        double d2 = grid.center_x(1, j) - cyl.x[1];
        if (inside(d1 * d1 + d2 * d2)) {
          if (j0 < 0) j0 = j;
          j1 = j + 1;
        }
      }
      if (j0 >= 0) reg.rows.push_back({i1, 0, j0, j1});
    }
  } else {
    int a, b;
    axis_range(0, rr, a, b);
    for (int i1 = a; i1 < b; ++i1) {
      double d1 = grid.center_x(0, i1) - cyl.x[0];
      int c, e;
      axis_range(1, rr - d1 * d1, c, e);
      for (int i2 = c; i2 < e; ++i2) {
        double d2 = grid.center_x(1, i2) - cyl.x[1];
        int f, g;
        axis_range(2, rr - d1 * d1 - d2 * d2, f, g);
        int j0 = -1, j1 = -1;
        for (int j = f; j < g; ++j) {
          double d3 = grid.center_x(2, j) - cyl.x[2];
          if (inside(d1 * d1 + d2 * d2 + d3 * d3)) {
            if (j0 < 0) j0 = j;
            j1 = j + 1;
          }
        }
        if (j0 >= 0) reg.rows.push_back({i1, i2, j0, j1});
      }
    }
  }
  if (reg.rows.empty()) reg.t1 = reg.t0;
  return reg;
}

SummedTable::SummedTable(const GridFunction& f, double p) : grid_(f.grid), p_(p) {
  if (!(p >= 1) || !std::isfinite(p))
    throw std::invalid_argument("SummedTable: p must be finite and >= 1");
  if (!f.values.allFinite())
    throw std::invalid_argument("SummedTable: non-finite values");

  const int nt = grid_.nt, nx = grid_.nx, d = grid_.d;
  const int m1 = nx + 1;
  long total = nt + 1;
  for (int a = 0; a < d; ++a) total *= m1;
  table_ = Eigen::ArrayXd::Zero(total);

  const int n2 = d >= 2 ? nx : 1;
  const int n3 = d >= 3 ? nx : 1;
  const int p2 = d >= 2 ? m1 : 1;
  const int p3 = d >= 3 ? m1 : 1;
  auto src = [&](int it, int i1, int i2, int i3) {
    return std::pow(std::abs(f.values[((long(it) * nx + i1) * n2 + i2) * n3 + i3]), p_);
  };
  auto tab = [&](int it, int i1, int i2, int i3) -> double& {
    if (d < 2) i2 = 0;
    if (d < 3) i3 = 0;
    return table_[((long(it) * m1 + i1) * p2 + i2) * p3 + i3];
  };
  for (int it = 1; it <= nt; ++it)
    for (int i1 = 1; i1 <= nx; ++i1)
      for (int i2 = 1; i2 <= n2; ++i2)
        for (int i3 = 1; i3 <= n3; ++i3) {
          double v = src(it - 1, i1 - 1, i2 - 1, i3 - 1);
          v += tab(it - 1, i1, i2, i3) + tab(it, i1 - 1, i2, i3);
          v -= tab(it - 1, i1 - 1, i2, i3);
          if (d >= 2) {
            v += tab(it, i1, i2 - 1, i3) - tab(it - 1, i1, i2 - 1, i3) -
                 tab(it, i1 - 1, i2 - 1, i3) + tab(it - 1, i1 - 1, i2 - 1, i3);
          }
          if (d >= 3) {
            // inclusion-exclusion over the fourth axis
            v += tab(it, i1, i2, i3 - 1) - tab(it - 1, i1, i2, i3 - 1) -
                 tab(it, i1 - 1, i2, i3 - 1) + tab(it - 1, i1 - 1, i2, i3 - 1) -
                 tab(it, i1, i2 - 1, i3 - 1) + tab(it - 1, i1, i2 - 1, i3 - 1) +
                 tab(it, i1 - 1, i2 - 1, i3 - 1) - tab(it - 1, i1 - 1, i2 - 1, i3 - 1);
          }
          tab(it, i1, i2, i3) = v;
          if (!std::isfinite(v))
            throw std::runtime_error("SummedTable: accumulation overflow");
        }
}

long SummedTable::tindex(int it, int i1, int i2, int i3) const {
  const int m1 = grid_.nx + 1;
  const int p2 = grid_.d >= 2 ? m1 : 1;
  const int p3 = grid_.d >= 3 ? m1 : 1;
  return ((long(it) * m1 + i1) * p2 + i2) * p3 + i3;
}

double SummedTable::box_sum(int t0, int t1, int a, int b, int c, int d2, int e,
                            int f2) const {
  const int d = grid_.d;
  if (d < 2) { c = 0; d2 = 1; }
  if (d < 3) { e = 0; f2 = 1; }
  if (t0 >= t1 || a >= b || c >= d2 || e >= f2) return 0.0;
  auto T = [&](int it, int i1, int i2, int i3) { return table_[tindex(it, i1, i2, i3)]; };
  double s = 0;
  for (int st = 0; st < 2; ++st)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < (d >= 2 ? 2 : 1); ++s2)
        for (int s3 = 0; s3 < (d >= 3 ? 2 : 1); ++s3) {
          int lowers = (1 - st) + (1 - s1) + (d >= 2 ? 1 - s2 : 0) +
                       (d >= 3 ? 1 - s3 : 0);
          int sign = (lowers % 2 == 0) ? 1 : -1;
          s += sign * T(st ? t1 : t0, s1 ? b : a, d >= 2 ? (s2 ? d2 : c) : 0,
                        d >= 3 ? (s3 ? f2 : e) : 0);
        }
  return s * grid_.cell_volume();
}

double SummedTable::region_sum(const Region& r) const {
  if (r.empty()) return 0.0;
  double s = 0;
  for (const auto& row : r.rows) {
    switch (grid_.d) {
      case 1: s += box_sum(r.t0, r.t1, row.j0, row.j1); break;
      case 2: s += box_sum(r.t0, r.t1, row.i1, row.i1 + 1, row.j0, row.j1); break;
      default:
        s += box_sum(r.t0, r.t1, row.i1, row.i1 + 1, row.i2, row.i2 + 1, row.j0,
                     row.j1);
    }
  }
  return s;
}

namespace {

// Apply a 1-D stencil pass along the given flattened stride.
enum class Axis { Time, Space };

GridFunction derivative_pass(const GridFunction& u, int axis, int order,
                             bool time_axis) {
  const Grid& g = u.grid;
  const int n = time_axis ? g.nt : g.nx;
  const double h = time_axis ? g.ht : g.hx;
  if (n < 4) throw std::invalid_argument("derivative: grid too small for stencil");
  GridFunction out = zeros(g);

  // strides
  long stride = 1;
  if (!time_axis) {
    for (int a = g.d - 1; a > axis; --a) stride *= g.nx;
  } else {
    stride = g.spatial_cells();
  }
  const long lines = g.cells() / n;

  const double inv_h = 1.0 / h, inv_h2 = 1.0 / (h * h);
  for (long line = 0; line < lines; ++line) {
    // base index of this line
    long base;
    if (time_axis) {
      base = line;
    } else {
      // decompose line over the remaining axes
      long outer = line / stride;
      long inner = line % stride;
      base = outer * stride * n + inner;
    }
    auto at = [&](int i) { return u.values[base + i * stride]; };
    auto& ov = out.values;
    if (order == 1) {
      ov[base] = (-3 * at(0) + 4 * at(1) - at(2)) * 0.5 * inv_h;
      for (int i = 1; i < n - 1; ++i)
        ov[base + i * stride] = (at(i + 1) - at(i - 1)) * 0.5 * inv_h;
      ov[base + (n - 1) * stride] =
          (3 * at(n - 1) - 4 * at(n - 2) + at(n - 3)) * 0.5 * inv_h;
    } else {
      ov[base] = (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) * inv_h2;
      for (int i = 1; i < n - 1; ++i)
        ov[base + i * stride] = (at(i + 1) - 2 * at(i) + at(i - 1)) * inv_h2;
      ov[base + (n - 1) * stride] =
          (2 * at(n - 1) - 5 * at(n - 2) + 4 * at(n - 3) - at(n - 4)) * inv_h2;
    }
  }
  return out;
}

} // namespace

GridFunction diff_x(const GridFunction& u, int axis) {
  if (axis < 0 || axis >= u.grid.d) throw std::invalid_argument("diff_x: bad axis");
  return derivative_pass(u, axis, 1, false);
}

GridFunction diff_t(const GridFunction& u) {
  if (u.grid.mode == GridMode::Elliptic)
    throw std::invalid_argument("diff_t: elliptic grid has no time axis");
  return derivative_pass(u, 0, 1, true);
}

GridFunction diff_xx(const GridFunction& u, int ai, int aj) {
  if (ai < 0 || ai >= u.grid.d || aj < 0 || aj >= u.grid.d)
    throw std::invalid_argument("diff_xx: bad axis");
  if (ai == aj) return derivative_pass(u, ai, 2, false);
  return diff_x(diff_x(u, ai), aj);
}

GridFunction laplacian(const GridFunction& u) {
  GridFunction out = diff_xx(u, 0, 0);
  for (int a = 1; a < u.grid.d; ++a) out.values += diff_xx(u, a, a).values;
  return out;
}

std::vector<GridFunction> gradient(const GridFunction& u) {
  std::vector<GridFunction> g;
  for (int a = 0; a < u.grid.d; ++a) g.push_back(diff_x(u, a));
  return g;
}

GridFunction gradient_norm(const GridFunction& u) {
  GridFunction out = zeros(u.grid);
  for (int a = 0; a < u.grid.d; ++a) out.values += diff_x(u, a).values.square();
  out.values = out.values.sqrt();
  return out;
}

GridFunction hessian_norm(const GridFunction& u) {
  GridFunction out = zeros(u.grid);
  for (int a = 0; a < u.grid.d; ++a)
    for (int b = 0; b < u.grid.d; ++b) out.values += diff_xx(u, a, b).values.square();
  out.values = out.values.sqrt();
  return out;
}

GridFunction heat_operator(const GridFunction& u) {
  GridFunction out = laplacian(u);
  out.values += diff_t(u).values;
  return out;
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: d must be 1..3");
  }
}

} // namespace morrey
