#include "morrey/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace morrey {

GridFunction parabolic_scale(const GridFunction& v, double R) {
  if (!(R > 0)) throw std::invalid_argument("parabolic_scale: R must be positive");
  GridFunction u = v;
  u.grid.hx = R * v.grid.hx;
  u.grid.ht = R * R * v.grid.ht;
  u.grid.origin_t = R * R * v.grid.origin_t;
  u.grid.origin_x = R * v.grid.origin_x;
  return u;
}

double time_fold_map(double t) { return t * (2.0 / std::max(std::abs(t), 1.0) - 1.0); }

GridFunction time_fold(const GridFunction& u) {
  const Grid& g = u.grid;
  if (g.mode != GridMode::Parabolic)
    throw std::invalid_argument("time_fold: parabolic grid required");
  if (g.center_t(0) > -1.5 + g.ht || g.center_t(g.nt - 1) < 1.5 - g.ht)
    throw std::invalid_argument("time_fold: time extent must cover [-3/2, 3/2]");
  GridFunction w = zeros(g);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it) {
    const double tf = time_fold_map(g.center_t(it));
    int src = int(std::lround((tf - g.origin_t) / g.ht));
    src = std::clamp(src, 0, g.nt - 1);
    w.values.segment(long(it) * nsp, nsp) = u.values.segment(long(src) * nsp, nsp);
  }
  return w;
}

double interp_spatial(const GridFunction& f, int it, const Eigen::Vector3d& y) {
  const Grid& g = f.grid;
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> fr{0, 0, 0};
  for (int a = 0; a < g.d; ++a) {
    double s = (y[a] - g.origin_x[a]) / g.hx;
    int i = int(std::floor(s));
    i = std::clamp(i, 0, g.nx - 2);
    i0[a] = i;
    fr[a] = std::clamp(s - i, 0.0, 1.0);
  }
  double acc = 0;
  const int corners = 1 << g.d;
  for (int c = 0; c < corners; ++c) {
    double wgt = 1;
    std::array<int, 3> ix = i0;
    for (int a = 0; a < g.d; ++a) {
      if (c & (1 << a)) {
        ix[a] += 1;
        wgt *= fr[a];
      } else {
        wgt *= 1 - fr[a];
      }
    }
    acc += wgt * f.values[g.index(it, ix)];
  }
  return acc;
}

namespace {

double radius(const Eigen::Vector3d& x, int d) {
  double r2 = 0;
  for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
  return std::sqrt(r2);
}

void require_spatial_cover(const Grid& g, double extent, const char* what) {
  for (int a = 0; a < g.d; ++a) {
    if (g.center_x(a, 0) - 0.5 * g.hx > -extent ||
        g.center_x(a, g.nx - 1) + 0.5 * g.hx < extent)
      throw std::invalid_argument(std::string(what) + ": grid does not cover the ball");
  }
}

} // namespace

GridFunction hestenes_extend(const GridFunction& u) {
  const Grid& g = u.grid;
  require_spatial_cover(g, 1.2, "hestenes_extend");
  GridFunction v = zeros(g);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it) {
    for (long s = 0; s < nsp; ++s) {
      long rem = s;
      std::array<int, 3> ix{0, 0, 0};
      for (int a = g.d - 1; a >= 0; --a) {
        ix[a] = int(rem % g.nx);
        rem /= g.nx;
      }
      Eigen::Vector3d x = g.center(ix);
      const double r = radius(x, g.d);
      double val;
      if (r <= 1.0) {
        val = u.values[long(it) * nsp + s];
      } else if (r <= 1.2) {
        val = 6 * interp_spatial(u, it, x * (2.0 / r - 1.0)) -
              8 * interp_spatial(u, it, x * (3.0 / r - 2.0)) +
              3 * interp_spatial(u, it, x * (4.0 / r - 3.0));
      } else {
        val = 0;
      }
      v.values[long(it) * nsp + s] = val;
    }
  }
  return v;
}

GridFunction annulus_pullback(const GridFunction& v, double R1,
                              const RadialMap& phi_inv) {
  const Grid& g = v.grid;
  if (!(R1 > 0 && R1 < 1))
    throw std::invalid_argument("annulus_pullback: R1 must lie in (0,1)");
  RadialMap map = phi_inv ? phi_inv : [](double r) { return 2.0 - r; };
  // one-to-one on [R1, 1]: strict monotonicity on a sample
  {
    const int n = 64;
    double prev = map(R1);
    int sign = 0;
    for (int i = 1; i <= n; ++i) {
      double r = R1 + (1.0 - R1) * i / n;
      double cur = map(r);
      int s = cur > prev ? 1 : (cur < prev ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign))
        throw std::invalid_argument("annulus_pullback: map not one-to-one");
      sign = s;
      prev = cur;
    }
  }
  GridFunction u = zeros(g);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it) {
    for (long s = 0; s < nsp; ++s) {
      long rem = s;
      std::array<int, 3> ix{0, 0, 0};
      for (int a = g.d - 1; a >= 0; --a) {
        ix[a] = int(rem % g.nx);
        rem /= g.nx;
      }
      Eigen::Vector3d x = g.center(ix);
      const double r = radius(x, g.d);
      if (r < R1 || r > 1.0 || r == 0) continue;
      u.values[long(it) * nsp + s] = interp_spatial(v, it, x * (map(r) / r));
    }
  }
  return u;
}

double smoothstep3(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3 - 2 * s);
}

double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10 + s * (-15 + 6 * s));
}

double cutoff_time_value(double t, double inner, double outer) {
  if (!(inner < outer)) throw std::invalid_argument("cutoff: inner < outer required");
  return smoothstep3((outer - std::abs(t)) / (outer - inner));
}

double cutoff_space_value(double r, double inner, double outer) {
  if (!(inner < outer)) throw std::invalid_argument("cutoff: inner < outer required");
  return smoothstep5((outer - std::abs(r)) / (outer - inner));
}

GridFunction cutoff_time(const Grid& g, double inner, double outer) {
  return sample(
      [&](double t, const Eigen::Vector3d&) { return cutoff_time_value(t, inner, outer); },
      g);
}

GridFunction cutoff_space(const Grid& g, double inner, double outer) {
  return sample(
      [&](double, const Eigen::Vector3d& x) {
        return cutoff_space_value(radius(x, g.d), inner, outer);
      },
      g);
}

} // namespace morrey
