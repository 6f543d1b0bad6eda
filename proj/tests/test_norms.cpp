#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morrey/norms.hpp"
#include "morrey/scan.hpp"
#include "morrey/transforms.hpp"

#include <cmath>

using namespace morrey;

namespace {

Grid tiny(int d, int nx = 8, int nt = 12, double hx = 0.25) {
  Eigen::Vector3d ox;
  ox << -0.875, -0.875, -0.875;
  return make_grid(d, nx, nt, hx, -0.4, ox);
}

GridFunction wavy(const Grid& g) {
  return sample(
      [](double t, const Eigen::Vector3d& x) {
        return 0.3 + std::sin(2 * t + x[0]) * std::cos(x[1] - x[2]);
      },
      g);
}

// Independent slashed-Lp over an explicit cylinder.
double brute_slashed(const GridFunction& f, double p, const Grid& g,
                     const ParabolicCylinder& cyl) {
  double acc = 0;
  long cnt = 0;
  std::array<int, 3> ix{0, 0, 0};
  long idx = 0;
  for (int it = 0; it < g.nt; ++it) {
    double t = g.center_t(it);
    bool tin = t >= cyl.t - 1e-12 && t < cyl.t + cyl.rho * cyl.rho - 1e-12;
    for (long s = 0; s < g.spatial_cells(); ++s, ++idx) {
      long rem = s;
      for (int a = g.d - 1; a >= 0; --a) {
        ix[a] = int(rem % g.nx);
        rem /= g.nx;
      }
      double r2 = 0;
      for (int a = 0; a < g.d; ++a) {
        double dy = g.center_x(a, ix[a]) - cyl.x[a];
        r2 += dy * dy;
      }
      if (tin && r2 < cyl.rho * cyl.rho * (1 - 1e-12)) {
        acc += std::pow(std::abs(f.values[idx]), p);
        ++cnt;
      }
    }
  }
  if (cnt == 0) return 0;
  return std::pow(acc / double(cnt), 1.0 / p);
}

// Brute-force Morrey sup over the same discrete (rho, anchor) set the
// implementation scans, using direct sums and the analytic measure.
double brute_morrey(const GridFunction& f, double p, double beta,
                    const std::vector<int>& radii) {
  const Grid& g = f.grid;
  double best = 0;
  std::array<int, 3> ix{0, 0, 0};
  for (int k : radii) {
    const double rho = k * g.hx;
    const double meas = cylinder_measure(g, rho);
    const int w = g.mode == GridMode::Parabolic ? k * k : 1;
    for (int it = 0; it < g.nt; ++it)
      for (long s = 0; s < g.spatial_cells(); ++s) {
        long rem = s;
        for (int a = g.d - 1; a >= 0; --a) {
          ix[a] = int(rem % g.nx);
          rem /= g.nx;
        }
        // direct sum over the clipped cylinder
        double acc = 0;
        std::array<int, 3> jy{0, 0, 0};
        for (int jt = it; jt < std::min(g.nt, it + w); ++jt)
          for (long sy = 0; sy < g.spatial_cells(); ++sy) {
            long r2m = sy;
            for (int a = g.d - 1; a >= 0; --a) {
              jy[a] = int(r2m % g.nx);
              r2m /= g.nx;
            }
            long dist2 = 0;
            for (int a = 0; a < g.d; ++a) {
              long dd = jy[a] - ix[a];
              dist2 += dd * dd;
            }
            if (dist2 < long(k) * k)
              acc += std::pow(std::abs(f.values[g.index(jt, jy)]), p);
          }
        double val =
            std::pow(rho, beta) * std::pow(acc * g.cell_volume() / meas, 1.0 / p);
        best = std::max(best, val);
      }
  }
  return best;
}

} // namespace

TEST_CASE("region lp and slashed norms against brute force") {
  for (int d = 1; d <= 2; ++d) {
    Grid g = tiny(d);
    GridFunction f = wavy(g);
    for (double rho : {0.4, 0.7}) {
      ParabolicCylinder cyl;
      cyl.rho = rho;
      cyl.t = -0.2;
      cyl.x[0] = 0.1;
      Region reg = region_cells(g, cyl);
      REQUIRE(!reg.empty());
      CHECK(slashed_lp_norm(f, 2.5, reg) ==
            doctest::Approx(brute_slashed(f, 2.5, g, cyl)).epsilon(1e-12));
      // plain norm: slashed times the discrete measure root
      double meas = double(reg.cell_count()) * g.cell_volume();
      CHECK(lp_norm(f, 2.5, reg) ==
            doctest::Approx(brute_slashed(f, 2.5, g, cyl) * std::pow(meas, 1 / 2.5))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("slashed norm of a constant is the constant") {
  Grid g = tiny(2);
  GridFunction f = sample([](double, const Eigen::Vector3d&) { return 3.25; }, g);
  ParabolicCylinder cyl;
  cyl.rho = 0.6;
  cyl.t = -0.3;
  Region reg = region_cells(g, cyl);
  CHECK(slashed_lp_norm(f, 3, reg) == doctest::Approx(3.25).epsilon(1e-13));
  CHECK(slashed_mixed_norm(f, 2, 4, reg) == doctest::Approx(3.25).epsilon(1e-13));
}

TEST_CASE("mixed norm collapses to lp when q1 == q2") {
  Grid g = tiny(2);
  GridFunction f = wavy(g);
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(mixed_norm(f, p, p, NormDomain::all()) ==
          doctest::Approx(lp_norm(f, p, NormDomain::all())).epsilon(1e-12));
  }
  ParabolicCylinder cyl;
  cyl.rho = 0.7;
  cyl.t = -0.4;
  Region reg = region_cells(g, cyl);
  CHECK(mixed_norm(f, 2, 2, reg) == doctest::Approx(lp_norm(f, 2, reg)).epsilon(1e-12));
}

TEST_CASE("mixed norm against a direct two-stage computation") {
  Grid g = tiny(1, 6, 10);
  GridFunction f = wavy(g);
  double q1 = 3, q2 = 1.5;
  double outer = 0;
  for (int it = 0; it < g.nt; ++it) {
    double inner = 0;
    for (int j = 0; j < g.nx; ++j)
      inner += std::pow(std::abs(f.values[g.index(it, {j, 0, 0})]), q1);
    outer += std::pow(std::pow(inner * g.hx, 1 / q1), q2);
  }
  double direct = std::pow(outer * g.ht, 1 / q2);
  CHECK(mixed_norm(f, q1, q2, NormDomain::all()) ==
        doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("infinity exponents") {
  Grid g = tiny(1);
  GridFunction f = wavy(g);
  CHECK(lp_norm(f, kInf, NormDomain::all()) ==
        doctest::Approx(f.values.abs().maxCoeff()));
  // L_{inf,inf} is the sup norm
  CHECK(mixed_norm(f, kInf, kInf, NormDomain::all()) ==
        doctest::Approx(f.values.abs().maxCoeff()));
}

TEST_CASE("morrey norm equals the brute-force scan") {
  for (int d = 1; d <= 2; ++d) {
    Grid g = tiny(d, 6, 9);
    GridFunction f = wavy(g);
    MorreyOptions opts;
    opts.radii = {1, 2, 3, 4};
    for (double p : {1.5, 3.0}) {
      double got = morrey_norm(f, p, 1.0, NormDomain::all(), opts).value;
      double want = brute_morrey(f, p, 1.0, opts.radii);
      CHECK(got == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("elliptic morrey norm equals the brute-force scan") {
  Grid g = make_grid(2, 8, 1, 0.25, 0, Eigen::Vector3d{-0.875, -0.875, 0},
                     GridMode::Elliptic);
  GridFunction f = sample(
      [](double, const Eigen::Vector3d& x) { return 1.0 / (0.3 + x.squaredNorm()); },
      g);
  MorreyOptions opts;
  opts.radii = {1, 2, 3, 5};
  double got = morrey_norm(f, 2.0, 0.5, NormDomain::all(), opts).value;
  double want = brute_morrey(f, 2.0, 0.5, opts.radii);
  CHECK(got == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("morrey argmax metadata is consistent") {
  Grid g = tiny(1, 8, 16);
  // a spike makes the argmax unambiguous
  GridFunction f = zeros(g);
  f.values[g.index(7, {3, 0, 0})] = 5.0;
  MorreyResult res = morrey_norm(f, 2, 1, NormDomain::all());
  CHECK(res.value > 0);
  CHECK(res.rho_star >= g.hx);
  CHECK(res.centers_scanned == g.cells());
  CHECK(res.radii_scanned > 0);
  CHECK(!res.degenerate);
}

TEST_CASE("degenerate flag above the space index") {
  Grid g = tiny(1);
  GridFunction f = wavy(g);
  // parabolic index (d+2)/p = 1.5 at p = 2
  CHECK(!morrey_norm(f, 2, 1.4, NormDomain::all()).degenerate);
  CHECK(morrey_norm(f, 2, 1.6, NormDomain::all()).degenerate);
  CHECK(!mixed_morrey_norm(f, 2, 2, 1.5, NormDomain::all()).degenerate);
  CHECK(mixed_morrey_norm(f, 2, 2, 1.7, NormDomain::all()).degenerate);
}

TEST_CASE("scaling displays are exact under the grid dilation") {
  Grid g = tiny(2, 8, 12);
  GridFunction u = wavy(g);
  const double R = 2.0, p = 2.5, beta = 0.8, q1 = 3, q2 = 1.5;
  GridFunction uR = parabolic_scale(u, R);
  const double dplus2 = g.d + 2;
  // ||u_R||_{L_p} = R^{(d+2)/p} ||u||
  CHECK(lp_norm(uR, p, NormDomain::all()) ==
        doctest::Approx(std::pow(R, dplus2 / p) * lp_norm(u, p, NormDomain::all()))
            .epsilon(1e-13));
  // Morrey norm scales by R^beta
  CHECK(morrey_norm(uR, p, beta, NormDomain::all()).value ==
        doctest::Approx(std::pow(R, beta) *
                        morrey_norm(u, p, beta, NormDomain::all()).value)
            .epsilon(1e-13));
  // mixed norm scales by R^{d/q1 + 2/q2}
  CHECK(mixed_norm(uR, q1, q2, NormDomain::all()) ==
        doctest::Approx(std::pow(R, g.d / q1 + 2 / q2) *
                        mixed_norm(u, q1, q2, NormDomain::all()))
            .epsilon(1e-13));
  // mixed Morrey norm scales by R^beta
  CHECK(mixed_morrey_norm(uR, q1, q2, beta, NormDomain::all()).value ==
        doctest::Approx(std::pow(R, beta) *
                        mixed_morrey_norm(u, q1, q2, beta, NormDomain::all()).value)
            .epsilon(1e-13));
}

TEST_CASE("norm domains restrict the data") {
  Grid g = tiny(1, 8, 16);
  GridFunction f = sample([](double, const Eigen::Vector3d&) { return 1.0; }, g);
  NormDomain strip = NormDomain::strip(-0.2, 0.2);
  double inside = lp_norm(f, 1, strip);
  CHECK(inside < lp_norm(f, 1, NormDomain::all()));
  CHECK(inside > 0);
  // mask agrees with contains on every cell
  Eigen::ArrayXd m = strip.mask(g);
  long idx = 0;
  for (int it = 0; it < g.nt; ++it)
    for (int j = 0; j < g.nx; ++j, ++idx) {
      bool c = strip.contains(g.center_t(it), Eigen::Vector3d{g.center_x(0, j), 0, 0},
                              1);
      CHECK((m[idx] > 0.5) == c);
    }
}

TEST_CASE("ball and window scan primitives against brute force") {
  Grid g = tiny(2, 7, 6);
  GridFunction f = wavy(g);
  detail::BallSummer bs(g, f.values);
  for (int k : {1, 2, 3}) {
    Eigen::ArrayXd sums = bs.ball_sums(k);
    Eigen::ArrayXd counts = bs.ball_counts(k);
    Eigen::ArrayXd mx = detail::ball_max(g, f.values, k);
    for (int it = 0; it < g.nt; it += 2)
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nx; ++j) {
          double acc = 0, m = -kInf;
          long cnt = 0;
          for (int a = 0; a < g.nx; ++a)
            for (int b = 0; b < g.nx; ++b) {
              long d2 = long(a - i) * (a - i) + long(b - j) * (b - j);
              if (d2 < long(k) * k) {
                acc += f.values[g.index(it, {a, b, 0})];
                m = std::max(m, f.values[g.index(it, {a, b, 0})]);
                ++cnt;
              }
            }
          long idx = g.index(it, {i, j, 0});
          CHECK(sums[idx] == doctest::Approx(acc).epsilon(1e-12));
          CHECK(counts[long(i) * g.nx + j] == doctest::Approx(double(cnt)));
          CHECK(mx[idx] == doctest::Approx(m).epsilon(1e-12));
        }
  }
  // time windows
  Eigen::ArrayXd ws = detail::time_window_sums(g, f.values, 3);
  Eigen::ArrayXd wm = detail::time_window_max(g, f.values, 3);
  Eigen::ArrayXd tm = detail::trailing_time_window_max(g, f.values, 3);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it)
    for (long s = 0; s < nsp; s += 5) {
      double acc = 0, m = -kInf, tmx = -kInf;
      for (int jt = it; jt < std::min(g.nt, it + 3); ++jt) {
        acc += f.values[jt * nsp + s];
        m = std::max(m, f.values[jt * nsp + s]);
      }
      for (int jt = std::max(0, it - 2); jt <= it; ++jt)
        tmx = std::max(tmx, f.values[jt * nsp + s]);
      CHECK(ws[it * nsp + s] == doctest::Approx(acc).epsilon(1e-12));
      CHECK(wm[it * nsp + s] == doctest::Approx(m).epsilon(1e-12));
      CHECK(tm[it * nsp + s] == doctest::Approx(tmx).epsilon(1e-12));
    }
}

TEST_CASE("default radii are positive, increasing, and capped") {
  Grid g = make_grid(1, 512, 4, 0.01);
  auto ks = detail::default_radii(g, 1.0);
  REQUIRE(!ks.empty());
  for (size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] > ks[i - 1]);
  CHECK(ks.back() <= 101); // cap rho = 1 -> k <= 100 (plus rounding)
  auto kd = detail::default_radii(g, kInf);
  CHECK(kd.back() >= int(g.diameter() / g.hx) - 1);
}

TEST_CASE("cylinder measure") {
  Grid g = tiny(2);
  CHECK(cylinder_measure(g, 0.5) ==
        doctest::Approx(M_PI * 0.25 * 0.25)); // pi rho^2 * rho^2
  Grid e = make_grid(3, 4, 1, 0.25, 0, Eigen::Vector3d::Zero(), GridMode::Elliptic);
  CHECK(cylinder_measure(e, 2.0) == doctest::Approx(4.0 * M_PI / 3.0 * 8.0));
}

TEST_CASE("exponent validation") {
  Grid g = tiny(1);
  GridFunction f = wavy(g);
  CHECK_THROWS(lp_norm(f, 0.5, NormDomain::all()));
  CHECK_THROWS(morrey_norm(f, 0.0, 1.0, NormDomain::all()));
}
