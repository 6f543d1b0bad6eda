#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morrey/families.hpp"
#include "morrey/fft_conv.hpp"
#include "morrey/potentials.hpp"
#include "morrey/transforms.hpp"

#include <cmath>

using namespace morrey;

namespace {

Grid pg(int d, int nx, int nt, double X, double T0) {
  double hx = 2 * X / nx;
  Eigen::Vector3d ox = Eigen::Vector3d::Zero();
  for (int a = 0; a < d; ++a) ox[a] = -X + 0.5 * hx;
  return make_grid(d, nx, nt, hx, T0 + 0.5 * hx * hx, ox);
}

// graded composite Simpson of F over (0, b]: dyadic refinement toward 0
double graded_integral(const std::function<double(double)>& F, double b,
                       int levels = 60, int panels = 8) {
  double acc = 0;
  for (int l = 0; l < levels; ++l) {
    double hi = b * std::pow(0.5, l), lo = 0.5 * hi;
    int n = 2 * panels;
    double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += c * h / 3.0 * F(lo + i * h);
    }
  }
  return acc;
}

} // namespace

TEST_CASE("kernel values") {
  // p_alpha(s,r) = s^{-(d+2-alpha)/2} exp(-r^2/s), zero for s <= 0
  CHECK(kernel_p_alpha(1, 1, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(kernel_p_alpha(1, 1, 4.0, 2.0) ==
        doctest::Approx(std::pow(4.0, -1.0) * std::exp(-1.0)));
  CHECK(kernel_p_alpha(2, 3, 0.25, 0.5) ==
        doctest::Approx(std::pow(0.25, -1.5) * std::exp(-1.0)));
  CHECK(kernel_p_alpha(1, 2, 0.0, 1.0) == 0.0);
  CHECK(kernel_p_alpha(1, 2, -1.0, 1.0) == 0.0);
}

TEST_CASE("time slab mass matches quadrature") {
  // int_0^T int_{R^d} p_alpha dy ds = pi^{d/2} (2/alpha) T^{alpha/2}
  for (int d : {1, 2, 3}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      double T = 0.7;
      auto F = [&](double s) {
        return std::pow(s, -(d + 2 - alpha) / 2) * std::pow(M_PI * s, d / 2.0);
      };
      double num = graded_integral(F, T, 240, 16);
      CHECK(kernel_time_slab_mass(alpha, d, T) ==
            doctest::Approx(num).epsilon(1e-5));
    }
  }
}

TEST_CASE("time marginal reduces to the Riesz kernel") {
  // int_0^inf p_alpha(s,r) ds = Gamma((d-alpha)/2) r^{alpha-d}, alpha < d
  for (int d : {2, 3}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const double alpha = 1.0;
      // substitute u = r^2/s: integral becomes r^{alpha-d} Gamma((d-alpha)/2)
      auto F = [&](double s) { return kernel_p_alpha(alpha, d, s, r); };
      // s in (0, S] graded, then the expanded tail of s^{-k} e^{-r^2/s}
      double S = 2000.0 * r * r;
      double num = graded_integral(F, S, 80, 16);
      double k = 0.5 * (d + 2 - alpha);
      num += std::pow(S, 1 - k) / (k - 1) - r * r * std::pow(S, -k) / k;
      double want = std::tgamma((d - alpha) / 2) * std::pow(r, alpha - d);
      CHECK(num == doctest::Approx(want).epsilon(1e-3)); // 0.1%
    }
  }
}

TEST_CASE("weights match a direct cell quadrature") {
  Grid g = pg(1, 8, 10, 1.0, 0.0);
  PotentialWeights pw = make_potential_weights(g, 1.0);
  REQUIRE(pw.J == g.nx - 1);
  REQUIRE(pw.mmax == g.nt - 1);
  // w(m, j) = int_{m ht - ht/2}^{m ht + ht/2} s^{-(3-1)/2} int_cell e^{-y^2/s}
  for (int m : {1, 3}) {
    for (int j : {0, 2, -4}) {
      auto F = [&](double s) {
        double a = (j - 0.5) * g.hx, b = (j + 0.5) * g.hx;
        double sp = 0.5 * std::sqrt(M_PI * s) *
                    (std::erf(b / std::sqrt(s)) - std::erf(a / std::sqrt(s)));
        return sp / s;
      };
      // plain fine Simpson over the cell
      double lo = m * g.ht - 0.5 * g.ht, hi = m * g.ht + 0.5 * g.ht;
      int n = 4096;
      double h = (hi - lo) / n, acc = 0;
      for (int i = 0; i <= n; ++i) {
        double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += c * h / 3.0 * F(lo + i * h);
      }
      CHECK(pw.w[long(m) * (2 * pw.J + 1) + (j + pw.J)] ==
            doctest::Approx(acc).epsilon(5e-5));
    }
  }
  CHECK(pw.quad_error() < 1e-4);
}

TEST_CASE("potential equals the direct weighted sum") {
  Grid g = pg(1, 8, 12, 1.0, 0.0);
  GridFunction f = sample(
      [](double t, const Eigen::Vector3d& x) { return std::sin(t * 3 + x[0]) + 1.2; },
      g);
  PotentialWeights pw = make_potential_weights(g, 1.0);
  PotentialResult res = apply_P_alpha(f, 1.0);
  const int L = 2 * pw.J + 1;
  for (int it = 0; it < g.nt; it += 3)
    for (int i = 0; i < g.nx; ++i) {
      double acc = 0;
      for (int m = 0; m <= pw.mmax; ++m) {
        int jt = it + m;
        if (jt >= g.nt) break;
        for (int j = -pw.J; j <= pw.J; ++j) {
          int jx = i + j;
          if (jx < 0 || jx >= g.nx) continue;
          acc += pw.w[long(m) * L + (j + pw.J)] * f.values[g.index(jt, {jx, 0, 0})];
        }
      }
      CHECK(res.field.values[g.index(it, {i, 0, 0})] ==
            doctest::Approx(acc).epsilon(1e-11));
    }
}

TEST_CASE("potential is linear, positive, and shift equivariant") {
  Grid g = pg(1, 24, 32, 2.0, 0.0);
  GridFunction f = sample(
      [](double t, const Eigen::Vector3d& x) {
        return std::exp(-10 * x[0] * x[0] - 30 * (t - 0.2) * (t - 0.2));
      },
      g);
  GridFunction h = sample(
      [](double t, const Eigen::Vector3d& x) { return std::cos(x[0] + t); }, g);
  auto Pf = apply_P_alpha(f, 1.0).field;
  auto Ph = apply_P_alpha(h, 1.0).field;
  GridFunction comb = f;
  comb.values = 2.0 * f.values + 0.5 * h.values;
  auto Pc = apply_P_alpha(comb, 1.0).field;
  CHECK((Pc.values - 2.0 * Pf.values - 0.5 * Ph.values).abs().maxCoeff() < 1e-12);
  // positive data -> positive potential, up to FFT roundoff
  CHECK(Pf.values.minCoeff() >= -1e-14 * Pf.values.maxCoeff());

  // shift f one cell in space; interior output shifts identically
  GridFunction fs = zeros(g);
  for (int it = 0; it < g.nt; ++it)
    for (int i = 1; i < g.nx; ++i)
      fs.values[g.index(it, {i, 0, 0})] = f.values[g.index(it, {i - 1, 0, 0})];
  auto Pfs = apply_P_alpha(fs, 1.0).field;
  double worst = 0;
  for (int it = 0; it < g.nt; ++it)
    for (int i = 3; i < g.nx - 1; ++i)
      worst = std::max(worst,
                       std::abs(Pfs.values[g.index(it, {i, 0, 0})] -
                                Pf.values[g.index(it, {i - 1, 0, 0})]));
  // not exact: the shifted data loses the column leaving the grid, but f is
  // negligible there
  CHECK(worst < 1e-8);
}

TEST_CASE("parabolic scaling covariance is exact on the dilated grid") {
  Grid g = pg(1, 16, 24, 1.0, 0.0);
  GridFunction f = sample(
      [](double t, const Eigen::Vector3d& x) {
        return std::exp(-8 * x[0] * x[0] - 20 * t * t);
      },
      g);
  const double R = 2.0, alpha = 1.0;
  auto P1 = apply_P_alpha(f, alpha).field;
  GridFunction fR = parabolic_scale(f, R);
  auto PR = apply_P_alpha(fR, alpha).field;
  // P_alpha f_R = R^alpha (P_alpha f) scaled: same values up to R^alpha
  CHECK((PR.values - std::pow(R, alpha) * P1.values).abs().maxCoeff() <
        1e-12 * P1.values.abs().maxCoeff());
}

TEST_CASE("adjoint pairing is exact on the lattice") {
  Grid g = pg(1, 10, 14, 1.0, 0.0);
  GridFunction f = sample(
      [](double t, const Eigen::Vector3d& x) { return std::sin(5 * t + 2 * x[0]); },
      g);
  GridFunction h = sample(
      [](double t, const Eigen::Vector3d& x) { return std::cos(3 * t - x[0]); }, g);
  auto Pf = apply_P_alpha(f, 1.0).field;
  auto Ph = apply_P1_adjoint(h).field;
  double lhs = (Pf.values * h.values).sum();
  double rhs = (f.values * Ph.values).sum();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("gradient representation recovers the gradient from heat data") {
  // u compactly supported in time within the grid; g = dt u + Lap u; the
  // kernel representation must reproduce Du in the interior.
  Grid g = pg(1, 48, 576, 1.5, -1.5); // t in [-1.5, 2.1], hx = 1/16
  GridFunction u = sample(
      [](double t, const Eigen::Vector3d& x) {
        return std::exp(-4 * x[0] * x[0] - 16 * t * t);
      },
      g);
  GridFunction heat = heat_operator(u);
  auto grads = grad_from_heat_data(heat);
  REQUIRE(grads.size() == 1);
  GridFunction dux = diff_x(u, 0);
  double ref = dux.values.abs().maxCoeff();
  double worst = 0;
  for (int it = 40; it < g.nt - 200; ++it)
    for (int i = 8; i < g.nx - 8; ++i) {
      long idx = g.index(it, {i, 0, 0});
      worst = std::max(worst, std::abs(grads[0].values[idx] - dux.values[idx]));
    }
  CHECK(worst < 0.08 * ref);
}

TEST_CASE("stationary potential agrees with the Riesz potential") {
  const int d = 2;
  const double hx = 2.5 / 48;
  Grid g = make_grid(d, 48, 1, hx, 0,
                     Eigen::Vector3d{-1.25 + hx / 2, -1.25 + hx / 2, 0},
                     GridMode::Elliptic);
  GridFunction f = sample(
      [](double, const Eigen::Vector3d& x) {
        return std::exp(-4 * x.squaredNorm());
      },
      g);
  auto st = apply_P_alpha_stationary(f, 1.0, 4e5).field;
  auto rz = riesz_potential(f, 1.0);
  double worst = 0;
  for (int i = 12; i < 36; ++i)
    for (int j = 12; j < 36; ++j) {
      long idx = g.index(0, {i, j, 0});
      worst = std::max(worst, std::abs(st.values[idx] / rz.values[idx] - 1));
    }
  CHECK(worst < 0.02);
}

TEST_CASE("padded convolution oracle") {
  // PaddedConv computes circular correlation on the doubled lattice; check
  // against a direct sum in 2-D
  std::vector<int> dims = {8, 6};
  PaddedConv conv(dims);
  long n = 48;
  Eigen::ArrayXd a(n), b(n);
  for (long i = 0; i < n; ++i) {
    a[i] = std::sin(0.3 * double(i));
    b[i] = std::cos(0.11 * double(i) * double(i));
  }
  conv.set_field(a);
  Eigen::ArrayXd got = conv.convolve_with_field(b);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 6; ++j) {
      double acc = 0;
      for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 6; ++q) {
          int di = (i - p + 8) % 8, dj = (j - q + 6) % 6;
          acc += a[p * 6 + q] * b[di * 6 + dj];
        }
      CHECK(got[i * 6 + j] == doctest::Approx(acc).epsilon(1e-10));
    }
}

TEST_CASE("quadrature error estimate is reported and small") {
  Grid g = pg(1, 16, 32, 1.0, 0.0);
  GridFunction f = sample(
      [](double t, const Eigen::Vector3d& x) {
        return std::exp(-10 * x[0] * x[0] - 10 * t * t);
      },
      g);
  auto res = apply_P_alpha(f, 1.0);
  CHECK(res.quad_error >= 0);
  CHECK(res.quad_error < 1e-4);
}
