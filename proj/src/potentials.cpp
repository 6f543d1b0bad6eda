#include "morrey/potentials.hpp"

#include "morrey/fft_conv.hpp"

#include <cmath>
#include <stdexcept>

namespace morrey {

namespace {

constexpr double kPi = 3.14159265358979323846;

// int_a^b exp(-y^2/s) dy
double erf_cell(double a, double b, double s) {
  const double rs = std::sqrt(s);
  return 0.5 * std::sqrt(kPi * s) * (std::erf(b / rs) - std::erf(a / rs));
}
// int_a^b exp(-y^2/(4s)) dy
double erf_cell4(double a, double b, double s) {
  const double rs = 2.0 * std::sqrt(s);
  return 0.5 * std::sqrt(kPi) * rs * (std::erf(b / rs) - std::erf(a / rs));
}
// int_a^b y exp(-y^2/(4s)) dy
double odd_cell4(double a, double b, double s) {
  return 2.0 * s * (std::exp(-a * a / (4 * s)) - std::exp(-b * b / (4 * s)));
}

struct KernelDef {
  double pref_exp = 0; // s^{pref_exp}
  int grad_axis = -1;  // -1: p_alpha profile exp(-r^2/s); else heat-gradient
};

void fill_axis(const KernelDef& kd, int axis, double s, double h, int J,
               std::vector<double>& out) {
  for (int j = -J; j <= J; ++j) {
    const double a = (j - 0.5) * h, b = (j + 0.5) * h;
    double v;
    if (kd.grad_axis < 0) v = erf_cell(a, b, s);
    else if (axis == kd.grad_axis) v = odd_cell4(a, b, s);
    else v = erf_cell4(a, b, s);
    out[size_t(j + J)] = v;
  }
}

// Box integrand for the mass reference: product of per-axis integrals over
// the full offset window; the heat-gradient axis is restricted to the
// positive half (matching the j >= 1 column sum, which is quadrature-exact
// in space).
double box_integrand(const KernelDef& kd, int d, double s, double h, int J) {
  const double X = (J + 0.5) * h;
  double v = std::pow(s, kd.pref_exp);
  for (int a = 0; a < d; ++a) {
    if (kd.grad_axis < 0) v *= erf_cell(-X, X, s);
    else if (a == kd.grad_axis) v *= odd_cell4(0.5 * h, X, s);
    else v *= erf_cell4(-X, X, s);
  }
  return v;
}

template <class F>
void simpson(F&& node, double a, double b, int panels) {
  const int n = 2 * panels;
  const double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) {
    double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    node(a + i * h, c * h / 3.0);
  }
}

PotentialWeights build_weights(const Grid& g, const KernelDef& kd) {
  if (g.mode != GridMode::Parabolic)
    throw std::invalid_argument("potential weights: parabolic grid required");
  PotentialWeights pw;
  pw.grid = g;
  pw.J = g.nx - 1;
  pw.mmax = g.nt - 1;
  const int d = g.d, J = pw.J, L = 2 * J + 1;
  const long S = pw.spatial_size();
  pw.w = Eigen::ArrayXd::Zero(long(pw.mmax + 1) * S);
  std::vector<std::vector<double>> ax{size_t(d), std::vector<double>(size_t(L))};

  auto accumulate = [&](int m, double s, double wq) {
    const double p = wq * std::pow(s, kd.pref_exp);
    for (int a = 0; a < d; ++a) fill_axis(kd, a, s, g.hx, J, ax[size_t(a)]);
    double* row = pw.w.data() + long(m) * S;
    if (d == 1) {
      for (int j = 0; j < L; ++j) row[j] += p * ax[0][size_t(j)];
    } else if (d == 2) {
      for (int j1 = 0; j1 < L; ++j1) {
        const double p1 = p * ax[0][size_t(j1)];
        double* r = row + long(j1) * L;
        for (int j2 = 0; j2 < L; ++j2) r[j2] += p1 * ax[1][size_t(j2)];
      }
    } else {
      for (int j1 = 0; j1 < L; ++j1)
        for (int j2 = 0; j2 < L; ++j2) {
          const double p2 = p * ax[0][size_t(j1)] * ax[1][size_t(j2)];
          double* r = row + (long(j1) * L + j2) * L;
          for (int j3 = 0; j3 < L; ++j3) r[j3] += p2 * ax[2][size_t(j3)];
        }
    }
  };

  const double half = 0.5 * g.ht;
  for (int l = 0; l < 70; ++l) {
    const double b = half * std::pow(0.5, l);
    simpson([&](double s, double wq) { accumulate(0, s, wq); }, 0.5 * b, b, 2);
  }
  for (int m = 1; m <= pw.mmax; ++m) {
    const int panels = m <= 8 ? 6 : (m <= 64 ? 3 : 2);
    simpson([&](double s, double wq) { accumulate(m, s, wq); }, m * g.ht - half,
            m * g.ht + half, panels);
  }

  // discrete mass over the reference window
  if (kd.grad_axis < 0) {
    pw.mass = pw.w.sum();
  } else {
    double mass = 0;
    for (long i = 0; i < pw.w.size(); ++i) {
      long sp = i % S;
      int jg = 0;
      // multi-index digit of the grad axis (base L, most significant first)
      long div = 1;
      for (int a = d - 1; a > kd.grad_axis; --a) div *= L;
      jg = int((sp / div) % L) - J;
      if (jg >= 1) mass += pw.w[i];
    }
    pw.mass = mass;
  }

  // high-resolution reference
  double ref = 0;
  auto scalar = [&](double s, double wq) {
    ref += wq * box_integrand(kd, d, s, g.hx, J);
  };
  for (int l = 0; l < 90; ++l) {
    const double b = half * std::pow(0.5, l);
    simpson(scalar, 0.5 * b, b, 4);
  }
  for (int m = 1; m <= pw.mmax; ++m)
    simpson(scalar, m * g.ht - half, m * g.ht + half, 8);
  pw.semi_mass = ref;
  return pw;
}

// Lay weights onto the padded circular lattice. Forward operators read the
// data at (t+m, x+j), so the kernel sits at negated indices mod the padded
// period; the adjoint direction uses the indices as-is.
Eigen::ArrayXd padded_spacetime_kernel(const Grid& g, const PotentialWeights& pw,
                                       bool adjoint) {
  const int Pt = 2 * g.nt, Px = 2 * g.nx, d = g.d, J = pw.J, L = 2 * J + 1;
  long total = Pt;
  for (int a = 0; a < d; ++a) total *= Px;
  Eigen::ArrayXd K = Eigen::ArrayXd::Zero(total);
  auto wrapx = [&](int o) { return ((o % Px) + Px) % Px; };
  const long S = pw.spatial_size();
  for (int m = 0; m <= pw.mmax; ++m) {
    const long tpos = adjoint ? m : (Pt - m) % Pt;
    for (long sp = 0; sp < S; ++sp) {
      long rem = sp, pos = tpos;
      for (int a = 0; a < d; ++a) {
        long div = 1;
        for (int b = d - 1; b > a; --b) div *= L;
        int j = int((rem / div) % L) - J;
        pos = pos * Px + wrapx(adjoint ? j : -j);
      }
      K[pos] = pw.w[long(m) * S + sp];
    }
  }
  return K;
}

long embed_index(const Grid& g, int it, long sp, int P) {
  // sp is the lex spatial index on the nx lattice; map onto the padded P lattice
  long pos = it;
  long rem = sp;
  long div = g.spatial_cells() / g.nx;
  for (int a = 0; a < g.d; ++a) {
    pos = pos * P + int(rem / div);
    rem %= div;
    div /= g.nx;
  }
  return pos;
}

Eigen::ArrayXd embed_field(const GridFunction& f, int Pt, int Px) {
  const Grid& g = f.grid;
  long total = Pt;
  for (int a = 0; a < g.d; ++a) total *= Px;
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(total);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it)
    for (long sp = 0; sp < nsp; ++sp)
      out[embed_index(g, it, sp, Px)] = f.values[long(it) * nsp + sp];
  return out;
}

GridFunction extract_field(const Grid& g, const Eigen::ArrayXd& padded, int Px,
                           double scale) {
  GridFunction out = zeros(g);
  const long nsp = g.spatial_cells();
  for (int it = 0; it < g.nt; ++it)
    for (long sp = 0; sp < nsp; ++sp)
      out.values[long(it) * nsp + sp] = scale * padded[embed_index(g, it, sp, Px)];
  return out;
}

PotentialResult apply_spacetime(const GridFunction& f, const PotentialWeights& pw,
                                bool adjoint, double scale) {
  const Grid& g = f.grid;
  const int Pt = 2 * g.nt, Px = 2 * g.nx;
  std::vector<int> dims{Pt};
  for (int a = 0; a < g.d; ++a) dims.push_back(Px);
  PaddedConv conv(dims);
  Eigen::ArrayXd K = padded_spacetime_kernel(g, pw, adjoint);
  Eigen::ArrayXd out = conv.convolve(K, embed_field(f, Pt, Px));
  return {extract_field(g, out, Px, scale), pw.quad_error()};
}

// Spatial-only convolution out(x) = sum_j V(j) f(x+j) on an elliptic grid.
GridFunction apply_spatial(const GridFunction& f, const Eigen::ArrayXd& V, int J,
                           double scale) {
  const Grid& g = f.grid;
  const int Px = 2 * g.nx, d = g.d, L = 2 * J + 1;
  std::vector<int> dims(size_t(d), Px);
  PaddedConv conv(dims);
  long total = 1;
  for (int a = 0; a < d; ++a) total *= Px;
  Eigen::ArrayXd K = Eigen::ArrayXd::Zero(total);
  auto wrapx = [&](int o) { return ((o % Px) + Px) % Px; };
  for (long sp = 0; sp < V.size(); ++sp) {
    long rem = sp, pos = 0;
    for (int a = 0; a < d; ++a) {
      long div = 1;
      for (int b = d - 1; b > a; --b) div *= L;
      int j = int((rem / div) % L) - J;
      pos = pos * Px + wrapx(-j);
    }
    K[pos] = V[sp];
  }
  Eigen::ArrayXd fp = Eigen::ArrayXd::Zero(total);
  const long nsp = g.spatial_cells();
  for (long sp = 0; sp < nsp; ++sp) fp[embed_index(g, 0, sp, Px)] = f.values[sp];
  Eigen::ArrayXd out = conv.convolve(K, fp);
  GridFunction r = zeros(g);
  for (long sp = 0; sp < nsp; ++sp) r.values[sp] = scale * out[embed_index(g, 0, sp, Px)];
  return r;
}

} // namespace

double kernel_p_alpha(double alpha, int d, double s, double r) {
  if (s <= 0) return 0;
  return std::pow(s, -0.5 * (d + 2 - alpha)) * std::exp(-r * r / s);
}

double kernel_time_slab_mass(double alpha, int d, double T) {
  return std::pow(kPi, 0.5 * d) * (2.0 / alpha) * std::pow(T, 0.5 * alpha);
}

PotentialWeights make_potential_weights(const Grid& grid, double alpha) {
  if (!(alpha > 0 && alpha < grid.d + 2))
    throw std::invalid_argument("make_potential_weights: alpha out of (0, d+2)");
  KernelDef kd;
  kd.pref_exp = -0.5 * (grid.d + 2 - alpha);
  return build_weights(grid, kd);
}

PotentialWeights make_grad_weights(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.d)
    throw std::invalid_argument("make_grad_weights: bad axis");
  KernelDef kd;
  kd.pref_exp = -0.5 * (grid.d + 2);
  kd.grad_axis = axis;
  return build_weights(grid, kd);
}

PotentialResult apply_P_alpha(const GridFunction& f, double alpha) {
  PotentialWeights pw = make_potential_weights(f.grid, alpha);
  return apply_spacetime(f, pw, false, 1.0);
}

PotentialResult apply_P1_adjoint(const GridFunction& f) {
  PotentialWeights pw = make_potential_weights(f.grid, 1.0);
  return apply_spacetime(f, pw, true, 1.0);
}

PotentialResult apply_P_alpha_stationary(const GridFunction& f, double alpha,
                                         double s_max) {
  const Grid& g = f.grid;
  if (g.mode != GridMode::Elliptic)
    throw std::invalid_argument("apply_P_alpha_stationary: elliptic grid required");
  if (!(alpha > 0 && alpha < g.d))
    throw std::invalid_argument("apply_P_alpha_stationary: needs 0 < alpha < d");
  const int d = g.d, J = g.nx - 1, L = 2 * J + 1;
  long S = 1;
  for (int a = 0; a < d; ++a) S *= L;
  Eigen::ArrayXd V = Eigen::ArrayXd::Zero(S);
  std::vector<std::vector<double>> ax{size_t(d), std::vector<double>(size_t(L))};
  const double pe = -0.5 * (d + 2 - alpha);

  auto accumulate = [&](double s, double wq) {
    const double p = wq * std::pow(s, pe);
    for (int j = -J; j <= J; ++j)
      ax[0][size_t(j + J)] = erf_cell((j - 0.5) * g.hx, (j + 0.5) * g.hx, s);
    for (int a = 1; a < d; ++a) ax[size_t(a)] = ax[0];
    if (d == 1) {
      for (int j = 0; j < L; ++j) V[j] += p * ax[0][size_t(j)];
    } else if (d == 2) {
      for (int j1 = 0; j1 < L; ++j1) {
        const double p1 = p * ax[0][size_t(j1)];
        for (int j2 = 0; j2 < L; ++j2) V[long(j1) * L + j2] += p1 * ax[1][size_t(j2)];
      }
    } else {
      for (int j1 = 0; j1 < L; ++j1)
        for (int j2 = 0; j2 < L; ++j2) {
          const double p2 = p * ax[0][size_t(j1)] * ax[1][size_t(j2)];
          for (int j3 = 0; j3 < L; ++j3)
            V[(long(j1) * L + j2) * L + j3] += p2 * ax[2][size_t(j3)];
        }
    }
  };

  const double s0 = std::min(g.hx * g.hx, s_max);
  for (int l = 0; l < 70; ++l) {
    const double b = s0 * std::pow(0.5, l);
    simpson(accumulate, 0.5 * b, b, 2);
  }
  for (double a = s0; a < s_max;) {
    const double b = std::min(a * 1.35, s_max);
    simpson(accumulate, a, b, 3);
    a = b;
  }

  // mass reference with a finer rule
  KernelDef kd;
  kd.pref_exp = pe;
  double ref = 0;
  auto scalar = [&](double s, double wq) { ref += wq * box_integrand(kd, d, s, g.hx, J); };
  for (int l = 0; l < 90; ++l) {
    const double b = s0 * std::pow(0.5, l);
    simpson(scalar, 0.5 * b, b, 4);
  }
  for (double a = s0; a < s_max;) {
    const double b = std::min(a * 1.15, s_max);
    simpson(scalar, a, b, 4);
    a = b;
  }
  PotentialResult res;
  res.field = apply_spatial(f, V, J, 1.0);
  double mass = V.sum();
  res.quad_error = ref == 0 ? 0 : std::abs(mass - ref) / std::abs(ref);
  return res;
}

namespace {

// C(d, kappa) = int_{[-1/2,1/2]^d} |y|^kappa dy via the self-similar
// annulus decomposition (kappa + d > 0).
double unit_cube_power_integral(int d, double kappa) {
  if (d == 1) return 2.0 * std::pow(0.5, kappa + 1) / (kappa + 1);
  const int n = d == 2 ? 200 : 96;
  const double h = 1.0 / n;
  double annulus = 0;
  const int n2 = d == 2 ? 1 : n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n2; ++k) {
        double y1 = -0.5 + (i + 0.5) * h;
        double y2 = -0.5 + (j + 0.5) * h;
        double y3 = d == 3 ? -0.5 + (k + 0.5) * h : 0.0;
        double linf = std::max({std::abs(y1), std::abs(y2), std::abs(y3)});
        if (linf <= 0.25) continue;
        double r2 = y1 * y1 + y2 * y2 + y3 * y3;
        annulus += std::pow(r2, 0.5 * kappa);
      }
  annulus *= std::pow(h, d);
  return annulus / (1.0 - std::pow(2.0, -(d + kappa)));
}

double near_cell_power_integral(int d, double kappa, double h,
                                const std::array<int, 3>& j) {
  const int n = 12;
  double acc = 0;
  const double sub = h / n;
  const int n2 = d >= 2 ? n : 1, n3 = d >= 3 ? n : 1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n2; ++b)
      for (int c = 0; c < n3; ++c) {
        double y1 = (j[0] - 0.5) * h + (a + 0.5) * sub;
        double y2 = d >= 2 ? (j[1] - 0.5) * h + (b + 0.5) * sub : 0;
        double y3 = d >= 3 ? (j[2] - 0.5) * h + (c + 0.5) * sub : 0;
        double r2 = y1 * y1 + y2 * y2 + y3 * y3;
        acc += std::pow(r2, 0.5 * kappa);
      }
  return acc * std::pow(sub, d);
}

} // namespace

GridFunction riesz_potential(const GridFunction& f, double alpha) {
  const Grid& g = f.grid;
  if (g.mode != GridMode::Elliptic)
    throw std::invalid_argument("riesz_potential: elliptic grid required");
  if (!(alpha > 0 && alpha < g.d))
    throw std::invalid_argument("riesz_potential: needs 0 < alpha < d");
  const int d = g.d, J = g.nx - 1, L = 2 * J + 1;
  const double kappa = alpha - d;
  const double N = std::tgamma(0.5 * (g.d - alpha));
  long S = 1;
  for (int a = 0; a < d; ++a) S *= L;
  Eigen::ArrayXd V(S);
  const double C0 = unit_cube_power_integral(d, kappa);
  for (long sp = 0; sp < S; ++sp) {
    long rem = sp;
    std::array<int, 3> j{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      j[a] = int(rem % L) - J;
      rem /= L;
    }
    int linf = std::max({std::abs(j[0]), std::abs(j[1]), std::abs(j[2])});
    double v;
    if (linf == 0) {
      v = std::pow(g.hx, d + kappa) * C0;
    } else if (linf <= 2) {
      v = near_cell_power_integral(d, kappa, g.hx, j);
    } else {
      double r2 = 0;
      for (int a = 0; a < d; ++a) r2 += double(j[a]) * j[a];
      v = std::pow(r2 * g.hx * g.hx, 0.5 * kappa) * g.spatial_cell_volume();
    }
    V[sp] = N * v;
  }
  return apply_spatial(f, V, J, 1.0);
}

std::vector<GridFunction> grad_from_heat_data(const GridFunction& gdata) {
  const Grid& g = gdata.grid;
  if (g.mode != GridMode::Parabolic)
    throw std::invalid_argument("grad_from_heat_data: parabolic grid required");
  const int Pt = 2 * g.nt, Px = 2 * g.nx;
  std::vector<int> dims{Pt};
  for (int a = 0; a < g.d; ++a) dims.push_back(Px);
  PaddedConv conv(dims);
  conv.set_field(embed_field(gdata, Pt, Px));
  const double scale = -0.5 * std::pow(4.0 * kPi, -0.5 * g.d);
  std::vector<GridFunction> out;
  for (int axis = 0; axis < g.d; ++axis) {
    PotentialWeights pw = make_grad_weights(g, axis);
    Eigen::ArrayXd K = padded_spacetime_kernel(g, pw, false);
    Eigen::ArrayXd res = conv.convolve_with_field(K);
    out.push_back(extract_field(g, res, Px, scale));
  }
  return out;
}

} // namespace morrey
