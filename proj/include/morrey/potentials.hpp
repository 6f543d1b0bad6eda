#pragma once

#include "morrey/grid.hpp"

namespace morrey {

/// p_alpha(s, r) = s^{-(d+2-alpha)/2} exp(-r^2/s) for s > 0, else 0.
double kernel_p_alpha(double alpha, int d, double s, double r);

/// Mass of p_alpha over (0,T] x R^d in closed form: pi^{d/2} (2/alpha) T^{alpha/2}.
double kernel_time_slab_mass(double alpha, int d, double T);

/// Discrete kernel weights W(m, j): the cell-exact spatial integral of the
/// kernel (erf products) integrated in s over time cells, with the singular
/// first cell handled by dyadic refinement. Offsets m in [0, mmax], each
/// spatial axis in [-J, J].
struct PotentialWeights {
  Grid grid;
  int mmax = 0;
  int J = 0;
  Eigen::ArrayXd w; // (mmax+1) x (2J+1)^d
  double mass = 0;      // sum of weights over the reference window
  double semi_mass = 0; // same integral by high-resolution time quadrature
  double quad_error() const {
    return semi_mass == 0 ? 0 : std::abs(mass - semi_mass) / std::abs(semi_mass);
  }
  long spatial_size() const {
    long n = 1;
    for (int a = 0; a < grid.d; ++a) n *= 2 * J + 1;
    return n;
  }
};

PotentialWeights make_potential_weights(const Grid& grid, double alpha);
/// Kernel of the i-th gradient component of the heat representation:
/// y_i s^{-(d+2)/2} exp(-|y|^2/(4s)).
PotentialWeights make_grad_weights(const Grid& grid, int axis);

struct PotentialResult {
  GridFunction field;
  double quad_error = 0;
};

/// P_alpha f(t,x) = int p_alpha(s,|y|) f(t+s, x+y) dy ds, truncated to the
/// grid (f vanishes outside).
PotentialResult apply_P_alpha(const GridFunction& f, double alpha);

/// Conjugate of P_1: P_1^* f(t,x) uses the same weights with reversed
/// offsets, so that <P_1 f, g> = <f, P_1^* g> exactly on the lattice.
PotentialResult apply_P1_adjoint(const GridFunction& f);

/// Time-independent data on an elliptic grid: integrates the kernel's time
/// marginal out to s_max (semi-infinite column of the space-time kernel)
/// and applies the resulting spatial convolution.
PotentialResult apply_P_alpha_stationary(const GridFunction& f, double alpha,
                                         double s_max);

/// N(alpha) I_alpha f with N(alpha) = Gamma((d-alpha)/2): the time marginal
/// of p_alpha. Elliptic grids, alpha < d. Cell-integrated |y|^{alpha-d}
/// weights near the singularity, midpoint further out.
GridFunction riesz_potential(const GridFunction& f, double alpha);

/// D_i u recovered from g = dt u + Lap u:
///   D_i u(t,x) = -(4 pi)^{-d/2}/2 int y_i s^{-(d+2)/2} e^{-|y|^2/(4s)}
///                                    g(t+s, x+y) dy ds.
std::vector<GridFunction> grad_from_heat_data(const GridFunction& g);

} // namespace morrey
