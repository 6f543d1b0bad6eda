#pragma once

#include "morrey/grid.hpp"
#include "morrey/norms.hpp"

namespace morrey {

struct MaximalOptions {
  std::vector<int> radii; // rho = k*hx; empty -> default sweep
};

/// M_beta f(z) = sup_rho rho^beta * average of |f| over C_rho(z), with the
/// average taken over cells of the grid (clipped cylinders keep exactness
/// for constants). beta = 0 gives the maximal function M.
GridFunction m_beta(const GridFunction& f, double beta,
                    const MaximalOptions& opts = {});

/// Symmetric variant: sup over all grid-aligned cylinders containing z.
GridFunction m_hat(const GridFunction& f, const MaximalOptions& opts = {});

/// Closed-form two-sided envelope of M_hat I_{D_r}: 1 on D_{2r}, else
/// r^{d+2} / max(|t|^{(d+2)/2}, |x|^{d+2}).
double envelope_Dr(double r, double t, const Eigen::Vector3d& x, int d);

/// Weighted integral bound: int g^q (M_hat I_{D_r})^alpha dz against
/// r^{d+2-q*beta} ||g||^q_{E_{q,beta}}.
struct Check44Report {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};
Check44Report check_44(const GridFunction& g, double q, double beta,
                       double alpha, double r, const MaximalOptions& opts = {});

} // namespace morrey
