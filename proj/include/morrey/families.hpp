#pragma once

#include "morrey/grid.hpp"

namespace morrey::families {

/// exp(-|x|^2/w^2 - t^2/w^4): maps to itself under parabolic dilation with
/// width w/R, which keeps the dilation checks clean.
AnalyticField gaussian(double w);

/// Compactly supported C^2 tensor bump of half-width w (w^2 in time).
AnalyticField tensor_bump(double w);

/// One-signed oscillatory bump: tensor bump times (1 + a*sin(freq*(x_1+t))).
AnalyticField oscillatory_bump(double w, double freq, double a = 0.5);

/// min(|x|^-gamma, cap), constant in time.
AnalyticField radial_singular(double gamma, double cap);

/// Indicator of C_rho(t0, x0).
AnalyticField cylinder_indicator(double rho, double t0,
                                 const Eigen::Vector3d& x0 = Eigen::Vector3d::Zero());

// --- the log-profile family of the failure example ------------------------
// h(t) = 0 for t <= 0, t for t >= 1, with the quintic-smoothstep bridge
// h(t) = t * S5(t) in between (C^2, monotone).
double h_profile(double t);
double h_prime(double t);
double h_second(double t);

/// u_delta(x) = h(ln(delta/|x|)); radius floored at r_floor to keep samples
/// finite (callers exclude the floored cells and record the radius).
double u_delta(const Eigen::Vector3d& x, int d, double delta, double r_floor);
/// |Du_delta| = h'(ln(delta/|x|)) / |x|.
double grad_norm_u_delta(const Eigen::Vector3d& x, int d, double delta,
                         double r_floor);
Eigen::Vector3d grad_u_delta(const Eigen::Vector3d& x, int d, double delta,
                             double r_floor);
/// Frobenius norm of the Hessian of u_delta.
double hess_norm_u_delta(const Eigen::Vector3d& x, int d, double delta,
                         double r_floor);
/// b(x) = 1/|x| with the same floor.
double b_singular(const Eigen::Vector3d& x, int d, double r_floor);

} // namespace morrey::families
