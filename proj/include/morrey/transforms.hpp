#pragma once

#include "morrey/grid.hpp"

namespace morrey {

/// u(t,x) = v(t/R^2, x/R), realized exactly by scaling the grid itself
/// (hx -> R*hx, ht -> R^2*ht); any R > 0, no resampling error.
GridFunction parabolic_scale(const GridFunction& v, double R);

/// Phi(t) = t(2/(|t| v 1) - 1); maps [-3/2,3/2] onto [-1,1], identity-like
/// on [-1,1] up to sign pattern of the fold.
double time_fold_map(double t);
/// w(t,x) = u(Phi(t), x) with nearest-layer lookup; requires the grid's
/// time extent to cover [-3/2, 3/2].
GridFunction time_fold(const GridFunction& u);

/// Three-term radial reflection across |x| = 1:
///   v = 6u(t, x(2/|x|-1)) - 8u(t, x(3/|x|-2)) + 3u(t, x(4/|x|-3))
/// for 1 <= |x| <= 6/5, v = u inside B_1, 0 outside B_{6/5}.
GridFunction hestenes_extend(const GridFunction& u);

/// Radius map r in [R1, 1] -> [1, R2] for the annulus pullback.
using RadialMap = std::function<double(double)>;

/// u(t,x) = v(t, x * phi_inv(|x|)/|x|) on the annulus R1 <= |x| <= 1, zero
/// elsewhere. Default map is the first Hestenes reflection r -> 2 - r
/// (R1 = 4/5, R2 = 6/5). The map must be strictly monotone on [R1, 1].
GridFunction annulus_pullback(const GridFunction& v, double R1 = 0.8,
                              const RadialMap& phi_inv = nullptr);

/// Smoothstep ramps (clamped outside [0,1]).
double smoothstep3(double s);
double smoothstep5(double s);

/// Scalar cutoff profiles: 1 at |arg| <= inner, 0 at |arg| >= outer.
/// The time profile uses the cubic ramp (keeps |z| + |z'| <= 4 on the
/// width-1/2 ramp); the space profile uses the quintic ramp (C^2).
double cutoff_time_value(double t, double inner, double outer);
double cutoff_space_value(double r, double inner, double outer);

GridFunction cutoff_time(const Grid& g, double inner, double outer);
GridFunction cutoff_space(const Grid& g, double inner, double outer);

/// Multilinear interpolation of the spatial slice `it` at point y.
double interp_spatial(const GridFunction& f, int it, const Eigen::Vector3d& y);

} // namespace morrey
