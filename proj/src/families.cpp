#include "morrey/families.hpp"

#include "morrey/transforms.hpp"

#include <cmath>

namespace morrey::families {

namespace {

double rad(const Eigen::Vector3d& x, int d) {
  double r2 = 0;
  for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
  return std::sqrt(r2);
}

double bump1(double s) { // C^2 bump on |s| < 1
  const double q = 1 - s * s;
  return q > 0 ? q * q * q : 0.0;
}

} // namespace

AnalyticField gaussian(double w) {
  return [w](double t, const Eigen::Vector3d& x) {
    double r2 = x.squaredNorm();
    return std::exp(-r2 / (w * w) - t * t / (w * w * w * w));
  };
}

AnalyticField tensor_bump(double w) {
  return [w](double t, const Eigen::Vector3d& x) {
    double v = bump1(t / (w * w));
    for (int a = 0; a < 3; ++a) v *= bump1(x[a] / w);
    return v;
  };
}

AnalyticField oscillatory_bump(double w, double freq, double a) {
  AnalyticField base = tensor_bump(w);
  return [base, freq, a](double t, const Eigen::Vector3d& x) {
    return base(t, x) * (1.0 + a * std::sin(freq * (x[0] + t)));
  };
}

AnalyticField radial_singular(double gamma, double cap) {
  return [gamma, cap](double, const Eigen::Vector3d& x) {
    double r = x.norm();
    return r <= 0 ? cap : std::min(std::pow(r, -gamma), cap);
  };
}

AnalyticField cylinder_indicator(double rho, double t0, const Eigen::Vector3d& x0) {
  return [rho, t0, x0](double t, const Eigen::Vector3d& x) {
    return ((x - x0).norm() < rho && t >= t0 - 1e-12 && t < t0 + rho * rho - 1e-12)
               ? 1.0
               : 0.0;
  };
}

double h_profile(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return t;
  return t * smoothstep5(t);
}

double h_prime(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double s5 = smoothstep5(t);
  const double d5 = 30 * t * t * (t - 1) * (t - 1);
  return s5 + t * d5;
}

double h_second(double t) {
  if (t <= 0 || t >= 1) return 0;
  const double d5 = 30 * t * t * (t - 1) * (t - 1);
  const double dd5 = 60 * t * (t - 1) * (2 * t - 1);
  return 2 * d5 + t * dd5;
}

double u_delta(const Eigen::Vector3d& x, int d, double delta, double r_floor) {
  const double r = std::max(rad(x, d), r_floor);
  return h_profile(std::log(delta / r));
}

Eigen::Vector3d grad_u_delta(const Eigen::Vector3d& x, int d, double delta,
                             double r_floor) {
  const double r = std::max(rad(x, d), r_floor);
  const double hp = h_prime(std::log(delta / r));
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (int a = 0; a < d; ++a) g[a] = -x[a] / (r * r) * hp;
  return g;
}

double grad_norm_u_delta(const Eigen::Vector3d& x, int d, double delta,
                         double r_floor) {
  const double r = std::max(rad(x, d), r_floor);
  return h_prime(std::log(delta / r)) / r;
}

double hess_norm_u_delta(const Eigen::Vector3d& x, int d, double delta,
                         double r_floor) {
  const double r = std::max(rad(x, d), r_floor);
  const double L = std::log(delta / r);
  const double hp = h_prime(L), hpp = h_second(L);
  // D_ij u = hpp x_i x_j / r^4 + hp (2 x_i x_j / r^4 - delta_ij / r^2)
  double fro2 = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double xij = x[i] * x[j] / (r * r * r * r);
      double v = hpp * xij + hp * (2 * xij - (i == j ? 1.0 / (r * r) : 0.0));
      fro2 += v * v;
    }
  return std::sqrt(fro2);
}

double b_singular(const Eigen::Vector3d& x, int d, double r_floor) {
  return 1.0 / std::max(rad(x, d), r_floor);
}

} // namespace morrey::families
