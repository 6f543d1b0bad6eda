#pragma once

#include "morrey/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace morrey {

/// The domain Q of a Morrey norm (and the restriction f -> f * I_Q).
struct NormDomain {
  enum class Kind { All, CylinderCR, Strip, Ball };
  Kind kind = Kind::All;
  double R = 0;                    // C_R / B_R radius
  double S = 0, T = 0;             // strip (S,T) x R^d
  double base_t = 0;               // time anchor of C_R
  Eigen::Vector3d center{0, 0, 0}; // spatial center of C_R / B_R

  static NormDomain all() { return {}; }
  static NormDomain cylinder(double R, double base_t = 0,
                             const Eigen::Vector3d& c = Eigen::Vector3d::Zero()) {
    NormDomain q; q.kind = Kind::CylinderCR; q.R = R; q.base_t = base_t; q.center = c;
    return q;
  }
  static NormDomain strip(double S, double T) {
    NormDomain q; q.kind = Kind::Strip; q.S = S; q.T = T;
    return q;
  }
  static NormDomain ball(double R, const Eigen::Vector3d& c = Eigen::Vector3d::Zero()) {
    NormDomain q; q.kind = Kind::Ball; q.R = R; q.center = c;
    return q;
  }

  bool contains(double t, const Eigen::Vector3d& x, int d) const;
  Eigen::ArrayXd mask(const Grid& grid) const; // 0/1 per cell
  double rho_cap() const;                      // R for C_R / B_R, else inf
  std::string describe() const;
};

struct MorreyOptions {
  std::vector<int> radii;          // rho = k*hx multipliers; empty -> default
  bool geometric_centers = false;  // scan centers as geometric centers of C_rho
};

struct MorreyResult {
  double value = 0;
  double rho_star = 0;
  double center_t = 0;
  Eigen::Vector3d center_x{0, 0, 0};
  bool degenerate = false; // beta above the space index (Remark-3.2 regime)
  long centers_scanned = 0;
  long radii_scanned = 0;
};

// ---- Region norms (discrete measure: cells-in-region times cell volume).
double lp_norm(const GridFunction& f, double p, const Region& region);
double slashed_lp_norm(const GridFunction& f, double p, const Region& region);
double mixed_norm(const GridFunction& f, double q1, double q2, const Region& region);
double slashed_mixed_norm(const GridFunction& f, double q1, double q2,
                          const Region& region);

// ---- Domain-wide norms.
double lp_norm(const GridFunction& f, double p, const NormDomain& Q);
double mixed_norm(const GridFunction& f, double q1, double q2, const NormDomain& Q);

// ---- Morrey norms: sup over grid-aligned (rho, center) of
//      rho^beta * ( |C_rho|^{-1} int_{C_rho} |f I_Q|^p )^{1/p},
// with |C_rho| the analytic cylinder (or ball) measure. Works on parabolic
// grids (cylinders) and elliptic grids (balls).
MorreyResult morrey_norm(const GridFunction& f, double p, double beta,
                         const NormDomain& Q, const MorreyOptions& opts = {});
MorreyResult mixed_morrey_norm(const GridFunction& f, double q1, double q2,
                               double beta, const NormDomain& Q,
                               const MorreyOptions& opts = {});

/// Validity of the Morrey exponent: beta <= (d+2)/p (parabolic) or d/p
/// (elliptic); beta <= d/q1 + 2/q2 for mixed norms.
bool morrey_beta_valid(const Grid& grid, double p, double beta);
bool mixed_beta_valid(const Grid& grid, double q1, double q2, double beta);

/// Cylinders C(s) sharing the geometric center of the first entry.
std::vector<ParabolicCylinder> concentric_family(const ParabolicCylinder& c,
                                                 const std::vector<double>& rho_list);

/// Analytic measure of C_rho (parabolic) or B_rho (elliptic).
double cylinder_measure(const Grid& grid, double rho);

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace morrey
