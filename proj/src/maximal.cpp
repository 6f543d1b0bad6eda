#include "morrey/maximal.hpp"

#include "morrey/scan.hpp"

#include <cmath>
#include <stdexcept>

namespace morrey {

namespace {

std::vector<int> radii_for(const Grid& g, const MaximalOptions& opts) {
  return opts.radii.empty() ? detail::default_radii(g, kInf) : opts.radii;
}

// rho^beta * clipped-cylinder average of |f| at every anchor, one radius.
Eigen::ArrayXd anchored_averages(const Grid& g, detail::BallSummer& bs, int k,
                                 double beta) {
  const bool parab = g.mode == GridMode::Parabolic;
  Eigen::ArrayXd sums = bs.ball_sums(k);
  Eigen::ArrayXd counts = bs.ball_counts(k); // spatial, one slice
  const long nsp = g.spatial_cells();
  if (parab && k * k > 1) sums = detail::time_window_sums(g, sums, k * k);
  Eigen::ArrayXd out(g.cells());
  const double rb = std::pow(k * g.hx, beta);
  for (int it = 0; it < g.nt; ++it) {
    const double layers = parab ? double(std::min(g.nt, it + k * k) - it) : 1.0;
    for (long s = 0; s < nsp; ++s) {
      const double cnt = counts[s] * layers;
      out[long(it) * nsp + s] = cnt > 0 ? rb * sums[long(it) * nsp + s] / cnt : 0.0;
    }
  }
  return out;
}

} // namespace

GridFunction m_beta(const GridFunction& f, double beta, const MaximalOptions& opts) {
  const Grid& g = f.grid;
  if (!(beta >= 0 && beta <= g.d + 2))
    throw std::invalid_argument("m_beta: beta out of [0, d+2]");
  Eigen::ArrayXd absf = f.values.abs();
  detail::BallSummer bs(g, absf);
  GridFunction out = zeros(g);
  for (int k : radii_for(g, opts))
    out.values = out.values.max(anchored_averages(g, bs, k, beta));
  return out;
}

GridFunction m_hat(const GridFunction& f, const MaximalOptions& opts) {
  const Grid& g = f.grid;
  const bool parab = g.mode == GridMode::Parabolic;
  Eigen::ArrayXd absf = f.values.abs();
  detail::BallSummer bs(g, absf);
  GridFunction out = zeros(g);
  for (int k : radii_for(g, opts)) {
    Eigen::ArrayXd avg = anchored_averages(g, bs, k, 0.0);
    // a point sees every anchor within the reversed cylinder
    avg = detail::ball_max(g, avg, k);
    if (parab && k * k > 1) avg = detail::trailing_time_window_max(g, avg, k * k);
    out.values = out.values.max(avg);
  }
  return out;
}

double envelope_Dr(double r, double t, const Eigen::Vector3d& x, int d) {
  if (!(r > 0)) throw std::invalid_argument("envelope_Dr: r must be positive");
  double nx = 0;
  for (int a = 0; a < d; ++a) nx += x[a] * x[a];
  nx = std::sqrt(nx);
  const double R = 2 * r;
  if (std::abs(t) <= R * R && nx <= R) return 1.0;
  const double denom =
      std::max(std::pow(std::abs(t), 0.5 * (d + 2)), std::pow(nx, double(d + 2)));
  return std::pow(r, double(d + 2)) / denom;
}

Check44Report check_44(const GridFunction& g, double q, double beta, double alpha,
                       double r, const MaximalOptions& opts) {
  const Grid& gr = g.grid;
  if (gr.mode != GridMode::Parabolic)
    throw std::invalid_argument("check_44: parabolic grid required");
  if (!(q >= 1) || !(beta > 0 && beta <= gr.d + 2) || !(alpha > 0))
    throw std::invalid_argument("check_44: exponent hypotheses violated");
  if (!(alpha > 1 - q * beta / (gr.d + 2)))
    throw std::invalid_argument("check_44: needs alpha > 1 - q*beta/(d+2)");

  GridFunction ind = sample(
      [&](double t, const Eigen::Vector3d& x) {
        double nx = 0;
        for (int a = 0; a < gr.d; ++a) nx += x[a] * x[a];
        return (std::abs(t) <= r * r + 1e-12 && std::sqrt(nx) <= r + 1e-12) ? 1.0
                                                                            : 0.0;
      },
      gr);
  GridFunction mh = m_hat(ind, opts);
  Check44Report rep;
  rep.lhs = (g.values.abs().pow(q) * mh.values.pow(alpha)).sum() * gr.cell_volume();
  MorreyResult nm = morrey_norm(g, q, beta, NormDomain::all());
  rep.rhs = std::pow(r, gr.d + 2 - q * beta) * std::pow(nm.value, q);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? kInf : 0.0);
  return rep;
}

} // namespace morrey
