#include "morrey/norms.hpp"

#include "morrey/fft_conv.hpp"
#include "morrey/scan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace morrey {

namespace detail {

namespace {

int isqrt_strict(long v) {
  // largest j >= 0 with j*j <= v; v < 0 -> -1
  if (v < 0) return -1;
  int j = int(std::sqrt(double(v)));
  while (long(j + 1) * (j + 1) <= v) ++j;
  while (long(j) * j > v) --j;
  return j;
}

// max over src[c+j0 .. c+j1-1] (clipped to [0,n)) for every c, combined into
// dst via max. Monotone-deque sliding maximum.
void sliding_max_combine(const double* src, int n, int j0, int j1, double* dst,
                         int dst_stride, int src_stride) {
  std::deque<int> q; // indices, decreasing values
  int next = j0; // next source index to admit for window of c=0
  for (int c = 0; c < n; ++c) {
    int lo = c + j0, hi = c + j1; // window [lo, hi)
    for (; next < hi; ++next) {
      if (next < 0 || next >= n) continue;
      double v = src[next * src_stride];
      while (!q.empty() && src[q.back() * src_stride] <= v) q.pop_back();
      q.push_back(next);
    }
    while (!q.empty() && q.front() < lo) q.pop_front();
    if (!q.empty()) {
      double v = src[q.front() * src_stride];
      if (v > dst[c * dst_stride]) dst[c * dst_stride] = v;
    }
  }
}

} // namespace

std::vector<OffsetRow> ball_offsets(int d, int k) {
  std::vector<OffsetRow> rows;
  const long kk = long(k) * k;
  if (d == 1) {
    int jm = isqrt_strict(kk - 1);
    if (jm >= 0) rows.push_back({0, 0, -jm, jm + 1});
  } else if (d == 2) {
    for (int d1 = -(k - 1); d1 <= k - 1; ++d1) {
      int jm = isqrt_strict(kk - long(d1) * d1 - 1);
      if (jm >= 0) rows.push_back({d1, 0, -jm, jm + 1});
    }
  } else {
    for (int d1 = -(k - 1); d1 <= k - 1; ++d1)
      for (int d2 = -(k - 1); d2 <= k - 1; ++d2) {
        int jm = isqrt_strict(kk - long(d1) * d1 - long(d2) * d2 - 1);
        if (jm >= 0) rows.push_back({d1, d2, -jm, jm + 1});
      }
  }
  return rows;
}

long ball_offset_count(const std::vector<OffsetRow>& rows) {
  long n = 0;
  for (const auto& r : rows) n += r.j1 - r.j0;
  return n;
}

// Trim offsets that can never reach a grid cell (sources beyond the grid are
// zero); required for alias-free FFT evaluation as well.
static std::vector<OffsetRow> trim_offsets(std::vector<OffsetRow> rows, int nx) {
  std::vector<OffsetRow> out;
  for (auto r : rows) {
    if (std::abs(r.d1) >= nx || std::abs(r.d2) >= nx) continue;
    r.j0 = std::max(r.j0, -(nx - 1));
    r.j1 = std::min(r.j1, nx);
    if (r.j0 < r.j1) out.push_back(r);
  }
  return out;
}

struct BallSummer::Fft {
  explicit Fft(std::vector<int> dims) : conv(std::move(dims)) {}
  PaddedConv conv;
  std::vector<std::vector<std::complex<double>>> slice_ffts;
  std::vector<std::complex<double>> ones_fft;
};

BallSummer::BallSummer(const Grid& grid, const Eigen::ArrayXd& vals)
    : grid_(grid), vals_(vals) {
  if (vals_.size() != grid_.cells())
    throw std::invalid_argument("BallSummer: size mismatch");
  const int nx = grid_.nx;
  const long nrows = grid_.cells() / nx;
  prefix_ = Eigen::ArrayXd::Zero(nrows * (nx + 1));
  for (long r = 0; r < nrows; ++r) {
    const double* src = vals_.data() + r * nx;
    double* dst = prefix_.data() + r * (nx + 1);
    double acc = 0;
    dst[0] = 0;
    for (int j = 0; j < nx; ++j) {
      acc += src[j];
      dst[j + 1] = acc;
    }
  }
}

BallSummer::~BallSummer() = default;

Eigen::ArrayXd BallSummer::direct_sums(const std::vector<OffsetRow>& rows) const {
  const int nx = grid_.nx, d = grid_.d, nt = grid_.nt;
  const int n1 = d >= 2 ? nx : 1;
  const int n2 = d >= 3 ? nx : 1;
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid_.cells());
  const long sp_rows = long(n1) * n2; // leading rows per slice
  for (int it = 0; it < nt; ++it) {
    const long slice_row0 = long(it) * sp_rows;
    for (const auto& r : rows) {
      for (int c1 = 0; c1 < n1; ++c1) {
        const int s1 = d >= 2 ? c1 + r.d1 : 0;
        if (d >= 2 && (s1 < 0 || s1 >= nx)) continue;
        for (int c2 = 0; c2 < n2; ++c2) {
          const int s2 = d >= 3 ? c2 + r.d2 : 0;
          if (d >= 3 && (s2 < 0 || s2 >= nx)) continue;
          const double* P =
              prefix_.data() + (slice_row0 + long(s1) * n2 + s2) * (nx + 1);
          double* O = out.data() + (slice_row0 + long(c1) * n2 + c2) * nx;
          const int lo_safe = std::max(0, -r.j0);
          const int hi_safe = std::min(nx, nx - r.j1 + 1);
          for (int c3 = 0; c3 < std::min(lo_safe, nx); ++c3) {
            int a = std::max(0, c3 + r.j0), b = std::min(nx, c3 + r.j1);
            if (a < b) O[c3] += P[b] - P[a];
          }
          for (int c3 = lo_safe; c3 < hi_safe; ++c3)
            O[c3] += P[c3 + r.j1] - P[c3 + r.j0];
          for (int c3 = std::max(hi_safe, lo_safe); c3 < nx; ++c3) {
            int a = std::max(0, c3 + r.j0), b = std::min(nx, c3 + r.j1);
            if (a < b) O[c3] += P[b] - P[a];
          }
        }
      }
    }
  }
  return out;
}

Eigen::ArrayXd BallSummer::kernel_field(const std::vector<OffsetRow>& rows) const {
  const int nx = grid_.nx, d = grid_.d, P = 2 * nx;
  long total = 1;
  for (int a = 0; a < d; ++a) total *= P;
  Eigen::ArrayXd kf = Eigen::ArrayXd::Zero(total);
  auto wrap = [&](int o) { return ((o % P) + P) % P; };
  for (const auto& r : rows) {
    long base = 0;
    if (d >= 2) base = wrap(r.d1);
    if (d >= 3) base = base * P + wrap(r.d2);
    for (int j = r.j0; j < r.j1; ++j) kf[base * P + wrap(j)] = 1.0;
  }
  return kf;
}

Eigen::ArrayXd BallSummer::fft_sums(int k) {
  const int nx = grid_.nx, d = grid_.d, nt = grid_.nt, P = 2 * nx;
  if (!fft_) {
    std::vector<int> dims(size_t(d), P);
    fft_ = std::make_unique<Fft>(dims);
    // cache slice transforms
    long padded = 1;
    for (int a = 0; a < d; ++a) padded *= P;
    const long nsp = grid_.spatial_cells();
    const int n1 = d >= 2 ? nx : 1;
    const int n2 = d >= 3 ? nx : 1;
    for (int it = 0; it < nt; ++it) {
      Eigen::ArrayXd padf = Eigen::ArrayXd::Zero(padded);
      for (long s = 0; s < nsp; ++s) {
        long i1 = d >= 2 ? (s / (long(n2) * nx)) : 0;
        long i2 = d >= 3 ? ((s / nx) % n2) : 0;
        long i3 = s % nx;
        long pidx = i3;
        if (d == 2) pidx = i1 * P + i3;
        if (d == 3) pidx = (i1 * P + i2) * P + i3;
        padf[pidx] = vals_[long(it) * nsp + s];
      }
      fft_->slice_ffts.push_back(fft_->conv.forward(padf));
    }
  }
  auto rows = trim_offsets(ball_offsets(d, k), nx);
  auto kf = fft_->conv.forward(kernel_field(rows));
  Eigen::ArrayXd out(grid_.cells());
  const long nsp = grid_.spatial_cells();
  const int n2 = d >= 3 ? nx : 1;
  for (int it = 0; it < nt; ++it) {
    Eigen::ArrayXd slice = fft_->conv.inverse_product(fft_->slice_ffts[size_t(it)], kf);
    for (long s = 0; s < nsp; ++s) {
      long i1 = d >= 2 ? (s / (long(n2) * nx)) : 0;
      long i2 = d >= 3 ? ((s / nx) % n2) : 0;
      long i3 = s % nx;
      long pidx = i3;
      if (d == 2) pidx = i1 * P + i3;
      if (d == 3) pidx = (i1 * P + i2) * P + i3;
      out[long(it) * nsp + s] = slice[pidx];
    }
  }
  return out;
}

Eigen::ArrayXd BallSummer::ball_sums(int k) {
  auto rows = trim_offsets(ball_offsets(grid_.d, k), grid_.nx);
  if (rows.empty()) return Eigen::ArrayXd::Zero(grid_.cells());
  const double direct_cost = double(grid_.cells()) * double(rows.size());
  if (direct_cost > 1.5e8 && grid_.d >= 2) return fft_sums(k);
  return direct_sums(rows);
}

Eigen::ArrayXd BallSummer::ball_counts(int k) {
  // counts depend only on x; evaluate on a one-slice grid of ones
  Grid g1 = grid_;
  g1.nt = 1;
  auto rows = trim_offsets(ball_offsets(grid_.d, k), grid_.nx);
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(grid_.spatial_cells());
  if (rows.empty()) return counts;
  const int nx = grid_.nx, d = grid_.d;
  const int n1 = d >= 2 ? nx : 1;
  const int n2 = d >= 3 ? nx : 1;
  for (const auto& r : rows) {
    for (int c1 = 0; c1 < n1; ++c1) {
      const int s1 = d >= 2 ? c1 + r.d1 : 0;
      if (d >= 2 && (s1 < 0 || s1 >= nx)) continue;
      for (int c2 = 0; c2 < n2; ++c2) {
        const int s2 = d >= 3 ? c2 + r.d2 : 0;
        if (d >= 3 && (s2 < 0 || s2 >= nx)) continue;
        double* O = counts.data() + (long(c1) * n2 + c2) * nx;
        for (int c3 = 0; c3 < nx; ++c3) {
          int a = std::max(0, c3 + r.j0), b = std::min(nx, c3 + r.j1);
          if (a < b) O[c3] += b - a;
        }
      }
    }
  }
  return counts;
}

Eigen::ArrayXd ball_max(const Grid& grid, const Eigen::ArrayXd& vals, int k) {
  auto rows = trim_offsets(ball_offsets(grid.d, k), grid.nx);
  const int nx = grid.nx, d = grid.d, nt = grid.nt;
  const int n1 = d >= 2 ? nx : 1;
  const int n2 = d >= 3 ? nx : 1;
  Eigen::ArrayXd out =
      Eigen::ArrayXd::Constant(grid.cells(), -std::numeric_limits<double>::infinity());
  const long nsp = grid.spatial_cells();
  for (int it = 0; it < nt; ++it) {
    const double* S = vals.data() + long(it) * nsp;
    double* O = out.data() + long(it) * nsp;
    for (const auto& r : rows) {
      for (int c1 = 0; c1 < n1; ++c1) {
        const int s1 = d >= 2 ? c1 + r.d1 : 0;
        if (d >= 2 && (s1 < 0 || s1 >= nx)) continue;
        for (int c2 = 0; c2 < n2; ++c2) {
          const int s2 = d >= 3 ? c2 + r.d2 : 0;
          if (d >= 3 && (s2 < 0 || s2 >= nx)) continue;
          sliding_max_combine(S + (long(s1) * n2 + s2) * nx, nx, r.j0, r.j1,
                              O + (long(c1) * n2 + c2) * nx, 1, 1);
        }
      }
    }
  }
  return out;
}

Eigen::ArrayXd time_window_sums(const Grid& grid, const Eigen::ArrayXd& field, int w) {
  const long nsp = grid.spatial_cells();
  const int nt = grid.nt;
  Eigen::ArrayXd out(grid.cells());
  for (long s = 0; s < nsp; ++s) {
    double acc = 0;
    // two-pointer trailing subtraction keeps this O(nt)
    std::vector<double> pre(size_t(nt) + 1, 0.0);
    for (int it = 0; it < nt; ++it) pre[size_t(it) + 1] = pre[size_t(it)] + field[long(it) * nsp + s];
    for (int it = 0; it < nt; ++it) {
      int hi = std::min(nt, it + w);
      out[long(it) * nsp + s] = pre[size_t(hi)] - pre[size_t(it)];
    }
    (void)acc;
  }
  return out;
}

Eigen::ArrayXd time_window_counts(const Grid& grid, int w) {
  Eigen::ArrayXd out(grid.cells());
  const long nsp = grid.spatial_cells();
  for (int it = 0; it < grid.nt; ++it)
    out.segment(long(it) * nsp, nsp) = double(std::min(grid.nt, it + w) - it);
  return out;
}

Eigen::ArrayXd time_window_max(const Grid& grid, const Eigen::ArrayXd& field, int w) {
  const long nsp = grid.spatial_cells();
  const int nt = grid.nt;
  Eigen::ArrayXd out =
      Eigen::ArrayXd::Constant(grid.cells(), -std::numeric_limits<double>::infinity());
  for (long s = 0; s < nsp; ++s)
    sliding_max_combine(field.data() + s, nt, 0, w, out.data() + s, nsp, nsp);
  return out;
}

Eigen::ArrayXd trailing_time_window_max(const Grid& grid, const Eigen::ArrayXd& field,
                                        int w) {
  const long nsp = grid.spatial_cells();
  const int nt = grid.nt;
  Eigen::ArrayXd out =
      Eigen::ArrayXd::Constant(grid.cells(), -std::numeric_limits<double>::infinity());
  for (long s = 0; s < nsp; ++s)
    sliding_max_combine(field.data() + s, nt, -(w - 1), 1, out.data() + s, nsp, nsp);
  return out;
}

std::vector<int> default_radii(const Grid& grid, double rho_cap) {
  int kmax;
  if (std::isfinite(rho_cap)) {
    kmax = int(std::floor(rho_cap / grid.hx + 1e-9));
  } else {
    kmax = int(std::ceil(grid.diameter() / grid.hx));
  }
  kmax = std::max(1, kmax);
  std::vector<int> ks;
  if (kmax <= 48) {
    for (int k = 1; k <= kmax; ++k) ks.push_back(k);
  } else {
    for (int k = 1; k <= 32; ++k) ks.push_back(k);
    int k = 32;
    while (k < kmax) {
      k = std::min(kmax, std::max(k + 1, int(std::ceil(k * 1.25))));
      ks.push_back(k);
    }
  }
  return ks;
}

} // namespace detail

// ---------------------------------------------------------------------------

bool NormDomain::contains(double t, const Eigen::Vector3d& x, int d) const {
  auto dist = [&] {
    double s = 0;
    for (int a = 0; a < d; ++a) s += (x[a] - center[a]) * (x[a] - center[a]);
    return std::sqrt(s);
  };
  switch (kind) {
    case Kind::All: return true;
    case Kind::CylinderCR:
      return dist() < R && t >= base_t - 1e-12 && t < base_t + R * R - 1e-12;
    case Kind::Strip: return t > S && t < T;
    case Kind::Ball: return dist() < R;
  }
  return false;
}

Eigen::ArrayXd NormDomain::mask(const Grid& grid) const {
  Eigen::ArrayXd m(grid.cells());
  std::array<int, 3> ix{0, 0, 0};
  long idx = 0;
  for (int it = 0; it < grid.nt; ++it) {
    double t = grid.center_t(it);
    const long nsp = grid.spatial_cells();
    for (long s = 0; s < nsp; ++s, ++idx) {
      long rem = s;
      for (int a = grid.d - 1; a >= 0; --a) {
        ix[a] = int(rem % grid.nx);
        rem /= grid.nx;
      }
      m[idx] = contains(t, grid.center(ix), grid.d) ? 1.0 : 0.0;
    }
  }
  return m;
}

double NormDomain::rho_cap() const {
  if (kind == Kind::CylinderCR || kind == Kind::Ball) return R;
  return kInf;
}

std::string NormDomain::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::All: os << "all"; break;
    case Kind::CylinderCR: os << "C_" << R; break;
    case Kind::Strip: os << "Q_(" << S << "," << T << ")"; break;
    case Kind::Ball: os << "B_" << R; break;
  }
  return os.str();
}

double cylinder_measure(const Grid& grid, double rho) {
  double m = unit_ball_volume(grid.d) * std::pow(rho, grid.d);
  if (grid.mode == GridMode::Parabolic) m *= rho * rho;
  return m;
}

bool morrey_beta_valid(const Grid& grid, double p, double beta) {
  double index = grid.mode == GridMode::Parabolic ? (grid.d + 2) / p : grid.d / p;
  return beta > 0 && beta <= index + 1e-12;
}

bool mixed_beta_valid(const Grid& grid, double q1, double q2, double beta) {
  double index = grid.d / q1 + 2.0 / q2;
  return beta > 0 && beta <= index + 1e-12;
}

// ---------------------------------------------------------------------------

namespace {

double finalize_root(double sum, double p) { return std::pow(sum, 1.0 / p); }

void check_exponent(double p) {
  if (!(p >= 1)) throw std::invalid_argument("norm: exponent must be >= 1");
}

} // namespace

double lp_norm(const GridFunction& f, double p, const Region& region) {
  check_exponent(p);
  if (region.empty()) throw std::invalid_argument("empty region");
  const Grid& g = f.grid;
  const int n2 = g.d >= 3 ? g.nx : 1;
  double acc = 0, mx = 0;
  for (int it = region.t0; it < region.t1; ++it)
    for (const auto& row : region.rows) {
      long base;
      switch (g.d) {
        case 1: base = long(it) * g.nx; break;
        case 2: base = (long(it) * g.nx + row.i1) * g.nx; break;
        default: base = ((long(it) * g.nx + row.i1) * n2 + row.i2) * g.nx;
      }
      for (int j = row.j0; j < row.j1; ++j) {
        double v = std::abs(f.values[base + j]);
        if (std::isinf(p)) mx = std::max(mx, v);
        else acc += std::pow(v, p);
      }
    }
  if (std::isinf(p)) return mx;
  return finalize_root(acc * g.cell_volume(), p);
}

double slashed_lp_norm(const GridFunction& f, double p, const Region& region) {
  check_exponent(p);
  if (region.empty()) throw std::invalid_argument("empty region");
  if (std::isinf(p)) return lp_norm(f, p, region);
  double plain = lp_norm(f, p, region);
  double measure = double(region.cell_count()) * f.grid.cell_volume();
  return plain / finalize_root(measure, p);
}

namespace {

// Shared mixed-norm loop; when `indicator` is true the values are replaced
// by 1 on the region (the I_Gamma normalizer of Section-5 norms).
double mixed_norm_impl(const GridFunction& f, double q1, double q2,
                       const Region& region, bool indicator) {
  const Grid& g = f.grid;
  if (g.mode == GridMode::Elliptic)
    throw std::invalid_argument("mixed_norm: requires a parabolic grid");
  check_exponent(q1);
  check_exponent(q2);
  if (region.empty()) throw std::invalid_argument("empty region");
  const int n2 = g.d >= 3 ? g.nx : 1;
  const double spvol = g.spatial_cell_volume();
  double outer = 0, outer_max = 0;
  for (int it = region.t0; it < region.t1; ++it) {
    double inner = 0, inner_max = 0;
    for (const auto& row : region.rows) {
      long base;
      switch (g.d) {
        case 1: base = long(it) * g.nx; break;
        case 2: base = (long(it) * g.nx + row.i1) * g.nx; break;
        default: base = ((long(it) * g.nx + row.i1) * n2 + row.i2) * g.nx;
      }
      for (int j = row.j0; j < row.j1; ++j) {
        double v = indicator ? 1.0 : std::abs(f.values[base + j]);
        if (std::isinf(q1)) inner_max = std::max(inner_max, v);
        else inner += std::pow(v, q1);
      }
    }
    double I = std::isinf(q1) ? inner_max : finalize_root(inner * spvol, q1);
    if (std::isinf(q2)) outer_max = std::max(outer_max, I);
    else outer += std::pow(I, q2);
  }
  return std::isinf(q2) ? outer_max : finalize_root(outer * f.grid.ht, q2);
}

} // namespace

double mixed_norm(const GridFunction& f, double q1, double q2, const Region& region) {
  return mixed_norm_impl(f, q1, q2, region, false);
}

double slashed_mixed_norm(const GridFunction& f, double q1, double q2,
                          const Region& region) {
  double denom = mixed_norm_impl(f, q1, q2, region, true);
  return mixed_norm_impl(f, q1, q2, region, false) / denom;
}

double lp_norm(const GridFunction& f, double p, const NormDomain& Q) {
  check_exponent(p);
  Eigen::ArrayXd m = Q.mask(f.grid);
  if (std::isinf(p)) return (f.values.abs() * m).maxCoeff();
  double acc = (f.values.abs().pow(p) * m).sum() * f.grid.cell_volume();
  return finalize_root(acc, p);
}

double mixed_norm(const GridFunction& f, double q1, double q2, const NormDomain& Q) {
  const Grid& g = f.grid;
  if (g.mode == GridMode::Elliptic)
    throw std::invalid_argument("mixed_norm: requires a parabolic grid");
  check_exponent(q1);
  check_exponent(q2);
  Eigen::ArrayXd m = Q.mask(g);
  const long nsp = g.spatial_cells();
  double outer = 0, outer_max = 0;
  for (int it = 0; it < g.nt; ++it) {
    auto seg = f.values.segment(long(it) * nsp, nsp).abs() * m.segment(long(it) * nsp, nsp);
    double I = std::isinf(q1) ? seg.maxCoeff()
                              : finalize_root(seg.pow(q1).sum() * g.spatial_cell_volume(), q1);
    if (std::isinf(q2)) outer_max = std::max(outer_max, I);
    else outer += std::pow(I, q2);
  }
  return std::isinf(q2) ? outer_max : finalize_root(outer * g.ht, q2);
}

// ---------------------------------------------------------------------------

namespace {

struct ScanContext {
  Grid grid;
  Eigen::ArrayXd mask;
  std::vector<int> radii;
  bool geometric_centers = false;
};

ScanContext make_context(const GridFunction& f, const NormDomain& Q,
                         const MorreyOptions& opts) {
  ScanContext c;
  c.grid = f.grid;
  c.mask = Q.mask(f.grid);
  c.radii = opts.radii.empty() ? detail::default_radii(f.grid, Q.rho_cap())
                               : opts.radii;
  c.geometric_centers = opts.geometric_centers;
  return c;
}

// Prefix over the time axis per spatial position; size (nt+1) * nsp.
Eigen::ArrayXd time_prefix(const Grid& g, const Eigen::ArrayXd& field) {
  const long nsp = g.spatial_cells();
  Eigen::ArrayXd pre = Eigen::ArrayXd::Zero((g.nt + 1) * nsp);
  for (int it = 0; it < g.nt; ++it)
    pre.segment(long(it + 1) * nsp, nsp) =
        pre.segment(long(it) * nsp, nsp) + field.segment(long(it) * nsp, nsp);
  return pre;
}

double window_sum(const Eigen::ArrayXd& pre, const Grid& g, long s, int b, int w) {
  const long nsp = g.spatial_cells();
  int lo = std::clamp(b, 0, g.nt);
  int hi = std::clamp(b + w, 0, g.nt);
  if (lo >= hi) return 0.0;
  return pre[long(hi) * nsp + s] - pre[long(lo) * nsp + s];
}

void track_best(MorreyResult& best, double val, double rho, const Grid& g, int it,
                long s) {
  if (val > best.value) {
    best.value = val;
    best.rho_star = rho;
    best.center_t = g.mode == GridMode::Parabolic ? g.center_t(it) : 0.0;
    std::array<int, 3> ix{0, 0, 0};
    long rem = s;
    for (int a = g.d - 1; a >= 0; --a) {
      ix[a] = int(rem % g.nx);
      rem /= g.nx;
    }
    best.center_x = g.center(ix);
  }
}

} // namespace

MorreyResult morrey_norm(const GridFunction& f, double p, double beta,
                         const NormDomain& Q, const MorreyOptions& opts) {
  check_exponent(p);
  const Grid& g = f.grid;
  ScanContext c = make_context(f, Q, opts);
  MorreyResult best;
  best.degenerate = !morrey_beta_valid(g, p, beta);
  best.radii_scanned = long(c.radii.size());
  const bool parab = g.mode == GridMode::Parabolic;
  const long nsp = g.spatial_cells();
  const bool use_max = std::isinf(p);

  Eigen::ArrayXd gv = f.values * c.mask;
  Eigen::ArrayXd field = gv.abs();
  if (!use_max) field = field.pow(p);
  detail::BallSummer bs(g, field);
  long centers = 0;
  for (long i = 0; i < c.mask.size(); ++i) centers += c.mask[i] > 0.5;
  best.centers_scanned = centers;

  for (int k : c.radii) {
    const double rho = k * g.hx;
    const int w = parab ? k * k : 1;
    const double meas = cylinder_measure(g, rho);
    Eigen::ArrayXd S, pre;
    if (use_max) {
      S = detail::ball_max(g, field, k);
      if (parab && w > 1) S = detail::time_window_max(g, S, w);
    } else {
      S = bs.ball_sums(k);
      pre = time_prefix(g, S);
    }
    for (int it = 0; it < g.nt; ++it) {
      const long off = long(it) * nsp;
      int b = it;
      if (parab && c.geometric_centers) b = it - w / 2;
      for (long s = 0; s < nsp; ++s) {
        if (c.mask[off + s] <= 0.5) continue;
        double val;
        if (use_max) {
          val = std::pow(rho, beta) * S[off + s];
        } else {
          double cyl = parab ? window_sum(pre, g, s, b, w) : S[off + s];
          val = std::pow(rho, beta) *
                std::pow(cyl * g.cell_volume() / meas, 1.0 / p);
        }
        track_best(best, val, rho, g, it, s);
      }
    }
  }
  return best;
}

MorreyResult mixed_morrey_norm(const GridFunction& f, double q1, double q2,
                               double beta, const NormDomain& Q,
                               const MorreyOptions& opts) {
  const Grid& g = f.grid;
  if (g.mode == GridMode::Elliptic)
    throw std::invalid_argument("mixed_morrey_norm: requires a parabolic grid");
  check_exponent(q1);
  check_exponent(q2);
  ScanContext c = make_context(f, Q, opts);
  MorreyResult best;
  best.degenerate = !mixed_beta_valid(g, q1, q2, beta);
  best.radii_scanned = long(c.radii.size());
  const long nsp = g.spatial_cells();
  const bool inf1 = std::isinf(q1), inf2 = std::isinf(q2);

  Eigen::ArrayXd gv = f.values * c.mask;
  Eigen::ArrayXd field = gv.abs();
  if (!inf1) field = field.pow(q1);
  detail::BallSummer bs(g, field);
  const double omega = unit_ball_volume(g.d);

  for (int k : c.radii) {
    const double rho = k * g.hx;
    const int w = k * k;
    // inner spatial norm per slice
    Eigen::ArrayXd inner;
    if (inf1) {
      inner = detail::ball_max(g, field, k);
    } else {
      inner = bs.ball_sums(k);
      inner = (inner * g.spatial_cell_volume()).pow(1.0 / q1);
    }
    // normalizer ||I_{C_rho}||_{L_{q1,q2}}
    double denom = (inf1 ? 1.0 : std::pow(omega * std::pow(rho, g.d), 1.0 / q1)) *
                   (inf2 ? 1.0 : std::pow(rho * rho, 1.0 / q2));
    Eigen::ArrayXd pre, outer_max;
    if (inf2) {
      outer_max = detail::time_window_max(g, inner, w);
    } else {
      pre = time_prefix(g, inner.pow(q2));
    }
    for (int it = 0; it < g.nt; ++it) {
      const long off = long(it) * nsp;
      int b = it;
      if (c.geometric_centers) b = it - w / 2;
      for (long s = 0; s < nsp; ++s) {
        if (c.mask[off + s] <= 0.5) continue;
        double norm_val;
        if (inf2) {
          norm_val = outer_max[off + s];
        } else {
          norm_val = std::pow(window_sum(pre, g, s, b, w) * g.ht, 1.0 / q2);
        }
        double val = std::pow(rho, beta) * norm_val / denom;
        track_best(best, val, rho, g, it, s);
      }
    }
  }
  return best;
}

std::vector<ParabolicCylinder> concentric_family(const ParabolicCylinder& c,
                                                 const std::vector<double>& rho_list) {
  for (size_t i = 1; i < rho_list.size(); ++i)
    if (rho_list[i] < rho_list[i - 1])
      throw std::invalid_argument("concentric_family: rho_list must be sorted");
  const double t_gc = c.geometric_center_t();
  std::vector<ParabolicCylinder> out;
  for (double s : rho_list) {
    ParabolicCylinder cs = c;
    cs.rho = s;
    cs.t = t_gc - 0.5 * s * s;
    out.push_back(cs);
  }
  return out;
}

} // namespace morrey
