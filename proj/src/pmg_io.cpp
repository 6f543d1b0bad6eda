#include "morrey/grid.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace morrey {

// PMG/1: ASCII header `pmg <d> <mode> <nt> <nx> <hx> <origin...>`, then
// 8-byte little-endian doubles, t-major then lexicographic in x.

namespace {

static_assert(std::endian::native == std::endian::little,
              "PMG writer assumes a little-endian host");

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

} // namespace

void write_pmg(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pmg: cannot open " + path);
  const Grid& g = f.grid;
  out << "pmg " << g.d << ' '
      << (g.mode == GridMode::Parabolic ? "parabolic" : "elliptic") << ' '
      << g.nt << ' ' << g.nx << ' ' << fmt(g.hx) << ' ' << fmt(g.origin_t);
  for (int a = 0; a < g.d; ++a) out << ' ' << fmt(g.origin_x[a]);
  out << '\n';
  out.write(reinterpret_cast<const char*>(f.values.data()),
            std::streamsize(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_pmg: write failed for " + path);
}

GridFunction read_pmg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pmg: cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("read_pmg: missing header");
  std::istringstream hs(header);
  std::string magic, mode;
  int d, nt, nx;
  double hx, ot;
  if (!(hs >> magic >> d >> mode >> nt >> nx >> hx >> ot) || magic != "pmg")
    throw std::runtime_error("read_pmg: malformed header in " + path);
  Eigen::Vector3d ox = Eigen::Vector3d::Zero();
  for (int a = 0; a < d; ++a)
    if (!(hs >> ox[a])) throw std::runtime_error("read_pmg: malformed origin");
  GridMode m;
  if (mode == "parabolic")
    m = GridMode::Parabolic;
  else if (mode == "elliptic")
    m = GridMode::Elliptic;
  else
    throw std::runtime_error("read_pmg: unknown mode " + mode);

  Grid g = make_grid(d, nx, nt, hx, ot, ox, m);
  if (g.nt != nt) throw std::runtime_error("read_pmg: inconsistent nt");
  GridFunction f{g, Eigen::ArrayXd(g.cells())};
  in.read(reinterpret_cast<char*>(f.values.data()),
          std::streamsize(f.values.size() * sizeof(double)));
  if (in.gcount() != std::streamsize(f.values.size() * sizeof(double)))
    throw std::runtime_error("read_pmg: truncated payload in " + path);
  return f;
}

} // namespace morrey
