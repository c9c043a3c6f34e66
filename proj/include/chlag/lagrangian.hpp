#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/initial_data.hpp"
#include "chlag/quadrature.hpp"

namespace chlag {

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Monotone map Z(x) = int_0^x (1 + u0_x^2) and its inverse x(Z).
///
/// Z is tabulated on a dense x grid (breakpoints at the data kinks) and
/// evaluated between table points by Gauss-Legendre quadrature; the inverse
/// is a safeguarded Newton iteration on that evaluation. Outside the data
/// window the density is 1, so the map continues with unit slope.
template <typename Scalar>
class ZMap {
 public:
  ZMap(const InitialData<Scalar>& data, int resolution) : data_(data) {
    if (resolution < 2) throw ConfigError("z-map resolution must be at least 2");
    std::vector<Scalar> pts;
    const Scalar h = (data.x_max - data.x_min) / Scalar(resolution - 1);
    for (int i = 0; i < resolution; ++i) pts.push_back(data.x_min + h * Scalar(i));
    pts.back() = data.x_max;
    for (Scalar k : data.breaks)
      if (k > data.x_min && k < data.x_max) pts.push_back(k);
    if (data.x_min < 0 && data.x_max > 0) pts.push_back(Scalar(0));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    xs_ = pts;
    zs_.assign(xs_.size(), Scalar(0));
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      const Scalar piece = segment(xs_[i - 1], xs_[i]);
      if (!std::isfinite(piece)) throw DataError("u0_x not finite near x = " + std::to_string(static_cast<double>(xs_[i])));
      zs_[i] = zs_[i - 1] + piece;
    }
    // shift so that Z(0) = 0
    const Scalar z0 = raw_z(Scalar(0));
    for (Scalar& z : zs_) z -= z0;
  }

  Scalar z_of(Scalar x) const { return raw_z(x); }

  /// Slope dZ/dx = 1 + u0_x^2.
  Scalar slope(Scalar x) const { return data_.z_density(x); }

  Scalar x_of(Scalar z) const {
    if (z <= zs_.front()) return xs_.front() + (z - zs_.front());
    if (z >= zs_.back()) return xs_.back() + (z - zs_.back());
    auto it = std::upper_bound(zs_.begin(), zs_.end(), z);
    const std::size_t j = static_cast<std::size_t>(it - zs_.begin()) - 1;
    Scalar lo = xs_[j], hi = xs_[j + 1];
    // linear start, then Newton with bisection fallback
    Scalar x = lo + (hi - lo) * (z - zs_[j]) / (zs_[j + 1] - zs_[j]);
    for (int it_count = 0; it_count < 100; ++it_count) {
      const Scalar r = zs_[j] + segment(xs_[j], x) - z;
      if (r > 0) hi = x; else lo = x;
      if (std::abs(r) <= Scalar(1e-14) * (Scalar(1) + std::abs(z))) break;
      Scalar next = x - r / slope(x);
      if (!(next > lo && next < hi)) next = (lo + hi) / 2;
      if (std::abs(next - x) <= Scalar(1e-15) * (Scalar(1) + std::abs(x))) {
        x = next;
        break;
      }
      x = next;
    }
    return x;
  }

  Scalar z_lo() const { return zs_.front(); }
  Scalar z_hi() const { return zs_.back(); }

 private:
  Scalar segment(Scalar a, Scalar b) const {
    if (a == b) return Scalar(0);
    const Scalar sign = b > a ? Scalar(1) : Scalar(-1);
    const Scalar lo = std::min(a, b), hi = std::max(a, b);
    auto dens = [&](Scalar x) { return data_.z_density(x); };
    return sign * quad::piecewise<Scalar>(dens, lo, hi, data_.breaks, Scalar(0.05));
  }

  Scalar raw_z(Scalar x) const {
    if (x <= xs_.front()) return zs_.front() + (x - xs_.front());
    if (x >= xs_.back()) return zs_.back() + (x - xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return zs_[j] + segment(xs_[j], x);
  }

  InitialData<Scalar> data_;
  std::vector<Scalar> xs_, zs_;
};

template <typename Scalar>
ZMap<Scalar> build_z_map(const InitialData<Scalar>& data, int resolution = 8193) {
  return ZMap<Scalar>(data, resolution);
}

/// Uniform nodes Z_i = z_min + i dZ, i = 0..N-1.
template <typename Scalar>
struct LagrangianGrid {
  Eigen::Index N = 0;
  Scalar z_min = 0;
  Scalar dZ = 1;
  /// Cells [i, i+1] that contain a kink of the initial data. Labels are
  /// fixed, so the same cells hold the kinks for all T.
  std::vector<Eigen::Index> kink_cells;

  Scalar z(Eigen::Index i) const { return z_min + dZ * Scalar(i); }
  Scalar z_max() const { return z(N - 1); }
  Array<Scalar> nodes() const { return Array<Scalar>::LinSpaced(N, z_min, z_max()); }
};

/// Smallest uniform grid with N nodes covering [lo, hi]. When kinks are
/// given, the first one (and the last, by adjusting dZ) land exactly on cell
/// midpoints so no node sits on a jump of u0_x.
template <typename Scalar>
LagrangianGrid<Scalar> make_grid(Scalar lo, Scalar hi, Eigen::Index N, std::vector<Scalar> kink_z = {}) {
  if (N < 16) throw ConfigError("grid N must be at least 16 (got " + std::to_string(N) + ")");
  if (!(hi > lo)) throw ConfigError("grid window must satisfy lo < hi");
  LagrangianGrid<Scalar> g;
  g.N = N;
  std::sort(kink_z.begin(), kink_z.end());
  kink_z.erase(std::remove_if(kink_z.begin(), kink_z.end(), [&](Scalar k) { return !(k > lo && k < hi); }),
               kink_z.end());
  if (kink_z.empty()) {
    g.dZ = (hi - lo) / Scalar(N - 1);
    g.z_min = lo;
    return g;
  }
  Scalar dZ = (hi - lo) / Scalar(N - 2);
  if (kink_z.size() >= 2) {
    const Scalar span = kink_z.back() - kink_z.front();
    const auto m = static_cast<long>(std::floor(static_cast<double>(span / dZ)));
    if (m >= 1) dZ = span / Scalar(m);
  }
  const Scalar k0 = kink_z.front();
  const Scalar j = std::ceil((k0 - lo) / dZ - Scalar(0.5));
  g.dZ = dZ;
  g.z_min = k0 - (j + Scalar(0.5)) * dZ;
  if (g.z_max() < hi) {
    // spacing was widened by the two-kink fit; fall back to one aligned kink
    g.dZ = (hi - lo) / Scalar(N - 2);
    const Scalar j1 = std::ceil((k0 - lo) / g.dZ - Scalar(0.5));
    g.z_min = k0 - (j1 + Scalar(0.5)) * g.dZ;
  }
  for (Scalar k : kink_z) {
    const auto c = static_cast<Eigen::Index>(std::floor(static_cast<double>((k - g.z_min) / g.dZ)));
    if (c >= 0 && c + 1 < N && (g.kink_cells.empty() || g.kink_cells.back() != c)) g.kink_cells.push_back(c);
  }
  return g;
}

namespace detail {

/// max_i |(q_{i+1} - q_i)/dZ - (r_i + r_{i+1})/2|: the cell-centred
/// residual of q_Z = r. Kink cells are skipped: r jumps inside them and the
/// quotient is only first order there.
template <typename Scalar>
Scalar staggered_residual(const Array<Scalar>& q, const Array<Scalar>& r, const LagrangianGrid<Scalar>& g) {
  const Eigen::Index n = q.size();
  Array<Scalar> d = ((q.tail(n - 1) - q.head(n - 1)) / g.dZ - (r.head(n - 1) + r.tail(n - 1)) / 2).abs();
  for (Eigen::Index c : g.kink_cells)
    if (c < n - 1) d[c] = 0;
  return d.maxCoeff();
}

}  // namespace detail

/// Unknowns of the semi-linear system at time T, plus the characteristic
/// position x. All arrays have length grid.N.
template <typename Scalar>
struct LagrangianState {
  Scalar T = 0;
  LagrangianGrid<Scalar> grid;
  Array<Scalar> u, rho, w, v, x;

  Eigen::Index size() const { return u.size(); }

  static LagrangianState zeros(const LagrangianGrid<Scalar>& g) {
    LagrangianState s;
    s.grid = g;
    s.u = s.rho = s.w = Array<Scalar>::Zero(g.N);
    s.v = Array<Scalar>::Ones(g.N);
    s.x = g.nodes();
    return s;
  }
};

/// u(0,Z) = u0(x(Z)), rho(0,Z) = rho0(x(Z)), w(0,Z) = 2 atan u0_x(x(Z)),
/// v(0,Z) = 1. The characteristic positions are the trapezoid integral of
/// x_Z = cos^2(w/2) from x(Z_0), the same rule that builds xi, so the
/// discrete x_Z identity holds exactly at T = 0; they differ from x(Z) by
/// O(dZ^2).
template <typename Scalar>
LagrangianState<Scalar> init_state(const InitialData<Scalar>& data, const ZMap<Scalar>& zmap,
                                   const LagrangianGrid<Scalar>& grid) {
  const Scalar za = zmap.z_of(data.x_min), zb = zmap.z_of(data.x_max);
  const Scalar slack = Scalar(1e-9) * (Scalar(1) + std::abs(za) + std::abs(zb));
  if (grid.z_min > za + slack || grid.z_max() < zb - slack)
    throw ConfigError("Lagrangian grid [" + std::to_string(static_cast<double>(grid.z_min)) + ", " +
                      std::to_string(static_cast<double>(grid.z_max())) + "] does not cover Z(window) [" +
                      std::to_string(static_cast<double>(za)) + ", " + std::to_string(static_cast<double>(zb)) + "]");
  LagrangianState<Scalar> s;
  s.T = 0;
  s.grid = grid;
  s.u.resize(grid.N);
  s.rho.resize(grid.N);
  s.w.resize(grid.N);
  s.v = Array<Scalar>::Ones(grid.N);
  s.x.resize(grid.N);
  for (Eigen::Index i = 0; i < grid.N; ++i) {
    const Scalar xb = zmap.x_of(grid.z(i));
    s.x[i] = xb;
    s.u[i] = data.u(xb);
    s.rho[i] = data.rho(xb);
    s.w[i] = 2 * std::atan(data.ux(xb));
  }
  for (Eigen::Index i = 1; i < grid.N; ++i)
    s.x[i] = s.x[i - 1] + grid.dZ / 2 * (Scalar(2) + std::cos(s.w[i - 1]) + std::cos(s.w[i])) / 2;
  return s;
}

}  // namespace chlag
