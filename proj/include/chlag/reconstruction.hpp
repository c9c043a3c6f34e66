#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/lagrangian.hpp"

namespace chlag {

/// Eulerian profiles at time t on an x grid. ux and rho carry validity
/// flags; they are undefined where characteristics have collapsed.
template <typename Scalar>
struct EulerianFrame {
  Scalar t = 0;
  Array<Scalar> x, u, ux, rho, energy_density;
  Eigen::Array<bool, Eigen::Dynamic, 1> ux_valid, rho_valid;
};

struct ReconstructionOptions {
  /// Cells with x increment below eps_plateau * dZ are plateaus.
  double eps_plateau = 1e-8;
  /// ux and rho are flagged invalid where |cos(w/2)| <= eps_slope at a
  /// bracketing node.
  double eps_slope = 1e-2;
  /// x decreasing by more than eps_monotone * dZ between neighbours is a
  /// corrupted state. Smaller decreases occur where cells collapse at a
  /// breaking instant and are read as plateaus.
  double eps_monotone = 1e-3;
};

namespace detail {

template <typename Scalar>
void check_monotone(const LagrangianState<Scalar>& s, Scalar eps_monotone) {
  const Scalar tol = eps_monotone * s.grid.dZ;
  for (Eigen::Index i = 0; i + 1 < s.size(); ++i)
    if (s.x[i + 1] - s.x[i] < -tol)
      throw StateError("characteristic positions decrease between nodes " + std::to_string(i) + " and " +
                       std::to_string(i + 1));
}

/// Index i with x[i] <= q <= x[i+1]; the last such bracket for repeated x.
template <typename Scalar>
Eigen::Index bracket(const Array<Scalar>& x, Scalar q) {
  const Scalar* begin = x.data();
  const Scalar* end = x.data() + x.size();
  const Scalar* it = std::upper_bound(begin, end, q);
  Eigen::Index j = static_cast<Eigen::Index>(it - begin) - 1;
  return std::clamp<Eigen::Index>(j, 0, x.size() - 2);
}

template <typename Scalar>
void check_query_range(const LagrangianState<Scalar>& s, const Array<Scalar>& xq) {
  const Scalar slack = Scalar(1e-12) * (Scalar(1) + std::abs(s.x[0]) + std::abs(s.x[s.size() - 1]));
  for (Eigen::Index k = 0; k < xq.size(); ++k)
    if (xq[k] < s.x[0] - slack || xq[k] > s.x[s.size() - 1] + slack)
      throw PreconditionError("query x = " + std::to_string(static_cast<double>(xq[k])) +
                              " lies outside the characteristic range");
}

}  // namespace detail

/// u(t, x) from the characteristics: linear in x between neighbouring
/// characteristics, the common value on a plateau.
template <typename Scalar>
Array<Scalar> sample_u(const LagrangianState<Scalar>& s, const Array<Scalar>& xq,
                       const ReconstructionOptions& opt = {}) {
  detail::check_monotone(s, Scalar(opt.eps_monotone));
  detail::check_query_range(s, xq);
  const Scalar plateau = Scalar(opt.eps_plateau) * s.grid.dZ;
  Array<Scalar> u(xq.size());
  for (Eigen::Index k = 0; k < xq.size(); ++k) {
    const Eigen::Index i = detail::bracket(s.x, xq[k]);
    const Scalar dx = s.x[i + 1] - s.x[i];
    if (dx <= plateau) {
      u[k] = s.u[i];
    } else {
      const Scalar t = std::clamp((xq[k] - s.x[i]) / dx, Scalar(0), Scalar(1));
      u[k] = s.u[i] + t * (s.u[i + 1] - s.u[i]);
    }
  }
  return u;
}

/// Full frame: u, ux = tan(w/2), rho and the energy density.
template <typename Scalar>
EulerianFrame<Scalar> reconstruct(const LagrangianState<Scalar>& s, const Array<Scalar>& xq,
                                  const ReconstructionOptions& opt = {}) {
  EulerianFrame<Scalar> fr;
  fr.t = s.T;
  fr.x = xq;
  fr.u = sample_u(s, xq, opt);
  const Eigen::Index m = xq.size();
  fr.ux.resize(m);
  fr.rho.resize(m);
  fr.energy_density.resize(m);
  fr.ux_valid.resize(m);
  fr.rho_valid.resize(m);
  const Scalar plateau = Scalar(opt.eps_plateau) * s.grid.dZ;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index i = detail::bracket(s.x, xq[k]);
    const Scalar ci = std::abs(std::cos(s.w[i] / 2)), cj = std::abs(std::cos(s.w[i + 1] / 2));
    const Scalar dx = s.x[i + 1] - s.x[i];
    const bool valid = ci > Scalar(opt.eps_slope) && cj > Scalar(opt.eps_slope) && dx > plateau;
    fr.ux_valid[k] = fr.rho_valid[k] = valid;
    if (valid) {
      const Scalar t = std::clamp((xq[k] - s.x[i]) / dx, Scalar(0), Scalar(1));
      const Scalar a = std::tan(s.w[i] / 2), b = std::tan(s.w[i + 1] / 2);
      fr.ux[k] = a + t * (b - a);
      fr.rho[k] = s.rho[i] + t * (s.rho[i + 1] - s.rho[i]);
      fr.energy_density[k] = fr.u[k] * fr.u[k] + fr.ux[k] * fr.ux[k] + fr.rho[k] * fr.rho[k];
    } else {
      fr.ux[k] = 0;
      fr.rho[k] = 0;
      fr.energy_density[k] = 0;
    }
  }
  return fr;
}

/// Slope and density components of the frame (same as reconstruct).
template <typename Scalar>
EulerianFrame<Scalar> sample_ux_rho(const LagrangianState<Scalar>& s, const Array<Scalar>& xq,
                                    const ReconstructionOptions& opt = {}) {
  return reconstruct(s, xq, opt);
}

template <typename Scalar>
struct EulerianEnergy {
  Scalar energy = 0;
  Scalar invalid_fraction = 0;
};

/// Trapezoid quadrature of the energy density over consecutive valid
/// samples (the absolutely continuous part of the energy).
template <typename Scalar>
EulerianEnergy<Scalar> eulerian_energy(const EulerianFrame<Scalar>& fr) {
  EulerianEnergy<Scalar> out;
  const Eigen::Index m = fr.x.size();
  if (m == 0) return out;
  Eigen::Index invalid = 0;
  for (Eigen::Index k = 0; k < m; ++k)
    if (!fr.ux_valid[k]) ++invalid;
  for (Eigen::Index k = 0; k + 1 < m; ++k)
    if (fr.ux_valid[k] && fr.ux_valid[k + 1])
      out.energy += (fr.x[k + 1] - fr.x[k]) * (fr.energy_density[k] + fr.energy_density[k + 1]) / 2;
  out.invalid_fraction = Scalar(invalid) / Scalar(m);
  return out;
}

template <typename Scalar>
struct CharacteristicsReport {
  Scalar residual_xZ = 0;
  Eigen::Index monotonicity_violations = 0;
};

/// Staggered check of x_Z = v cos^2(w/2) (see detail::staggered_residual).
template <typename Scalar>
CharacteristicsReport<Scalar> characteristics_consistency(const LagrangianState<Scalar>& s) {
  CharacteristicsReport<Scalar> r;
  Array<Scalar> rhs(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) rhs[i] = s.v[i] * (Scalar(1) + std::cos(s.w[i])) / 2;
  r.residual_xZ = detail::staggered_residual(s.x, rhs, s.grid);
  for (Eigen::Index i = 0; i + 1 < s.size(); ++i)
    if (s.x[i + 1] < s.x[i]) ++r.monotonicity_violations;
  return r;
}

/// max |u(x1) - u(x2)| / |x1 - x2|^{1/2} over all sample pairs.
template <typename Scalar>
Scalar holder_half_quotient(const Array<Scalar>& x, const Array<Scalar>& u) {
  Scalar q = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = i + 1; j < x.size(); ++j) {
      const Scalar d = std::abs(x[j] - x[i]);
      if (d > 0) q = std::max(q, std::abs(u[j] - u[i]) / std::sqrt(d));
    }
  return q;
}

/// Discrete L2 distance of two sampled profiles on a common grid.
template <typename Scalar>
Scalar l2_distance(const Array<Scalar>& x, const Array<Scalar>& a, const Array<Scalar>& b) {
  Scalar acc = 0;
  for (Eigen::Index k = 0; k + 1 < x.size(); ++k) {
    const Scalar d0 = a[k] - b[k], d1 = a[k + 1] - b[k + 1];
    acc += (x[k + 1] - x[k]) * (d0 * d0 + d1 * d1) / 2;
  }
  return std::sqrt(acc);
}

}  // namespace chlag
