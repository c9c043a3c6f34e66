#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/model.hpp"
#include "chlag/nonlocal.hpp"
#include "chlag/reconstruction.hpp"

namespace chlag {

/// E(T) = int (u^2 cos^2(w/2) + sin^2(w/2) + rho^2 cos^2(w/2)) v dZ, trapezoid.
template <typename Scalar>
Scalar energy_lagrangian(const LagrangianState<Scalar>& s) {
  Scalar acc = 0;
  const Eigen::Index n = s.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar c = std::cos(s.w[i]);
    const Scalar c2 = (Scalar(1) + c) / 2, s2 = (Scalar(1) - c) / 2;
    const Scalar e = (s.u[i] * s.u[i] * c2 + s2 + s.rho[i] * s.rho[i] * c2) * s.v[i];
    acc += (i == 0 || i == n - 1) ? e / 2 : e;
  }
  return acc * s.grid.dZ;
}

template <typename Scalar>
struct BreakingSet {
  Scalar measure = 0;
  std::vector<Eigen::Index> nodes;
};

/// Nodes where cos^2(w/2) < eps, with their total Z-measure.
template <typename Scalar>
BreakingSet<Scalar> breaking_detector(const LagrangianState<Scalar>& s, Scalar eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("breaking eps must lie in (0, 1)");
  BreakingSet<Scalar> b;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if ((Scalar(1) + std::cos(s.w[i])) / 2 < eps) b.nodes.push_back(i);
  b.measure = Scalar(b.nodes.size()) * s.grid.dZ;
  return b;
}

/// Staggered residual of u_Z = v sin(w) / 2 (max norm).
template <typename Scalar>
Scalar residual_uZ(const LagrangianState<Scalar>& s) {
  const Array<Scalar> rhs = s.v * s.w.sin() / 2;
  return detail::staggered_residual(s.u, rhs, s.grid);
}

template <typename Scalar>
Scalar residual_xZ(const LagrangianState<Scalar>& s) {
  return characteristics_consistency(s).residual_xZ;
}

/// Staggered residual of P_Z = v P_x cos^2(w/2).
template <typename Scalar>
Scalar residual_PZ(const LagrangianState<Scalar>& s, const NonlocalFields<Scalar>& f) {
  const Array<Scalar> rhs = s.v * f.Px * (Scalar(1) + s.w.cos()) / 2;
  return detail::staggered_residual(f.P, rhs, s.grid);
}

/// Right side of the P_x identity:
/// -((g(u) - P) cos^2 + f''(u)/2 sin^2 + rho^2/2 cos^2) v.
template <typename Scalar>
Array<Scalar> dz_Px_formula(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m, const Array<Scalar>& P) {
  Array<Scalar> out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const Scalar c = std::cos(s.w[i]);
    const Scalar c2 = (Scalar(1) + c) / 2, s2 = (Scalar(1) - c) / 2;
    out[i] = -((m.g(s.u[i]) - P[i]) * c2 + m.d2f(s.u[i]) / 2 * s2 + s.rho[i] * s.rho[i] / 2 * c2) * s.v[i];
  }
  return out;
}

/// Staggered residual of the P_x identity.
template <typename Scalar>
Scalar residual_PxZ(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m, const NonlocalFields<Scalar>& f) {
  return detail::staggered_residual(f.Px, dz_Px_formula(s, m, f.P), s.grid);
}

/// Eulerian P and P_x of the density h on a uniform x grid (translation
/// invariant kernel, same exponential-integrator scans).
template <typename Scalar>
void eulerian_P_Px(const Array<Scalar>& x, const Array<Scalar>& h, Array<Scalar>& P, Array<Scalar>& Px) {
  const Scalar dx = x[1] - x[0];
  const Array<Scalar> xi = x - x[0];
  detail::convolve_scan(xi, h, dx, P, Px);
}

/// Max-norm residual of the local energy balance
///   (e)_t + (f'(u) e)_x = (H(u) - 2 u P)_x,  e = u^2 + u_x^2 + rho^2,
/// on breaking-free frames sharing a uniform x grid and a uniform time
/// spacing. Centred differences in t and x, interior points only.
template <typename Scalar>
Scalar flux_balance_check(const std::vector<EulerianFrame<Scalar>>& frames, const FluxModel<Scalar>& m) {
  if (frames.size() < 3) throw PreconditionError("flux balance needs at least three frames");
  const Eigen::Index nx = frames.front().x.size();
  if (nx < 3) throw PreconditionError("flux balance needs at least three samples per frame");
  const Scalar dt = frames[1].t - frames[0].t;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& fr = frames[k];
    if (fr.x.size() != nx || (fr.x - frames.front().x).abs().maxCoeff() > Scalar(0))
      throw PreconditionError("frames must share one x grid");
    if (!fr.ux_valid.all() || !fr.rho_valid.all())
      throw PreconditionError("frame at t = " + std::to_string(static_cast<double>(fr.t)) +
                              " has invalid samples (breaking); flux balance applies before breaking only");
    if (k > 0 && std::abs((fr.t - frames[k - 1].t) - dt) > Scalar(1e-9) * (Scalar(1) + dt))
      throw PreconditionError("frames must be equally spaced in time");
  }
  const Array<Scalar>& x = frames.front().x;
  const Scalar dx = x[1] - x[0];
  Scalar worst = 0;
  for (std::size_t k = 1; k + 1 < frames.size(); ++k) {
    const auto& fr = frames[k];
    Array<Scalar> h(nx), P, Px;
    for (Eigen::Index i = 0; i < nx; ++i)
      h[i] = m.g(fr.u[i]) + m.d2f(fr.u[i]) / 2 * fr.ux[i] * fr.ux[i] + fr.rho[i] * fr.rho[i] / 2;
    eulerian_P_Px(x, h, P, Px);
    Array<Scalar> flux(nx), src(nx);
    for (Eigen::Index i = 0; i < nx; ++i) {
      flux[i] = m.df(fr.u[i]) * fr.energy_density[i];
      src[i] = m.H(fr.u[i]) - 2 * fr.u[i] * P[i];
    }
    for (Eigen::Index i = 1; i + 1 < nx; ++i) {
      const Scalar et = (frames[k + 1].energy_density[i] - frames[k - 1].energy_density[i]) / (2 * dt);
      const Scalar r = et + (flux[i + 1] - flux[i - 1]) / (2 * dx) - (src[i + 1] - src[i - 1]) / (2 * dx);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

template <typename Scalar>
struct FrechetResidual {
  Scalar Px = 0;    // P_x directional derivative
  Scalar dZPx = 0;  // d/dZ P_x directional derivative
};

/// Compares the finite difference (P_x(u + eps phi) - P_x(u)) / eps with the
/// linear operator
///   1/2 (int_Z^inf - int_-inf^Z) e^{-|xi(Z) - xi(Z')|}
///       (g'(u) cos^2(w/2) + f'''(u)/2 sin^2(w/2)) v phi dZ'
/// and likewise for d/dZ P_x = -h + v cos^2(w/2) P. The operator is
/// assembled with the same quadrature as P_x, so the residual is O(eps).
template <typename Scalar>
FrechetResidual<Scalar> frechet_check(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m,
                                      const Array<Scalar>& phi, Scalar eps) {
  if (phi.size() != s.size()) throw PreconditionError("direction must match the grid");
  if (!(eps > 0)) throw PreconditionError("eps must be positive");
  const NonlocalFields<Scalar> base = compute_P_Px(s, m);
  LagrangianState<Scalar> shifted = s;
  shifted.u = s.u + eps * phi;
  const NonlocalFields<Scalar> pert = compute_P_Px(shifted, m);

  Array<Scalar> dh(s.size()), vc2(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const Scalar c = std::cos(s.w[i]);
    const Scalar c2 = (Scalar(1) + c) / 2, s2 = (Scalar(1) - c) / 2;
    dh[i] = (m.dg(s.u[i]) * c2 + m.d3f(s.u[i]) / 2 * s2) * s.v[i] * phi[i];
    vc2[i] = s.v[i] * c2;
  }
  Array<Scalar> dP, dPx;
  detail::convolve_scan(base.xi, dh, s.grid.dZ, dP, dPx);
  const Array<Scalar> op_dz = -dh + vc2 * dP;

  const Array<Scalar> fd_px = (pert.Px - base.Px) / eps;
  const Array<Scalar> fd_dz = (dz_Px_formula(shifted, m, pert.P) - dz_Px_formula(s, m, base.P)) / eps;
  FrechetResidual<Scalar> r;
  r.Px = (fd_px - dPx).abs().maxCoeff();
  r.dZPx = (fd_dz - op_dz).abs().maxCoeff();
  return r;
}

/// Reference quantities taken from the initial state.
template <typename Scalar>
struct DiagnosticsContext {
  Scalar E0 = 0;
  Scalar w0_inf = 0;
  bool unit_curvature = false;
  Array<Scalar> rho_invariant0;  // rho v cos^2(w/2) at T = 0

  static DiagnosticsContext from_initial(const LagrangianState<Scalar>& s0, const FluxModel<Scalar>& m) {
    DiagnosticsContext c;
    c.E0 = energy_lagrangian(s0);
    c.w0_inf = s0.w.abs().maxCoeff();
    c.unit_curvature = m.unit_curvature();
    c.rho_invariant0 = rho_invariant(s0);
    return c;
  }

  static Array<Scalar> rho_invariant(const LagrangianState<Scalar>& s) {
    Array<Scalar> q(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) q[i] = s.rho[i] * s.v[i] * (Scalar(1) + std::cos(s.w[i])) / 2;
    return q;
  }
};

/// One row of the diagnostics table. Field order is the CSV column order.
template <typename Scalar>
struct DiagnosticsReport {
  Scalar T = 0;
  Scalar energy_lagrangian = 0;
  Scalar energy_drift_rel = 0;
  Scalar residual_uZ = 0;
  Scalar residual_xZ = 0;
  Scalar residual_PZ = 0;
  Scalar residual_PxZ = 0;
  Scalar sup_u_sq_ratio = 0;
  Scalar P_inf_ratio = 0;
  Scalar Px_inf_ratio = 0;
  Scalar v_min = 1;
  Scalar v_max = 1;
  Scalar breaking_measure = 0;
  Scalar rho_invariant_drift = 0;
  Scalar w_growth_rate = 0;

  static constexpr const char* csv_header =
      "T,energy_lagrangian,energy_drift_rel,residual_uZ,residual_xZ,residual_PZ,residual_PxZ,sup_u_sq_ratio,"
      "P_inf_ratio,Px_inf_ratio,v_min,v_max,breaking_measure,rho_invariant_drift,w_growth_rate";

  std::vector<Scalar> values() const {
    return {T,           energy_lagrangian, energy_drift_rel, residual_uZ,      residual_xZ,
            residual_PZ, residual_PxZ,      sup_u_sq_ratio,   P_inf_ratio,      Px_inf_ratio,
            v_min,       v_max,             breaking_measure, rho_invariant_drift, w_growth_rate};
  }
};

struct BoundsOptions {
  double sup_slack = 1e-6;
  double breaking_eps = 1e-4;
  bool hard_asserts = true;
};

/// Fills the report and enforces the hard bounds: sup u^2 <= E0 (1 + slack)
/// and v > 0. The P, P_x and w-growth constants are reported as ratios.
template <typename Scalar>
DiagnosticsReport<Scalar> bounds_report(const LagrangianState<Scalar>& s, const NonlocalFields<Scalar>& f,
                                        const FluxModel<Scalar>& m, const DiagnosticsContext<Scalar>& ctx,
                                        const BoundsOptions& opt = {}) {
  DiagnosticsReport<Scalar> r;
  r.T = s.T;
  r.energy_lagrangian = energy_lagrangian(s);
  const Scalar E0 = ctx.E0;
  auto ratio = [&](Scalar a) { return E0 > 0 ? a / E0 : Scalar(0); };
  r.energy_drift_rel = E0 > 0 ? std::abs(r.energy_lagrangian - E0) / E0 : std::abs(r.energy_lagrangian);
  r.residual_uZ = residual_uZ(s);
  r.residual_xZ = residual_xZ(s);
  r.residual_PZ = residual_PZ(s, f);
  r.residual_PxZ = residual_PxZ(s, m, f);
  const Scalar sup_u2 = s.u.square().maxCoeff();
  r.sup_u_sq_ratio = ratio(sup_u2);
  r.P_inf_ratio = ratio(f.P.abs().maxCoeff());
  r.Px_inf_ratio = ratio(f.Px.abs().maxCoeff());
  r.v_min = s.v.minCoeff();
  r.v_max = s.v.maxCoeff();
  r.breaking_measure = breaking_detector(s, Scalar(opt.breaking_eps)).measure;
  if (ctx.unit_curvature && ctx.rho_invariant0.size() == s.size())
    r.rho_invariant_drift = (DiagnosticsContext<Scalar>::rho_invariant(s) - ctx.rho_invariant0).abs().maxCoeff();
  r.w_growth_rate = s.T > 0 ? std::max(Scalar(0), s.w.abs().maxCoeff() - ctx.w0_inf) / s.T : Scalar(0);

  if (opt.hard_asserts) {
    if (sup_u2 > E0 * (Scalar(1) + Scalar(opt.sup_slack)) + Scalar(1e-300))
      throw DiagnosticError("sup u^2 = " + std::to_string(static_cast<double>(sup_u2)) + " exceeds E(0) = " +
                            std::to_string(static_cast<double>(E0)) + " at T = " + std::to_string(static_cast<double>(s.T)));
    if (!(r.v_min > 0))
      throw DiagnosticError("v positivity violated (v_min = " + std::to_string(static_cast<double>(r.v_min)) +
                            ") at T = " + std::to_string(static_cast<double>(s.T)));
  }
  return r;
}

}  // namespace chlag
