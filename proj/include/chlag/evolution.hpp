#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/model.hpp"
#include "chlag/nonlocal.hpp"

namespace chlag {

template <typename Scalar>
struct Numerics {
  /// |tan(w/2)| in the rho equation is clamped to this value.
  Scalar tan_clamp = Scalar(1e8);
  /// A step is split in halves while some node has |cos(w/2)| below this
  /// threshold and nonzero rho.
  Scalar substep_cos_threshold = Scalar(1e-4);
  int max_substep_depth = 4;
};

/// Time derivatives of (u, rho, w, v, x).
template <typename Scalar>
struct TimeDerivative {
  Array<Scalar> dU, dRho, dW, dV, dX;
};

namespace detail {

template <typename Scalar>
void require_finite(const Array<Scalar>& a, const char* field, Scalar T) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i]))
      throw NumericError(std::string("non-finite ") + field + " at node " + std::to_string(i) +
                         " (T = " + std::to_string(static_cast<double>(T)) + ")");
}

}  // namespace detail

/// Right side of the semi-linear system plus dx/dT = f'(u).
template <typename Scalar>
TimeDerivative<Scalar> rhs(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m,
                           const Numerics<Scalar>& num = {}, NonlocalFields<Scalar>* fields_out = nullptr) {
  const Eigen::Index n = s.size();
  const HalfAngle<Scalar> ha(s.w);

  Array<Scalar> h(n), gu(n), f2u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gu[i] = m.g(s.u[i]);
    f2u[i] = m.d2f(s.u[i]);
    const Scalar r2 = s.rho[i] * s.rho[i];
    h[i] = (gu[i] * ha.cos2[i] + f2u[i] / 2 * ha.sin2[i] + r2 / 2 * ha.cos2[i]) * s.v[i];
  }
  detail::check_finite(h, "source density");

  NonlocalFields<Scalar> nf;
  const Array<Scalar> density = s.v * ha.cos2;
  nf.xi.resize(n);
  nf.xi[0] = 0;
  for (Eigen::Index i = 1; i < n; ++i) nf.xi[i] = nf.xi[i - 1] + s.grid.dZ / 2 * (density[i - 1] + density[i]);
  detail::convolve_scan(nf.xi, h, s.grid.dZ, nf.P, nf.Px);

  TimeDerivative<Scalar> d;
  d.dU = -nf.Px;
  d.dRho.resize(n);
  d.dW.resize(n);
  d.dV.resize(n);
  d.dX.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar r = s.rho[i];
    const Scalar base = gu[i] - nf.P[i] + r * r / 2;
    if (r != Scalar(0)) {
      const Scalar t = std::clamp(std::tan(s.w[i] / 2), -num.tan_clamp, num.tan_clamp);
      d.dRho[i] = -(Scalar(0.5) + f2u[i] / 2) * r * t;
    } else {
      d.dRho[i] = 0;
    }
    d.dW[i] = 2 * base * ha.cos2[i] - f2u[i] * ha.sin2[i];
    d.dV[i] = (base + f2u[i] / 2) * s.v[i] * ha.sinw[i];
    d.dX[i] = m.df(s.u[i]);
  }
  detail::require_finite(d.dU, "dU", s.T);
  detail::require_finite(d.dRho, "dRho", s.T);
  detail::require_finite(d.dW, "dW", s.T);
  detail::require_finite(d.dV, "dV", s.T);
  detail::require_finite(d.dX, "dX", s.T);
  if (fields_out) *fields_out = std::move(nf);
  return d;
}

namespace detail {

template <typename Scalar>
LagrangianState<Scalar> advance(const LagrangianState<Scalar>& s, Scalar dt, const TimeDerivative<Scalar>& d) {
  LagrangianState<Scalar> out;
  out.T = s.T + dt;
  out.grid = s.grid;
  out.u = s.u + dt * d.dU;
  out.rho = s.rho + dt * d.dRho;
  out.w = s.w + dt * d.dW;
  out.v = s.v + dt * d.dV;
  out.x = s.x + dt * d.dX;
  return out;
}

template <typename Scalar>
bool needs_substep(const LagrangianState<Scalar>& s, const Numerics<Scalar>& num) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s.rho[i] != Scalar(0) && std::abs(std::cos(s.w[i] / 2)) < num.substep_cos_threshold) return true;
  return false;
}

template <typename Scalar>
LagrangianState<Scalar> rk4_once(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m, Scalar dt,
                                 const Numerics<Scalar>& num) {
  const TimeDerivative<Scalar> k1 = rhs(s, m, num);
  const TimeDerivative<Scalar> k2 = rhs(advance(s, dt / 2, k1), m, num);
  const TimeDerivative<Scalar> k3 = rhs(advance(s, dt / 2, k2), m, num);
  const TimeDerivative<Scalar> k4 = rhs(advance(s, dt, k3), m, num);
  LagrangianState<Scalar> out;
  out.T = s.T + dt;
  out.grid = s.grid;
  const Scalar c = dt / 6;
  out.u = s.u + c * (k1.dU + 2 * k2.dU + 2 * k3.dU + k4.dU);
  out.rho = s.rho + c * (k1.dRho + 2 * k2.dRho + 2 * k3.dRho + k4.dRho);
  out.w = s.w + c * (k1.dW + 2 * k2.dW + 2 * k3.dW + k4.dW);
  out.v = s.v + c * (k1.dV + 2 * k2.dV + 2 * k3.dV + k4.dV);
  out.x = s.x + c * (k1.dX + 2 * k2.dX + 2 * k3.dX + k4.dX);
  return out;
}

template <typename Scalar>
LagrangianState<Scalar> step_recursive(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m, Scalar dt,
                                       const Numerics<Scalar>& num, int depth) {
  if (depth < num.max_substep_depth && needs_substep(s, num)) {
    const LagrangianState<Scalar> half = step_recursive(s, m, dt / 2, num, depth + 1);
    return step_recursive(half, m, dt / 2, num, depth + 1);
  }
  return rk4_once(s, m, dt, num);
}

}  // namespace detail

/// One classical RK4 step of size dt (split near breaking when rho != 0).
/// w is left unwrapped.
template <typename Scalar>
LagrangianState<Scalar> step_rk4(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m, Scalar dt,
                                 const Numerics<Scalar>& num = {}) {
  if (!(dt > 0)) throw PreconditionError("time step must be positive");
  LagrangianState<Scalar> out = detail::step_recursive(s, m, dt, num, 0);
  detail::require_finite(out.u, "u", out.T);
  detail::require_finite(out.rho, "rho", out.T);
  detail::require_finite(out.w, "w", out.T);
  detail::require_finite(out.v, "v", out.T);
  detail::require_finite(out.x, "x", out.T);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (!(out.v[i] > 0))
      throw IntegrationError("v <= 0 at node " + std::to_string(i) + " after step to T = " +
                             std::to_string(static_cast<double>(out.T)) + "; reduce dt");
  return out;
}

template <typename Scalar>
using StateCallback = std::function<void(const LagrangianState<Scalar>&)>;

/// Integrates to t_end with steps of at most dt, landing exactly on each
/// output time. The callback sees every output state; states are also
/// returned unless keep_states is false.
template <typename Scalar>
std::vector<LagrangianState<Scalar>> integrate(LagrangianState<Scalar> s, const FluxModel<Scalar>& m, Scalar t_end,
                                               Scalar dt, std::vector<Scalar> output_times,
                                               const StateCallback<Scalar>& callback = {},
                                               const Numerics<Scalar>& num = {}, bool keep_states = true) {
  std::vector<LagrangianState<Scalar>> out;
  if (t_end < 0) throw PreconditionError("t_end must be non-negative");
  if (!std::is_sorted(output_times.begin(), output_times.end()))
    throw PreconditionError("output times must be sorted");
  auto emit = [&](const LagrangianState<Scalar>& st) {
    if (callback) callback(st);
    if (keep_states) out.push_back(st);
  };
  if (t_end == 0) {
    emit(s);
    return out;
  }
  if (!(dt > 0) || dt > t_end) throw PreconditionError("need 0 < dt <= t_end");
  for (Scalar target : output_times) {
    if (target < s.T - Scalar(1e-12) || target > t_end + Scalar(1e-12))
      throw PreconditionError("output time " + std::to_string(static_cast<double>(target)) + " outside [T0, t_end]");
    while (target - s.T > Scalar(1e-12) * dt) {
      Scalar h = std::min(dt, target - s.T);
      // avoid a sliver step just before the target
      if (target - s.T - h < Scalar(1e-9) * dt) h = target - s.T;
      s = step_rk4(s, m, h, num);
    }
    s.T = target;
    emit(s);
  }
  return out;
}

/// Output times 0, every, 2 every, ..., t_end (t_end always included).
template <typename Scalar>
std::vector<Scalar> output_schedule(Scalar t_end, Scalar every) {
  std::vector<Scalar> t{Scalar(0)};
  if (t_end <= 0) return t;
  if (!(every > 0)) every = t_end;
  const auto n = static_cast<long>(std::floor(static_cast<double>(t_end / every) + 1e-9));
  for (long k = 1; k <= n; ++k) t.push_back(std::min(t_end, every * Scalar(k)));
  if (t_end - t.back() > Scalar(1e-12) * t_end) t.push_back(t_end);
  else t.back() = t_end;
  return t;
}

}  // namespace chlag
