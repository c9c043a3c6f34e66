#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/model.hpp"
#include "chlag/nonlocal.hpp"

namespace chlag {

/// Eulerian unknowns on the uniform grid x_j = x0 + j dx. Values outside
/// the grid are taken to be zero.
template <typename Scalar>
struct EulerianState {
  Scalar t = 0;
  Scalar x0 = 0;
  Scalar dx = 1;
  Array<Scalar> u, rho;

  Eigen::Index size() const { return u.size(); }
  Array<Scalar> x() const { return Array<Scalar>::LinSpaced(size(), x0, x0 + dx * Scalar(size() - 1)); }
};

template <typename Scalar>
struct EulerianDerivative {
  Array<Scalar> du, drho;
  Array<Scalar> P, Px;
};

namespace detail {

/// Centred first derivative with zero ghost values.
template <typename Scalar>
Array<Scalar> centred_diff(const Array<Scalar>& a, Scalar dx) {
  const Eigen::Index n = a.size();
  Array<Scalar> d(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar l = j > 0 ? a[j - 1] : Scalar(0);
    const Scalar r = j + 1 < n ? a[j + 1] : Scalar(0);
    d[j] = (r - l) / (2 * dx);
  }
  return d;
}

template <typename Scalar>
Array<Scalar> oracle_source(const EulerianState<Scalar>& s, const FluxModel<Scalar>& m, const Array<Scalar>& ux) {
  Array<Scalar> h(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j)
    h[j] = m.g(s.u[j]) + m.d2f(s.u[j]) / 2 * ux[j] * ux[j] + s.rho[j] * s.rho[j] / 2;
  return h;
}

}  // namespace detail

/// u_t = -f'(u) u_x - P_x,  rho_t = -f'(u) rho_x - (1/2 + f''(u)/2) rho u_x,
/// with P = 1/2 e^{-|x|} * (g(u) + f''(u)/2 u_x^2 + rho^2/2).
template <typename Scalar>
EulerianDerivative<Scalar> oracle_rhs(const EulerianState<Scalar>& s, const FluxModel<Scalar>& m) {
  const Eigen::Index n = s.size();
  const Array<Scalar> ux = detail::centred_diff(s.u, s.dx);
  const Array<Scalar> rx = detail::centred_diff(s.rho, s.dx);
  const Array<Scalar> h = detail::oracle_source(s, m, ux);
  detail::check_finite(h, "oracle source");
  EulerianDerivative<Scalar> d;
  const Array<Scalar> xi = Array<Scalar>::LinSpaced(n, Scalar(0), s.dx * Scalar(n - 1));
  detail::convolve_scan(xi, h, s.dx, d.P, d.Px);
  d.du.resize(n);
  d.drho.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar a = m.df(s.u[j]);
    d.du[j] = -a * ux[j] - d.Px[j];
    d.drho[j] = -a * rx[j] - (Scalar(0.5) + m.d2f(s.u[j]) / 2) * s.rho[j] * ux[j];
    if (!std::isfinite(d.du[j]) || !std::isfinite(d.drho[j]))
      throw NumericError("oracle derivative not finite at x = " +
                         std::to_string(static_cast<double>(s.x0 + s.dx * Scalar(j))));
  }
  return d;
}

/// P and P_x of the oracle source by trapezoid double sum, O(N^2).
template <typename Scalar>
void oracle_P_direct(const EulerianState<Scalar>& s, const FluxModel<Scalar>& m, Array<Scalar>& P,
                     Array<Scalar>& Px) {
  const Eigen::Index n = s.size();
  const Array<Scalar> ux = detail::centred_diff(s.u, s.dx);
  const Array<Scalar> h = detail::oracle_source(s, m, ux);
  const Array<Scalar> xi = Array<Scalar>::LinSpaced(n, Scalar(0), s.dx * Scalar(n - 1));
  convolve_direct(xi, h, s.dx, P, Px);
}

struct OracleOptions {
  double blowup_guard = 1e3;
};

/// RK4 integration up to t_end, returning states at the requested output
/// times. Throws BlowupError once max |u_x| exceeds the guard.
template <typename Scalar>
std::vector<EulerianState<Scalar>> oracle_integrate(EulerianState<Scalar> s, const FluxModel<Scalar>& m, Scalar t_end,
                                                    Scalar dt, const std::vector<Scalar>& output_times,
                                                    const OracleOptions& opt = {}) {
  std::vector<EulerianState<Scalar>> out;
  if (t_end < 0) throw PreconditionError("t_end must be non-negative");
  if (t_end == 0) {
    out.push_back(s);
    return out;
  }
  if (!(dt > 0)) throw PreconditionError("oracle time step must be positive");
  auto guard = [&](const EulerianState<Scalar>& st) {
    const Scalar slope = detail::centred_diff(st.u, st.dx).abs().maxCoeff();
    if (!(slope <= Scalar(opt.blowup_guard)))
      throw BlowupError("oracle: max |u_x| = " + std::to_string(static_cast<double>(slope)) + " exceeds guard " +
                            std::to_string(opt.blowup_guard) + " at t = " + std::to_string(static_cast<double>(st.t)) +
                            "; the Eulerian oracle cannot continue past wave breaking",
                        static_cast<double>(st.t));
  };
  auto shifted = [](const EulerianState<Scalar>& b, Scalar h, const EulerianDerivative<Scalar>& k) {
    EulerianState<Scalar> r = b;
    r.u = b.u + h * k.du;
    r.rho = b.rho + h * k.drho;
    r.t = b.t + h;
    return r;
  };
  for (Scalar target : output_times) {
    if (target < s.t - Scalar(1e-12) || target > t_end + Scalar(1e-12))
      throw PreconditionError("output time outside [t0, t_end]");
    while (target - s.t > Scalar(1e-12) * dt) {
      Scalar h = std::min(dt, target - s.t);
      if (target - s.t - h < Scalar(1e-9) * dt) h = target - s.t;
      const auto k1 = oracle_rhs(s, m);
      const auto k2 = oracle_rhs(shifted(s, h / 2, k1), m);
      const auto k3 = oracle_rhs(shifted(s, h / 2, k2), m);
      const auto k4 = oracle_rhs(shifted(s, h, k3), m);
      s.u += h / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
      s.rho += h / 6 * (k1.drho + 2 * k2.drho + 2 * k3.drho + k4.drho);
      s.t += h;
      guard(s);
    }
    s.t = target;
    out.push_back(s);
  }
  return out;
}

/// Eulerian energy int (u^2 + u_x^2 + rho^2) dx with centred slopes.
template <typename Scalar>
Scalar oracle_energy(const EulerianState<Scalar>& s) {
  const Array<Scalar> ux = detail::centred_diff(s.u, s.dx);
  return (s.u.square() + ux.square() + s.rho.square()).sum() * s.dx;
}

}  // namespace chlag
