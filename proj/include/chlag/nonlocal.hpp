#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "chlag/errors.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/model.hpp"

namespace chlag {

/// Cumulative measure xi and the nonlocal sources P, P_x on the Z grid.
template <typename Scalar>
struct NonlocalFields {
  Array<Scalar> xi, P, Px;
};

/// Half-angle factors of w, evaluated once per node.
template <typename Scalar>
struct HalfAngle {
  Array<Scalar> cos2;  // cos^2(w/2)
  Array<Scalar> sin2;  // sin^2(w/2)
  Array<Scalar> sinw;  // sin w

  explicit HalfAngle(const Array<Scalar>& w) : cos2(w.size()), sin2(w.size()), sinw(w.size()) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const Scalar c = std::cos(w[i]);
      cos2[i] = (Scalar(1) + c) / 2;
      sin2[i] = (Scalar(1) - c) / 2;
      sinw[i] = std::sin(w[i]);
    }
  }
};

/// xi(Z) = int_{Z_min}^Z v cos^2(w/2), trapezoid accumulation.
template <typename Scalar>
Array<Scalar> cumulative_measure(const LagrangianState<Scalar>& s) {
  const HalfAngle<Scalar> ha(s.w);
  const Array<Scalar> density = s.v * ha.cos2;
  Array<Scalar> xi(s.size());
  xi[0] = 0;
  const Scalar half = s.grid.dZ / 2;
  for (Eigen::Index i = 1; i < s.size(); ++i) xi[i] = xi[i - 1] + half * (density[i - 1] + density[i]);
  return xi;
}

/// h = (g(u) cos^2(w/2) + f''(u)/2 sin^2(w/2) + rho^2/2 cos^2(w/2)) v.
template <typename Scalar>
Array<Scalar> source_density(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m) {
  Array<Scalar> h(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const Scalar c = std::cos(s.w[i]);
    const Scalar c2 = (Scalar(1) + c) / 2, s2 = (Scalar(1) - c) / 2;
    const Scalar r = s.rho[i];
    h[i] = (m.g(s.u[i]) * c2 + m.d2f(s.u[i]) / 2 * s2 + r * r / 2 * c2) * s.v[i];
  }
  return h;
}

namespace detail {

/// E1(a) = int_0^1 e^{-a t} dt and E2(a) = int_0^1 t e^{-a t} dt, a >= 0.
/// Series below a = 0.25 avoids the cancellation in the closed forms.
template <typename Scalar>
inline void exp_moments(Scalar a, Scalar& e1, Scalar& e2) {
  if (a < Scalar(0.25)) {
    // sum_n (-a)^n / n! / (n + k)
    Scalar term = 1;
    e1 = 0;
    e2 = 0;
    for (int n = 0; n < 16; ++n) {
      e1 += term / Scalar(n + 1);
      e2 += term / Scalar(n + 2);
      term *= -a / Scalar(n + 1);
    }
    return;
  }
  const Scalar em = std::exp(-a);
  e1 = -std::expm1(-a) / a;
  e2 = (e1 - em) / a;
}

}  // namespace detail

/// Per-cell weights of the exponential integrator. With h and xi linear on
/// a cell of increment a = xi_{i+1} - xi_i, integrating e^{-|xi_end - xi|} h
/// toward either end gives dZ (E2(a) h_far + (E1(a) - E2(a)) h_near).
template <typename Scalar>
struct CellWeights {
  Array<Scalar> decay;  // e^{-a}
  Array<Scalar> far;    // weight of the node away from the accumulation end
  Array<Scalar> near;   // weight of the node at the accumulation end

  CellWeights(const Array<Scalar>& xi, Scalar dZ) {
    const Eigen::Index cells = xi.size() - 1;
    decay.resize(cells);
    far.resize(cells);
    near.resize(cells);
    for (Eigen::Index i = 0; i < cells; ++i) {
      const Scalar a = std::max(Scalar(0), xi[i + 1] - xi[i]);
      Scalar e1, e2;
      detail::exp_moments(a, e1, e2);
      decay[i] = std::exp(-a);
      far[i] = dZ * e2;
      near[i] = dZ * (e1 - e2);
    }
  }
};

namespace detail {

template <typename Scalar>
void check_finite(const Array<Scalar>& h, const char* what) {
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!std::isfinite(h[i]))
      throw NumericError(std::string(what) + " is not finite at node " + std::to_string(i));
}

/// P = (A + B)/2 and P_x = (B - A)/2 with A the left and B the right
/// convolution, both by linear scans.
template <typename Scalar>
void convolve_scan(const Array<Scalar>& xi, const Array<Scalar>& h, Scalar dZ, Array<Scalar>& P, Array<Scalar>& Px) {
  const Eigen::Index n = h.size();
  const CellWeights<Scalar> cw(xi, dZ);
  Array<Scalar> A(n), B(n);
  A[0] = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) A[i + 1] = cw.decay[i] * A[i] + cw.far[i] * h[i] + cw.near[i] * h[i + 1];
  B[n - 1] = 0;
  for (Eigen::Index i = n - 2; i >= 0; --i) B[i] = cw.decay[i] * B[i + 1] + cw.far[i] * h[i + 1] + cw.near[i] * h[i];
  P = (A + B) / 2;
  Px = (B - A) / 2;
}

}  // namespace detail

/// Nonlocal sources in O(N). The source is taken to vanish outside the grid.
template <typename Scalar>
NonlocalFields<Scalar> compute_P_Px(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m) {
  NonlocalFields<Scalar> out;
  const Array<Scalar> h = source_density(s, m);
  detail::check_finite(h, "source density");
  out.xi = cumulative_measure(s);
  detail::convolve_scan(out.xi, h, s.grid.dZ, out.P, out.Px);
  return out;
}

/// Same quadrature as the scans, evaluated as an explicit double sum with
/// each kernel factor taken directly from xi differences. O(N^2).
template <typename Scalar>
void convolve_direct(const Array<Scalar>& xi, const Array<Scalar>& h, Scalar dZ, Array<Scalar>& P, Array<Scalar>& Px) {
  const Eigen::Index n = h.size();
  const CellWeights<Scalar> cw(xi, dZ);
  P.resize(n);
  Px.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar left = 0, right = 0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      if (j < i) {
        // cell [j, j+1] to the left of node i
        left += std::exp(-(xi[i] - xi[j + 1])) * (cw.far[j] * h[j] + cw.near[j] * h[j + 1]);
      } else {
        right += std::exp(-(xi[j] - xi[i])) * (cw.far[j] * h[j + 1] + cw.near[j] * h[j]);
      }
    }
    P[i] = (left + right) / 2;
    Px[i] = (right - left) / 2;
  }
}

template <typename Scalar>
NonlocalFields<Scalar> compute_P_Px_direct(const LagrangianState<Scalar>& s, const FluxModel<Scalar>& m) {
  NonlocalFields<Scalar> out;
  const Array<Scalar> h = source_density(s, m);
  detail::check_finite(h, "source density");
  out.xi = cumulative_measure(s);
  convolve_direct(out.xi, h, s.grid.dZ, out.P, out.Px);
  return out;
}

/// Distance in Z beyond which the decay bound
/// min{1, exp(E0 - v_minus |eta| / 2)} drops below tol.
template <typename Scalar>
Scalar truncation_padding(Scalar E0, Scalar v_minus, Scalar tol) {
  if (!(v_minus > 0)) throw ConfigError("truncation padding needs v_minus > 0");
  if (!(tol > 0)) throw ConfigError("truncation padding needs tol > 0");
  if (tol >= 1) return 2 * E0 / v_minus;
  return 2 * (E0 + std::log(Scalar(1) / tol)) / v_minus;
}

}  // namespace chlag
