#pragma once

#include <cmath>
#include <vector>

#include "chlag/chlag.hpp"

namespace testing {

using chlag::Array;
using State = chlag::LagrangianState<double>;

inline chlag::LagrangianGrid<double> plain_grid(long N, double lo = -10.0, double hi = 10.0) {
  return chlag::make_grid<double>(lo, hi, N);
}

/// Scenario state built exactly as the CLI does, without padding.
inline State state_from(const chlag::InitialData<double>& d, long N, double pad = 0.0) {
  const auto zm = chlag::build_z_map(d);
  std::vector<double> kz;
  for (double k : d.kinks) kz.push_back(zm.z_of(k));
  const auto g = chlag::make_grid(zm.z_of(d.x_min) - pad, zm.z_of(d.x_max) + pad, N, kz);
  return chlag::init_state(d, zm, g);
}

/// Smooth deterministic state number `seed` (Gaussian and sinusoid mixtures
/// in u, rho and w, positive v), used by the nonlocal and Frechet checks.
inline State smooth_state(int seed, long N, double half_width = 8.0) {
  State s = State::zeros(plain_grid(N, -half_width, half_width));
  const Array<double> Z = s.grid.nodes();
  const double a = 0.3 + 0.05 * (seed % 7), c = -1.0 + 0.25 * (seed % 9), k = 0.5 + 0.2 * (seed % 5);
  const Array<double> env = (-(Z - c).square() / 4.0).exp();
  s.u = a * env * (1.0 + 0.5 * (k * Z).sin());
  s.rho = (seed % 2 ? 0.3 : 0.0) * (-(Z + 0.5).square() / 2.0).exp();
  s.w = 1.2 * env * (k * Z + 0.1 * seed).cos();
  s.v = 1.0 + 0.3 * env * (0.7 * Z).sin();
  double acc = 0;
  s.x[0] = Z[0];
  for (long i = 1; i < N; ++i) {
    acc += s.grid.dZ / 2 * (s.v[i - 1] * (1 + std::cos(s.w[i - 1])) / 2 + s.v[i] * (1 + std::cos(s.w[i])) / 2);
    s.x[i] = Z[0] + acc;
  }
  return s;
}

inline double max_abs(const Array<double>& a) { return a.abs().maxCoeff(); }

}  // namespace testing
