#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chlag/errors.hpp"
#include "chlag/quadrature.hpp"

namespace chlag {

enum class InitialKind { zero, gaussian, peakon, peakon_antipeakon, dambreak_rho, from_file };

inline std::string_view initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::zero: return "zero";
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::peakon: return "peakon";
    case InitialKind::peakon_antipeakon: return "peakon_antipeakon";
    case InitialKind::dambreak_rho: return "dambreak_rho";
    case InitialKind::from_file: return "from_file";
  }
  return "unknown";
}

inline InitialKind parse_initial_kind(std::string_view name) {
  for (InitialKind k : {InitialKind::zero, InitialKind::gaussian, InitialKind::peakon, InitialKind::peakon_antipeakon,
                        InitialKind::dambreak_rho, InitialKind::from_file})
    if (initial_kind_name(k) == name) return k;
  throw ConfigError("unknown initial data kind '" + std::string(name) + "'");
}

/// Eulerian initial data (u0, rho0) on a truncation window; extended by zero
/// outside [x_min, x_max].
template <typename Scalar>
struct InitialData {
  using Fn = std::function<Scalar(Scalar)>;

  InitialKind kind = InitialKind::zero;
  Fn u_bar;
  Fn u_bar_x;
  Fn rho_bar;
  Scalar x_min = -1;
  Scalar x_max = 1;
  /// Positions where u_bar_x jumps; the Lagrangian grid places them at
  /// cell midpoints.
  std::vector<Scalar> kinks;
  /// Sorted quadrature breakpoints (kinks plus any interpolation nodes).
  std::vector<Scalar> breaks;

  bool inside(Scalar x) const { return x >= x_min && x <= x_max; }
  Scalar u(Scalar x) const { return inside(x) ? u_bar(x) : Scalar(0); }
  Scalar ux(Scalar x) const { return inside(x) ? u_bar_x(x) : Scalar(0); }
  Scalar rho(Scalar x) const { return inside(x) ? rho_bar(x) : Scalar(0); }

  /// 1 + u_x^2, the slope of the energy coordinate.
  Scalar z_density(Scalar x) const {
    const Scalar d = ux(x);
    return Scalar(1) + d * d;
  }
  Scalar energy_density(Scalar x) const {
    const Scalar a = u(x), b = ux(x), r = rho(x);
    return a * a + b * b + r * r;
  }
};

namespace initial {

template <typename Scalar>
InitialData<Scalar> zero(Scalar x_min, Scalar x_max) {
  InitialData<Scalar> d;
  d.kind = InitialKind::zero;
  d.u_bar = d.u_bar_x = d.rho_bar = [](Scalar) { return Scalar(0); };
  d.x_min = x_min;
  d.x_max = x_max;
  return d;
}

/// u0 = a exp(-((x-c)/s)^2), rho0 = r exp(-((x-c)/s)^2).
template <typename Scalar>
InitialData<Scalar> gaussian(Scalar amplitude, Scalar center, Scalar width, Scalar rho_amplitude, Scalar x_min,
                             Scalar x_max) {
  if (!(width > 0)) throw ConfigError("gaussian width must be positive");
  InitialData<Scalar> d;
  d.kind = InitialKind::gaussian;
  d.u_bar = [=](Scalar x) {
    const Scalar y = (x - center) / width;
    return amplitude * std::exp(-y * y);
  };
  d.u_bar_x = [=](Scalar x) {
    const Scalar y = (x - center) / width;
    return -2 * y / width * amplitude * std::exp(-y * y);
  };
  d.rho_bar = [=](Scalar x) {
    const Scalar y = (x - center) / width;
    return rho_amplitude * std::exp(-y * y);
  };
  d.x_min = x_min;
  d.x_max = x_max;
  return d;
}

namespace detail {
template <typename Scalar>
Scalar peak(Scalar c, Scalar x0, Scalar x) {
  return c * std::exp(-std::abs(x - x0));
}
// One-sided average at the crest.
template <typename Scalar>
Scalar peak_slope(Scalar c, Scalar x0, Scalar x) {
  if (x == x0) return Scalar(0);
  return (x > x0 ? -c : c) * std::exp(-std::abs(x - x0));
}
}  // namespace detail

/// u0 = c exp(-|x - x0|).
template <typename Scalar>
InitialData<Scalar> peakon(Scalar c, Scalar center, Scalar x_min, Scalar x_max) {
  InitialData<Scalar> d;
  d.kind = InitialKind::peakon;
  d.u_bar = [=](Scalar x) { return detail::peak(c, center, x); };
  d.u_bar_x = [=](Scalar x) { return detail::peak_slope(c, center, x); };
  d.rho_bar = [](Scalar) { return Scalar(0); };
  d.x_min = x_min;
  d.x_max = x_max;
  d.kinks = d.breaks = {center};
  return d;
}

/// Peakon at center - separation/2 and antipeakon at center + separation/2:
/// u0 = c (exp(-|x - x0 + s/2|) - exp(-|x - x0 - s/2|)). The pair moves
/// toward each other and collides.
template <typename Scalar>
InitialData<Scalar> peakon_antipeakon(Scalar c, Scalar center, Scalar separation, Scalar x_min, Scalar x_max) {
  if (!(separation > 0)) throw ConfigError("peakon_antipeakon separation must be positive");
  const Scalar left = center - separation / 2;
  const Scalar right = center + separation / 2;
  InitialData<Scalar> d;
  d.kind = InitialKind::peakon_antipeakon;
  d.u_bar = [=](Scalar x) { return detail::peak(c, left, x) - detail::peak(c, right, x); };
  d.u_bar_x = [=](Scalar x) { return detail::peak_slope(c, left, x) - detail::peak_slope(c, right, x); };
  d.rho_bar = [](Scalar) { return Scalar(0); };
  d.x_min = x_min;
  d.x_max = x_max;
  d.kinks = d.breaks = {left, right};
  return d;
}

/// u0 = 0, rho0 a tanh-smoothed plateau of the given height on
/// [center - half_width, center + half_width].
template <typename Scalar>
InitialData<Scalar> dambreak_rho(Scalar height, Scalar center, Scalar half_width, Scalar smoothing, Scalar x_min,
                                 Scalar x_max) {
  if (!(smoothing > 0) || !(half_width > 0)) throw ConfigError("dambreak_rho needs positive half width and smoothing");
  InitialData<Scalar> d;
  d.kind = InitialKind::dambreak_rho;
  d.u_bar = d.u_bar_x = [](Scalar) { return Scalar(0); };
  d.rho_bar = [=](Scalar x) {
    return height / 2 * (std::tanh((x - center + half_width) / smoothing) - std::tanh((x - center - half_width) / smoothing));
  };
  d.x_min = x_min;
  d.x_max = x_max;
  return d;
}

/// Piecewise-linear data through samples; the slope comes from centered
/// differences at the samples (one-sided at the ends).
template <typename Scalar>
InitialData<Scalar> from_samples(std::vector<Scalar> xs, std::vector<Scalar> us, std::vector<Scalar> rhos) {
  const std::size_t n = xs.size();
  if (n < 3 || us.size() != n || rhos.size() != n) throw DataError("sampled initial data needs >= 3 rows of x,u,rho");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(us[i]) || !std::isfinite(rhos[i]))
      throw DataError("non-finite value in sampled initial data at row " + std::to_string(i + 1));
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DataError("sample x must be strictly increasing (row " + std::to_string(i + 1) + ")");
  }
  std::vector<Scalar> dus(n);
  dus[0] = (us[1] - us[0]) / (xs[1] - xs[0]);
  dus[n - 1] = (us[n - 1] - us[n - 2]) / (xs[n - 1] - xs[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) dus[i] = (us[i + 1] - us[i - 1]) / (xs[i + 1] - xs[i - 1]);

  struct Table {
    std::vector<Scalar> x, u, du, rho;
    Scalar interp(const std::vector<Scalar>& y, Scalar q) const {
      auto it = std::upper_bound(x.begin(), x.end(), q);
      std::size_t j = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
      if (j + 1 >= x.size()) j = x.size() - 2;
      const Scalar t = (q - x[j]) / (x[j + 1] - x[j]);
      return y[j] + t * (y[j + 1] - y[j]);
    }
  };
  auto table = std::make_shared<Table>(Table{std::move(xs), std::move(us), std::move(dus), std::move(rhos)});
  InitialData<Scalar> d;
  d.kind = InitialKind::from_file;
  d.u_bar = [table](Scalar q) { return table->interp(table->u, q); };
  d.u_bar_x = [table](Scalar q) { return table->interp(table->du, q); };
  d.rho_bar = [table](Scalar q) { return table->interp(table->rho, q); };
  d.x_min = table->x.front();
  d.x_max = table->x.back();
  d.breaks.assign(table->x.begin() + 1, table->x.end() - 1);
  return d;
}

}  // namespace initial

/// Samples the data and throws DataError on non-finite values or on a
/// profile that has not decayed at the window edges.
template <typename Scalar>
void validate(const InitialData<Scalar>& d, Scalar edge_tol, int samples = 4001) {
  if (!(d.x_max > d.x_min)) throw ConfigError("initial window must satisfy x_min < x_max");
  const Scalar h = (d.x_max - d.x_min) / Scalar(samples - 1);
  for (int i = 0; i < samples; ++i) {
    const Scalar x = d.x_min + h * Scalar(i);
    if (!std::isfinite(d.u(x)) || !std::isfinite(d.ux(x)) || !std::isfinite(d.rho(x)))
      throw DataError("initial data not finite at x = " + std::to_string(static_cast<double>(x)));
  }
  for (Scalar x : {d.x_min, d.x_max}) {
    if (std::abs(d.u(x)) > edge_tol)
      throw DataError("u0 has not decayed at window edge x = " + std::to_string(static_cast<double>(x)) +
                      " (|u0| = " + std::to_string(static_cast<double>(std::abs(d.u(x)))) + ")");
    if (std::abs(d.rho(x)) > edge_tol)
      throw DataError("rho0 has not decayed at window edge x = " + std::to_string(static_cast<double>(x)));
  }
}

/// E(0) = int (u0^2 + u0_x^2 + rho0^2) dx over the window.
template <typename Scalar>
Scalar energy_e0(const InitialData<Scalar>& d, Scalar max_panel = Scalar(0.05)) {
  auto density = [&](Scalar x) {
    const Scalar e = d.energy_density(x);
    if (!std::isfinite(e)) throw DataError("non-finite initial energy density at x = " + std::to_string(static_cast<double>(x)));
    return e;
  };
  return quad::piecewise<Scalar>(density, d.x_min, d.x_max, d.breaks, max_panel);
}

}  // namespace chlag
