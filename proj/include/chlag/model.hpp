#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "chlag/errors.hpp"

namespace chlag {

/// Dense polynomial c0 + c1 u + c2 u^2 + ... with exact calculus.
template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : c_(Coeffs::Zero(1)) {}
  explicit Polynomial(Coeffs c) : c_(std::move(c)) {
    if (c_.size() == 0) c_ = Coeffs::Zero(1);
  }
  Polynomial(std::initializer_list<Scalar> c) : c_(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index i = 0;
    for (Scalar v : c) c_[i++] = v;
    if (c_.size() == 0) c_ = Coeffs::Zero(1);
  }
  static Polynomial from_vector(const std::vector<Scalar>& c) {
    Coeffs out(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) out[static_cast<Eigen::Index>(i)] = c[i];
    return Polynomial(std::move(out));
  }

  Scalar operator()(Scalar u) const {
    Scalar acc = c_[c_.size() - 1];
    for (Eigen::Index i = c_.size() - 2; i >= 0; --i) acc = acc * u + c_[i];
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    Coeffs d(c_.size() - 1);
    for (Eigen::Index i = 1; i < c_.size(); ++i) d[i - 1] = Scalar(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Antiderivative vanishing at u = 0.
  Polynomial antiderivative() const {
    Coeffs a = Coeffs::Zero(c_.size() + 1);
    for (Eigen::Index i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / Scalar(i + 1);
    return Polynomial(std::move(a));
  }

  Polynomial operator+(const Polynomial& o) const {
    Coeffs r = Coeffs::Zero(std::max(c_.size(), o.c_.size()));
    r.head(c_.size()) += c_;
    r.head(o.c_.size()) += o.c_;
    return Polynomial(std::move(r));
  }
  Polynomial operator*(const Polynomial& o) const {
    Coeffs r = Coeffs::Zero(c_.size() + o.c_.size() - 1);
    for (Eigen::Index i = 0; i < c_.size(); ++i)
      for (Eigen::Index j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(Scalar s, const Polynomial& p) { return Polynomial(Coeffs(s * p.c_)); }

  const Coeffs& coeffs() const { return c_; }
  Scalar constant_term() const { return c_[0]; }
  bool is_constant(Scalar value) const {
    if (c_[0] != value) return false;
    for (Eigen::Index i = 1; i < c_.size(); ++i)
      if (c_[i] != Scalar(0)) return false;
    return true;
  }

 private:
  Coeffs c_;
};

enum class Preset { camassa_holm, hyperelastic_rod, constantin_lannes, two_component_ch, custom_polynomial };

inline std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::camassa_holm: return "camassa_holm";
    case Preset::hyperelastic_rod: return "hyperelastic_rod";
    case Preset::constantin_lannes: return "constantin_lannes";
    case Preset::two_component_ch: return "two_component_ch";
    case Preset::custom_polynomial: return "custom_polynomial";
  }
  return "unknown";
}

inline Preset parse_preset(std::string_view name) {
  for (Preset p : {Preset::camassa_holm, Preset::hyperelastic_rod, Preset::constantin_lannes,
                   Preset::two_component_ch, Preset::custom_polynomial})
    if (preset_name(p) == name) return p;
  throw ConfigError("unknown model preset '" + std::string(name) + "'");
}

/// The flux pair (f, g) with the derivatives and antiderivatives the
/// evolution and the diagnostics need. Immutable after construction.
template <typename Scalar>
class FluxModel {
 public:
  using Poly = Polynomial<Scalar>;

  /// Every table supplied explicitly. Used by custom models and by tests
  /// that need a deliberately inconsistent table.
  struct Tables {
    Poly f, f1, f2, f3, g, g1;
  };

  FluxModel(Preset preset, Scalar k, Tables t) : preset_(preset), k_(k), t_(std::move(t)) {
    if (!std::isfinite(static_cast<double>(k_))) throw ConfigError("model parameter k must be finite");
    if (t_.g.constant_term() != Scalar(0)) throw ConfigError("flux g must satisfy g(0) = 0");
    F_ = t_.f.antiderivative();
    G_ = t_.g.antiderivative();
    // H' = 2 g + f'' u^2
    const Poly u2{Scalar(0), Scalar(0), Scalar(1)};
    H_ = (Scalar(2) * t_.g + t_.f2 * u2).antiderivative();
  }

  static FluxModel from_polynomials(Preset preset, Scalar k, const Poly& f, const Poly& g) {
    const Poly f1 = f.derivative();
    const Poly f2 = f1.derivative();
    return FluxModel(preset, k, Tables{f, f1, f2, f2.derivative(), g, g.derivative()});
  }

  Preset preset() const { return preset_; }
  Scalar k() const { return k_; }

  Scalar f(Scalar u) const { return t_.f(u); }
  Scalar df(Scalar u) const { return t_.f1(u); }
  Scalar d2f(Scalar u) const { return t_.f2(u); }
  Scalar d3f(Scalar u) const { return t_.f3(u); }
  Scalar g(Scalar u) const { return t_.g(u); }
  Scalar dg(Scalar u) const { return t_.g1(u); }
  Scalar F(Scalar u) const { return F_(u); }
  Scalar G(Scalar u) const { return G_(u); }
  Scalar H(Scalar u) const { return H_(u); }

  const Tables& tables() const { return t_; }

  /// True when f'' is identically one (CH and its two-component form).
  bool unit_curvature() const { return t_.f2.is_constant(Scalar(1)); }

 private:
  Preset preset_;
  Scalar k_;
  Tables t_;
  Poly F_, G_, H_;
};

/// Builds a named preset. Custom polynomials go through make_custom.
template <typename Scalar = double>
FluxModel<Scalar> make_preset(Preset preset, Scalar k = Scalar(0)) {
  using Poly = Polynomial<Scalar>;
  switch (preset) {
    case Preset::camassa_holm:
    case Preset::two_component_ch:
      // f = u^2/2, g = k u + u^2
      return FluxModel<Scalar>::from_polynomials(preset, k, Poly{0, 0, Scalar(0.5)}, Poly{0, k, 1});
    case Preset::hyperelastic_rod:
      // f = k u^2/2; g chosen so the flux form reproduces u_t - u_txx + 3 u u_x = k(2 u_x u_xx + u u_xxx)
      return FluxModel<Scalar>::from_polynomials(preset, k, Poly{0, 0, k / 2},
                                                 Poly{0, 0, (Scalar(3) - k) / 2});
    case Preset::constantin_lannes:
      return FluxModel<Scalar>::from_polynomials(preset, k, Poly{0, -1, -7}, Poly{0, 2, 10, -2, 3});
    case Preset::custom_polynomial:
      throw ConfigError("custom_polynomial requires coefficient lists; use make_custom");
  }
  throw ConfigError("unknown model preset");
}

template <typename Scalar = double>
FluxModel<Scalar> make_custom(const std::vector<Scalar>& f_coeffs, const std::vector<Scalar>& g_coeffs,
                              Scalar k = Scalar(0)) {
  if (f_coeffs.empty() || g_coeffs.empty()) throw ConfigError("custom_polynomial needs non-empty f and g coefficients");
  for (Scalar c : f_coeffs)
    if (!std::isfinite(static_cast<double>(c))) throw ConfigError("custom f coefficient is not finite");
  for (Scalar c : g_coeffs)
    if (!std::isfinite(static_cast<double>(c))) throw ConfigError("custom g coefficient is not finite");
  if (g_coeffs.front() != Scalar(0)) throw ConfigError("custom g has nonzero constant term (g(0) = 0 required)");
  return FluxModel<Scalar>::from_polynomials(Preset::custom_polynomial, k,
                                             Polynomial<Scalar>::from_vector(f_coeffs),
                                             Polynomial<Scalar>::from_vector(g_coeffs));
}

/// H(u) = int_0^u (2 g(s) + f''(s) s^2) ds, exact for polynomial fluxes.
template <typename Scalar>
Scalar eval_H(const FluxModel<Scalar>& model, Scalar u) {
  return model.H(u);
}

template <typename Scalar>
struct DerivativeCheck {
  Scalar max_residual = 0;
  std::string worst_pair;
  bool pass = true;
};

/// Central-difference consistency of every (antiderivative, derivative) pair.
template <typename Scalar>
DerivativeCheck<Scalar> check_derivatives(const FluxModel<Scalar>& m, const std::vector<Scalar>& points, Scalar tol,
                                          Scalar h = Scalar(1e-5)) {
  DerivativeCheck<Scalar> out;
  auto probe = [&](std::string_view name, auto&& prim, auto&& deriv, auto&& second) {
    for (Scalar u : points) {
      const Scalar fd = (prim(u + h) - prim(u - h)) / (2 * h);
      const Scalar r = std::abs(deriv(u) - fd) / (Scalar(1) + std::abs(second(u)) * h);
      if (r > out.max_residual) {
        out.max_residual = r;
        out.worst_pair = std::string(name);
      }
    }
  };
  const auto& t = m.tables();
  auto f = [&](Scalar u) { return t.f(u); };
  auto f1 = [&](Scalar u) { return t.f1(u); };
  auto f2 = [&](Scalar u) { return t.f2(u); };
  auto f3 = [&](Scalar u) { return t.f3(u); };
  auto g = [&](Scalar u) { return t.g(u); };
  auto g1 = [&](Scalar u) { return t.g1(u); };
  auto F = [&](Scalar u) { return m.F(u); };
  auto G = [&](Scalar u) { return m.G(u); };
  auto H = [&](Scalar u) { return m.H(u); };
  auto dH = [&](Scalar u) { return 2 * t.g(u) + t.f2(u) * u * u; };
  auto dH2 = [&](Scalar u) { return 2 * t.g1(u) + t.f3(u) * u * u + 2 * t.f2(u) * u; };
  auto zero = [](Scalar) { return Scalar(0); };
  probe("F'=f", F, f, f1);
  probe("f'", f, f1, f2);
  probe("f''", f1, f2, f3);
  probe("f'''", f2, f3, zero);
  probe("G'=g", G, g, g1);
  probe("g'", g, g1, zero);
  probe("H'", H, dH, dH2);
  out.pass = out.max_residual <= tol;
  return out;
}

}  // namespace chlag
