#include "doctest.h"
#include "helpers.hpp"

using namespace chlag;

namespace {
const Preset kPresets[] = {Preset::camassa_holm, Preset::hyperelastic_rod, Preset::constantin_lannes,
                           Preset::two_component_ch};

// H by Gauss-Legendre quadrature of 2 g(s) + f''(s) s^2, independent of the
// symbolic antiderivative.
double H_quadrature(const FluxModel<double>& m, double u) {
  auto integrand = [&](double s) { return 2 * m.g(s) + m.d2f(s) * s * s; };
  return u >= 0 ? quad::composite<double>(integrand, 0.0, u, 0.1) : -quad::composite<double>(integrand, u, 0.0, 0.1);
}
}  // namespace

TEST_CASE("camassa_holm closed forms") {
  const auto m = make_preset<double>(Preset::camassa_holm, 0.0);
  CHECK(m.f(2.0) == doctest::Approx(2.0));
  CHECK(m.d2f(2.0) == doctest::Approx(1.0));
  CHECK(m.g(2.0) == doctest::Approx(4.0));
  CHECK(m.unit_curvature());
}

TEST_CASE("constantin_lannes closed forms") {
  const auto m = make_preset<double>(Preset::constantin_lannes);
  CHECK(m.f(1.0) == doctest::Approx(-8.0));
  CHECK(m.g(1.0) == doctest::Approx(13.0));
  CHECK_FALSE(m.unit_curvature());
}

TEST_CASE("every preset has g(0) = 0 and vanishing antiderivatives at 0") {
  for (Preset p : kPresets)
    for (double k : {0.0, 1.0, 2.5}) {
      const auto m = make_preset<double>(p, k);
      CHECK(m.g(0.0) == 0.0);
      CHECK(m.F(0.0) == 0.0);
      CHECK(m.G(0.0) == 0.0);
      CHECK(m.H(0.0) == 0.0);
    }
}

TEST_CASE("H matches quadrature of its defining integral") {
  const auto ch0 = make_preset<double>(Preset::camassa_holm, 0.0);
  const auto ch1 = make_preset<double>(Preset::camassa_holm, 1.0);
  CHECK(eval_H(ch0, 2.0) == doctest::Approx(H_quadrature(ch0, 2.0)).epsilon(1e-13));
  CHECK(eval_H(ch1, 2.0) == doctest::Approx(H_quadrature(ch1, 2.0)).epsilon(1e-13));
  // frozen after the quadrature comparison above
  CHECK(eval_H(ch0, 2.0) == doctest::Approx(8.0));
  CHECK(eval_H(ch1, 2.0) == doctest::Approx(12.0));
  for (Preset p : kPresets)
    for (double u : {-1.5, -0.3, 0.7, 1.9}) {
      const auto m = make_preset<double>(p, 0.8);
      CHECK(m.H(u) == doctest::Approx(H_quadrature(m, u)).epsilon(1e-12));
    }
}

TEST_CASE("derivative consistency") {
  SUBCASE("camassa_holm on {-1, 0, 1}") {
    CHECK(check_derivatives(make_preset<double>(Preset::camassa_holm), {-1.0, 0.0, 1.0}, 1e-6).pass);
  }
  SUBCASE("constantin_lannes on -2..2 step 0.5") {
    std::vector<double> pts;
    for (int i = 0; i <= 8; ++i) pts.push_back(-2.0 + 0.5 * i);
    const auto r = check_derivatives(make_preset<double>(Preset::constantin_lannes), pts, 1e-6);
    CHECK(r.pass);
    CHECK(r.max_residual <= 1e-6);
  }
  SUBCASE("deliberately wrong f' table fails") {
    using P = Polynomial<double>;
    FluxModel<double>::Tables t{P{0, 0, 0.5}, P{0, 2.0}, P{1.0}, P{0.0}, P{0, 0, 1}, P{0, 2}};
    const FluxModel<double> bad(Preset::custom_polynomial, 0.0, t);
    const auto r = check_derivatives(bad, {-1.0, 0.5, 1.0}, 1e-6);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual > 1e-6);
  }
}

TEST_CASE("hyperelastic_rod(1) agrees with camassa_holm(1) on f and f'") {
  const auto rod = make_preset<double>(Preset::hyperelastic_rod, 1.0);
  const auto ch = make_preset<double>(Preset::camassa_holm, 1.0);
  for (double u = -2; u <= 2; u += 0.25) {
    CHECK(rod.f(u) == doctest::Approx(ch.f(u)));
    CHECK(rod.df(u) == doctest::Approx(ch.df(u)));
  }
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_preset("burgers"), ConfigError);
  CHECK_THROWS_AS(make_preset<double>(Preset::custom_polynomial), ConfigError);
  CHECK_THROWS_AS(make_custom<double>({0, 0, 0.5}, {1.0, 0, 1}), ConfigError);
  CHECK_THROWS_AS(make_preset<double>(Preset::camassa_holm, std::nan("")), ConfigError);
  const auto m = make_custom<double>({0, 0, 0.5}, {0, 0, 1});
  CHECK(m.unit_curvature());
  CHECK(m.g(3.0) == doctest::Approx(9.0));
}
