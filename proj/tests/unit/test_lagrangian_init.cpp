#include "doctest.h"
#include "helpers.hpp"

using namespace chlag;
using testing::state_from;

TEST_CASE("energy_e0") {
  CHECK(energy_e0(initial::zero<double>(-5, 5)) == 0.0);
  // closed forms: int 2 e^{-2|x|} = 2 and int (e^{-2x^2} + 4x^2 e^{-2x^2}) = 2 sqrt(pi/2)
  CHECK(energy_e0(initial::peakon<double>(1, 0, -20, 20)) == doctest::Approx(2.0).epsilon(1e-9));
  const double gauss = 2 * std::sqrt(M_PI / 2);
  CHECK(energy_e0(initial::gaussian<double>(1, 0, 1, 0, -12, 12)) == doctest::Approx(gauss).epsilon(1e-12));
  CHECK(gauss == doctest::Approx(2.5066).epsilon(1e-4));
  // rho contributes int rho^2 = 0.04 sqrt(pi/2)
  CHECK(energy_e0(initial::gaussian<double>(0.5, 0, 1, 0.2, -12, 12)) ==
        doctest::Approx((0.25 * 2 + 0.04) * std::sqrt(M_PI / 2)).epsilon(1e-12));
}

TEST_CASE("z map") {
  SUBCASE("zero data is the identity") {
    const auto zm = build_z_map(initial::zero<double>(-3, 3));
    for (double x : {-2.5, 0.0, 1.3}) {
      CHECK(zm.z_of(x) == doctest::Approx(x));
      CHECK(zm.x_of(x) == doctest::Approx(x));
    }
  }
  SUBCASE("unit slope data doubles Z") {
    InitialData<double> d;
    d.u_bar = [](double x) { return x; };
    d.u_bar_x = [](double) { return 1.0; };
    d.rho_bar = [](double) { return 0.0; };
    d.x_min = -2;
    d.x_max = 2;
    const auto zm = build_z_map(d, 257);
    for (double x : {-1.5, 0.25, 1.75}) {
      CHECK(zm.z_of(x) == doctest::Approx(2 * x).epsilon(1e-13));
      CHECK(zm.x_of(2 * x) == doctest::Approx(x).epsilon(1e-12));
    }
  }
  SUBCASE("peakon closed form and round trip") {
    const auto zm = build_z_map(initial::peakon<double>(1, 0, -20, 20));
    CHECK(zm.z_of(1.0) == doctest::Approx(1 + (1 - std::exp(-2.0)) / 2).epsilon(1e-12));
    CHECK(zm.z_of(1.0) == doctest::Approx(1.43233).epsilon(1e-5));
    CHECK(zm.z_of(0.0) == doctest::Approx(0.0));
    for (double x = -19.5; x < 19.5; x += 0.37) {
      CHECK(std::abs(zm.x_of(zm.z_of(x)) - x) <= 1e-10);
      CHECK(zm.slope(x) >= 1.0);
    }
  }
  SUBCASE("strictly increasing") {
    const auto zm = build_z_map(initial::gaussian<double>(2, 0, 0.5, 0, -6, 6));
    double prev = zm.z_of(-7.0);
    for (double x = -6.9; x < 7; x += 0.05) {
      const double z = zm.z_of(x);
      CHECK(z > prev);
      prev = z;
    }
  }
}

TEST_CASE("grid") {
  CHECK_THROWS_AS(make_grid<double>(0, 1, 8), ConfigError);
  const auto g = make_grid<double>(-1, 1, 101);
  CHECK(g.dZ == doctest::Approx(0.02));
  CHECK(g.z_max() == doctest::Approx(1.0));
  SUBCASE("kinks land on cell midpoints") {
    const auto gk = make_grid<double>(-10, 10, 200, {-1.3, 2.9});
    CHECK(gk.z_min <= -10);
    CHECK(gk.z_max() >= 10);
    for (double k : {-1.3, 2.9}) {
      const double cell = (k - gk.z_min) / gk.dZ;
      CHECK(cell - std::floor(cell) == doctest::Approx(0.5).epsilon(1e-9));
    }
    REQUIRE(gk.kink_cells.size() == 2);
    CHECK(gk.z(gk.kink_cells[0]) < -1.3);
    CHECK(gk.z(gk.kink_cells[0] + 1) > -1.3);
    CHECK(g.kink_cells.empty());
  }
}

TEST_CASE("init_state") {
  SUBCASE("zero data") {
    const auto s = state_from(initial::zero<double>(-4, 4), 64);
    CHECK(testing::max_abs(s.u) == 0.0);
    CHECK(testing::max_abs(s.rho) == 0.0);
    CHECK(testing::max_abs(s.w) == 0.0);
    CHECK((s.v == 1.0).all());
    CHECK(testing::max_abs(s.x - s.grid.nodes()) <= 1e-12);
    CHECK(s.T == 0.0);
  }
  SUBCASE("unit slope node gives w = pi/2") {
    InitialData<double> d = initial::zero<double>(-2, 2);
    d.u_bar = [](double x) { return std::sin(x) * std::exp(-x * x); };
    d.u_bar_x = [](double x) { return (std::cos(x) - 2 * x * std::sin(x)) * std::exp(-x * x); };
    const auto s = state_from(d, 65);
    // u_x(0) = 1 and the grid is symmetric about Z = 0, so node 32 sits at x = 0
    CHECK(s.w[32] == doctest::Approx(M_PI / 2).epsilon(1e-10));
  }
  SUBCASE("peakon round trip at interior points") {
    const auto d = initial::peakon<double>(1, 0, -20, 20);
    const auto zm = build_z_map(d);
    for (double x : {-3.1, -0.4, 0.6, 2.2})
      CHECK(std::abs(d.u(zm.x_of(zm.z_of(x))) - std::exp(-std::abs(x))) <= 1e-8);
    const auto s = state_from(d, 2048);
    for (Eigen::Index i = 0; i < s.size(); ++i) CHECK(std::abs(s.w[i]) < M_PI);
  }
  SUBCASE("positions follow the data map to O(dZ^2)") {
    const auto d = initial::gaussian<double>(1, 0, 1, 0, -8, 8);
    const auto zm = build_z_map(d);
    double e1 = 0, e2 = 0;
    for (long N : {256, 512}) {
      const auto s = state_from(d, N);
      double e = 0;
      for (Eigen::Index i = 0; i < s.size(); ++i) e = std::max(e, std::abs(s.x[i] - zm.x_of(s.grid.z(i))));
      (N == 256 ? e1 : e2) = e;
    }
    CHECK(e1 / e2 > 3.5);
  }
  SUBCASE("Lagrangian energy matches energy_e0") {
    const auto d = initial::gaussian<double>(0.5, 0, 1, 0.2, -12, 12);
    const auto s = state_from(d, 2048);
    CHECK(energy_lagrangian(s) == doctest::Approx(energy_e0(d)).epsilon(1e-5));
  }
  SUBCASE("window mismatch") {
    const auto d = initial::gaussian<double>(1, 0, 1, 0, -5, 5);
    const auto zm = build_z_map(d);
    CHECK_THROWS_AS(init_state(d, zm, make_grid<double>(-2, 2, 64)), ConfigError);
  }
}

TEST_CASE("initial data validation") {
  CHECK_THROWS_AS(validate(initial::gaussian<double>(1, 0, 1, 0, -1, 1), 1e-4), DataError);
  CHECK_NOTHROW(validate(initial::gaussian<double>(1, 0, 1, 0, -6, 6), 1e-4));
  CHECK_THROWS_AS(initial::from_samples<double>({0, 1, 1}, {0, 0, 0}, {0, 0, 0}), DataError);
  CHECK_THROWS_AS(initial::from_samples<double>({0, 1, 2}, {0, std::nan(""), 0}, {0, 0, 0}), DataError);
  const auto d = initial::from_samples<double>({-1, 0, 1}, {0, 1, 0}, {0, 0, 0});
  CHECK(d.u(0.5) == doctest::Approx(0.5));
  CHECK(d.ux(0.0) == doctest::Approx(0.0));
}
