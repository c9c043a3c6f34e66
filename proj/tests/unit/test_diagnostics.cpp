#include "doctest.h"
#include "helpers.hpp"

using namespace chlag;
using testing::max_abs;
using testing::State;

namespace {
const auto ch0 = make_preset<double>(Preset::camassa_holm, 0.0);

State gaussian_state(long N, double amp = 0.5, double rho = 0.2) {
  return testing::state_from(initial::gaussian<double>(amp, 0, 1, rho, -10, 10), N, 6.0);
}

std::vector<EulerianFrame<double>> frames_of(long N, double t_end, double every, const Array<double>& xq) {
  const State s = gaussian_state(N);
  std::vector<EulerianFrame<double>> frames;
  integrate<double>(s, ch0, t_end, every / 4, output_schedule(t_end, every),
                    [&](const State& st) { frames.push_back(reconstruct(st, xq)); }, {}, false);
  return frames;
}
}  // namespace

TEST_CASE("energy_lagrangian") {
  State s = State::zeros(testing::plain_grid(101, -2, 3));
  CHECK(energy_lagrangian(s) == 0.0);
  s.w.setConstant(M_PI);
  CHECK(energy_lagrangian(s) == doctest::Approx(5.0).epsilon(1e-14));
  const State p = testing::state_from(initial::peakon<double>(1, 0, -20, 20), 4096);
  CHECK(energy_lagrangian(p) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("breaking detector") {
  State s = State::zeros(testing::plain_grid(64));
  CHECK(breaking_detector(s, 1e-4).measure == 0.0);
  s.w.segment(10, 3).setConstant(M_PI);
  const auto b = breaking_detector(s, 1e-4);
  CHECK(b.measure == doctest::Approx(3 * s.grid.dZ));
  CHECK(b.nodes == std::vector<Eigen::Index>{10, 11, 12});
  CHECK_THROWS_AS(breaking_detector(s, 1.5), PreconditionError);
}

TEST_CASE("steepening data breaks while the energy is kept") {
  InitialData<double> d = initial::zero<double>(-8, 8);
  d.u_bar = [](double x) { return -2 * x * std::exp(-x * x); };
  d.u_bar_x = [](double x) { return (4 * x * x - 2) * std::exp(-x * x); };
  const State s = testing::state_from(d, 2048, 6.0);
  const double E0 = energy_lagrangian(s);
  double measure = 0, drift = 0;
  integrate<double>(s, ch0, 2.0, 1e-3, output_schedule(2.0, 0.02),
                    [&](const State& st) {
                      measure = std::max(measure, breaking_detector(st, 1e-4).measure);
                      drift = std::max(drift, std::abs(energy_lagrangian(st) - E0) / E0);
                    },
                    {}, false);
  CHECK(measure > 0);
  CHECK(drift <= 1e-4);
}

TEST_CASE("flux balance") {
  const Array<double> xq = Array<double>::LinSpaced(401, -4, 4);
  SUBCASE("zero trajectory") {
    std::vector<EulerianFrame<double>> frames;
    const State z = State::zeros(testing::plain_grid(64, -5, 5));
    for (int k = 0; k < 3; ++k) {
      auto fr = reconstruct(z, xq);
      fr.t = 0.1 * k;
      frames.push_back(fr);
    }
    CHECK(flux_balance_check(frames, ch0) == 0.0);
  }
  SUBCASE("decreases under refinement and spikes on corruption") {
    const double coarse = flux_balance_check(frames_of(512, 0.2, 0.02, xq), ch0);
    const Array<double> xf = Array<double>::LinSpaced(801, -4, 4);
    auto fine_frames = frames_of(1024, 0.2, 0.01, xf);
    const double fine = flux_balance_check(fine_frames, ch0);
    CHECK(fine < coarse);
    CHECK(fine <= 1e-2);
    fine_frames[5].u *= 1.1;
    fine_frames[5].energy_density = fine_frames[5].u.square() + fine_frames[5].ux.square() + fine_frames[5].rho.square();
    CHECK(flux_balance_check(fine_frames, ch0) > 100 * fine);
  }
  SUBCASE("invalid samples are refused") {
    auto frames = frames_of(256, 0.04, 0.02, xq);
    frames[1].ux_valid[7] = false;
    CHECK_THROWS_AS(flux_balance_check(frames, ch0), PreconditionError);
  }
}

TEST_CASE("Frechet derivative check") {
  SUBCASE("first order at the zero state") {
    const State z = State::zeros(testing::plain_grid(256, -6, 6));
    const Array<double> phi = (-z.grid.nodes().square()).exp();
    const auto r = frechet_check(z, ch0, phi, 1e-5);
    // only the O(eps) term of the quadratic source survives
    CHECK(r.Px <= 1e-4);
    CHECK(r.dZPx <= 1e-4);
  }
  SUBCASE("first order in eps on the Gaussian state") {
    const State s = gaussian_state(512);
    const Array<double> phi = (-s.grid.nodes().square()).exp();
    const auto a = frechet_check(s, ch0, phi, 1e-4);
    const auto b = frechet_check(s, ch0, phi, 1e-5);
    CHECK(a.Px / b.Px == doctest::Approx(10.0).epsilon(0.2));
    CHECK(a.dZPx / b.dZPx == doctest::Approx(10.0).epsilon(0.2));
  }
  SUBCASE("constantin_lannes") {
    const State s = gaussian_state(512, 0.3, 0.0);
    const Array<double> phi = (-s.grid.nodes().square()).exp();
    const auto r = frechet_check(s, make_preset<double>(Preset::constantin_lannes), phi, 1e-5);
    CHECK(r.Px <= 1e-3);
    CHECK(r.dZPx <= 1e-3);
  }
}

TEST_CASE("bounds report") {
  SUBCASE("zero state") {
    const State z = State::zeros(testing::plain_grid(64));
    const auto ctx = DiagnosticsContext<double>::from_initial(z, ch0);
    const auto r = bounds_report(z, compute_P_Px(z, ch0), ch0, ctx);
    CHECK(r.sup_u_sq_ratio == 0.0);
    CHECK(r.P_inf_ratio == 0.0);
    CHECK(r.Px_inf_ratio == 0.0);
    CHECK(r.v_min == 1.0);
    CHECK(r.v_max == 1.0);
  }
  SUBCASE("peakon at T = 0") {
    const State p = testing::state_from(initial::peakon<double>(1, 0, -20, 20), 4096);
    const auto ctx = DiagnosticsContext<double>::from_initial(p, ch0);
    const auto r = bounds_report(p, compute_P_Px(p, ch0), ch0, ctx);
    // the crest sits between nodes
    CHECK(p.u.square().maxCoeff() == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(r.sup_u_sq_ratio == doctest::Approx(0.5).epsilon(1e-2));
    for (double v : r.values()) {
      CHECK(std::isfinite(v));
      CHECK(v >= 0);
    }
  }
  SUBCASE("violations are named") {
    const State s = gaussian_state(256);
    auto ctx = DiagnosticsContext<double>::from_initial(s, ch0);
    ctx.E0 = 0.01;
    CHECK_THROWS_WITH_AS(bounds_report(s, compute_P_Px(s, ch0), ch0, ctx), doctest::Contains("sup u^2"),
                         DiagnosticError);
    State bad = s;
    bad.v[3] = -0.5;
    ctx = DiagnosticsContext<double>::from_initial(s, ch0);
    CHECK_THROWS_WITH_AS(bounds_report(bad, compute_P_Px(bad, ch0), ch0, ctx), doctest::Contains("v positivity"),
                         DiagnosticError);
  }
  SUBCASE("evolved Gaussian keeps v positive") {
    const State s = gaussian_state(512);
    const auto ctx = DiagnosticsContext<double>::from_initial(s, ch0);
    integrate<double>(s, ch0, 1.0, 2e-3, output_schedule(1.0, 0.1), [&](const State& st) {
      CHECK_NOTHROW(bounds_report(st, compute_P_Px(st, ch0), ch0, ctx));
    });
  }
}

TEST_CASE("residuals converge under simultaneous refinement") {
  auto run = [](long N, double dt) {
    const State s = gaussian_state(N, 1.0, 0.3);
    const State e = integrate(s, ch0, 0.5, dt, {0.5}).back();
    const auto f = compute_P_Px(e, ch0);
    return std::array<double, 4>{residual_uZ(e), residual_xZ(e), residual_PZ(e, f), residual_PxZ(e, ch0, f)};
  };
  const auto a = run(256, 4e-3);
  const auto b = run(512, 2e-3);
  for (int i = 0; i < 4; ++i) {
    CHECK(b[i] > 0);
    CHECK(std::log2(a[i] / b[i]) >= 1.0);
  }
}
