#pragma once

#include <string>
#include <vector>

#include "chlag/config.hpp"
#include "chlag/evolution.hpp"
#include "chlag/initial_data.hpp"
#include "chlag/lagrangian.hpp"
#include "chlag/model.hpp"

namespace chlag {

/// Everything a run needs, resolved from a RunConfig.
struct Scenario {
  RunConfig config;
  FluxModel<double> model;
  InitialData<double> data;
  double e0_quadrature = 0;  // E(0) of the data by adaptive quadrature
  double padding = 0;        // Z padding added on each side of the window
  LagrangianState<double> initial;
  Numerics<double> numerics;
};

FluxModel<double> build_model(const RunConfig& cfg);

/// Reads a CSV with header x,u,rho.
InitialData<double> read_samples_csv(const std::string& path);

InitialData<double> build_initial_data(const RunConfig& cfg);

/// Validates the config and the data, pads the Z window by the truncation
/// distance and builds the T = 0 state.
Scenario build_scenario(const RunConfig& cfg);

/// Uniform Eulerian sample points: the configured window clipped to the
/// range covered by the characteristics of s.
Array<double> frame_points(const RunConfig& cfg, const LagrangianState<double>& s);

}  // namespace chlag
