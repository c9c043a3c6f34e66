#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace chlag {

/// Resolved run configuration. Every field has a default; a config file
/// or --override assignment replaces individual keys.
struct RunConfig {
  struct Model {
    std::string preset = "camassa_holm";
    double k = 0.0;
    std::vector<double> f_coeffs;
    std::vector<double> g_coeffs;
  } model;

  struct Initial {
    std::string kind = "gaussian";
    double amplitude = 0.5;
    double center = 0.0;
    double separation = 2.0;
    double width = 1.0;
    double rho_amplitude = 0.2;
    double rho_width = 1.0;  // dam-break half width
    double rho_smoothing = 0.1;
    std::string file;
    double edge_tol = 1e-4;
  } initial;

  struct Grid {
    double x_min = -12.0;
    double x_max = 12.0;
    long N = 2048;
    double pad_tol = 1e-6;
  } grid;

  struct Time {
    double t_end = 0.5;
    double dt = 1e-3;
    double output_every = 0.1;
  } time;

  struct Numerics {
    double tan_clamp = 1e8;
    double eps_plateau = 1e-8;
    double eps_slope = 1e-2;
    double eps_monotone = 1e-3;
    double substep_cos_threshold = 1e-4;
    double breaking_eps = 1e-4;
  } numerics;

  struct Outputs {
    std::string directory = "out";
    bool write_frames = true;
    bool write_diagnostics = true;
    long x_samples = 801;
  } outputs;

  struct Verify {
    double residual_tol = 1e-3;
    double energy_tol = 1e-4;
    double nonlocal_tol = 1e-10;
    double frechet_tol = 1e-3;
    double rho_tol = 1e-6;
    bool inject_corruption = false;
    long convergence_levels = 3;
  } verify;
};

/// Parses "key = value" lines (# starts a comment). Unknown keys and
/// malformed values raise ConfigError naming the line.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>", RunConfig base = {});

RunConfig load_config(const std::string& path);

/// Applies one "key=value" assignment.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Checks the invariants that do not need the initial data (N >= 16,
/// dt > 0, t_end >= 0, pad_tol in (0,1), ...). Throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Every key with its current value, in schema order.
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Schema keys in documentation order.
std::vector<std::string> config_keys();

}  // namespace chlag
