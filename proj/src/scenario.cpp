#include "chlag/scenario.hpp"

#include <fstream>
#include <sstream>

#include "chlag/errors.hpp"
#include "chlag/nonlocal.hpp"

namespace chlag {

FluxModel<double> build_model(const RunConfig& cfg) {
  const Preset p = parse_preset(cfg.model.preset);
  if (p == Preset::custom_polynomial) return make_custom(cfg.model.f_coeffs, cfg.model.g_coeffs, cfg.model.k);
  if (!cfg.model.f_coeffs.empty() || !cfg.model.g_coeffs.empty())
    throw ConfigError("model.f_coeffs / model.g_coeffs apply to custom_polynomial only");
  return make_preset(p, cfg.model.k);
}

InitialData<double> read_samples_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open initial data file '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,u,rho") throw DataError(path + ": expected header 'x,u,rho', got '" + line + "'");
  std::vector<double> xs, us, rs;
  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw DataError(path + ":" + std::to_string(row) + ": expected three columns");
    try {
      xs.push_back(std::stod(a));
      us.push_back(std::stod(b));
      rs.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(row) + ": malformed number");
    }
  }
  return initial::from_samples(xs, us, rs);
}

InitialData<double> build_initial_data(const RunConfig& cfg) {
  const auto& in = cfg.initial;
  const double a = cfg.grid.x_min, b = cfg.grid.x_max;
  switch (parse_initial_kind(in.kind)) {
    case InitialKind::zero:
      return initial::zero(a, b);
    case InitialKind::gaussian:
      return initial::gaussian(in.amplitude, in.center, in.width, in.rho_amplitude, a, b);
    case InitialKind::peakon:
      return initial::peakon(in.amplitude, in.center, a, b);
    case InitialKind::peakon_antipeakon:
      return initial::peakon_antipeakon(in.amplitude, in.center, in.separation, a, b);
    case InitialKind::dambreak_rho:
      return initial::dambreak_rho(in.rho_amplitude, in.center, in.rho_width, in.rho_smoothing, a, b);
    case InitialKind::from_file:
      if (in.file.empty()) throw ConfigError("initial.kind = from_file needs initial.file");
      return read_samples_csv(in.file);
  }
  throw ConfigError("unknown initial.kind");
}

Scenario build_scenario(const RunConfig& cfg) {
  validate_config(cfg);
  FluxModel<double> model = build_model(cfg);
  InitialData<double> data = build_initial_data(cfg);
  validate(data, cfg.initial.edge_tol);
  const double e0 = energy_e0(data);
  // v stays at 1 initially, the lower bound used for the decay estimate
  const double pad = truncation_padding(e0, 1.0, cfg.grid.pad_tol);
  const ZMap<double> zmap = build_z_map(data);
  std::vector<double> kinks;
  for (double k : data.kinks) kinks.push_back(zmap.z_of(k));
  const double lo = zmap.z_of(data.x_min) - pad, hi = zmap.z_of(data.x_max) + pad;
  const auto grid = make_grid(lo, hi, static_cast<Eigen::Index>(cfg.grid.N), kinks);
  LagrangianState<double> s0 = init_state(data, zmap, grid);
  Numerics<double> num;
  num.tan_clamp = cfg.numerics.tan_clamp;
  num.substep_cos_threshold = cfg.numerics.substep_cos_threshold;
  return Scenario{cfg, std::move(model), std::move(data), e0, pad, std::move(s0), num};
}

Array<double> frame_points(const RunConfig& cfg, const LagrangianState<double>& s) {
  const double a = std::max(cfg.grid.x_min, s.x[0]);
  const double b = std::min(cfg.grid.x_max, s.x[s.size() - 1]);
  return Array<double>::LinSpaced(cfg.outputs.x_samples, a, b);
}

}  // namespace chlag
