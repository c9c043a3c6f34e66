#include "chlag/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "chlag/errors.hpp"

namespace chlag {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last) throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<nlohmann::ordered_json(const RunConfig&)> get;
};

using Registry = std::vector<std::pair<std::string, Field>>;

const Registry& registry() {
  static const Registry r = [] {
    Registry reg;
    auto dbl = [&](std::string key, auto getter) {
      reg.emplace_back(key, Field{[key, getter](RunConfig& c, const std::string& v) { getter(c) = to_double(key, v); },
                                  [getter](const RunConfig& c) { return nlohmann::ordered_json(getter(c)); }});
    };
    auto lng = [&](std::string key, auto getter) {
      reg.emplace_back(key, Field{[key, getter](RunConfig& c, const std::string& v) { getter(c) = to_long(key, v); },
                                  [getter](const RunConfig& c) { return nlohmann::ordered_json(getter(c)); }});
    };
    auto str = [&](std::string key, auto getter) {
      reg.emplace_back(key, Field{[getter](RunConfig& c, const std::string& v) { getter(c) = v; },
                                  [getter](const RunConfig& c) { return nlohmann::ordered_json(getter(c)); }});
    };
    auto bln = [&](std::string key, auto getter) {
      reg.emplace_back(key, Field{[key, getter](RunConfig& c, const std::string& v) { getter(c) = to_bool(key, v); },
                                  [getter](const RunConfig& c) { return nlohmann::ordered_json(getter(c)); }});
    };
    auto lst = [&](std::string key, auto getter) {
      reg.emplace_back(key, Field{[key, getter](RunConfig& c, const std::string& v) { getter(c) = to_list(key, v); },
                                  [getter](const RunConfig& c) { return nlohmann::ordered_json(getter(c)); }});
    };
#define CHLAG_REF(path) [](auto& c) -> auto& { return c.path; }
    str("model.preset", CHLAG_REF(model.preset));
    dbl("model.k", CHLAG_REF(model.k));
    lst("model.f_coeffs", CHLAG_REF(model.f_coeffs));
    lst("model.g_coeffs", CHLAG_REF(model.g_coeffs));
    str("initial.kind", CHLAG_REF(initial.kind));
    dbl("initial.amplitude", CHLAG_REF(initial.amplitude));
    dbl("initial.center", CHLAG_REF(initial.center));
    dbl("initial.separation", CHLAG_REF(initial.separation));
    dbl("initial.width", CHLAG_REF(initial.width));
    dbl("initial.rho_amplitude", CHLAG_REF(initial.rho_amplitude));
    dbl("initial.rho_width", CHLAG_REF(initial.rho_width));
    dbl("initial.rho_smoothing", CHLAG_REF(initial.rho_smoothing));
    str("initial.file", CHLAG_REF(initial.file));
    dbl("initial.edge_tol", CHLAG_REF(initial.edge_tol));
    dbl("grid.x_min", CHLAG_REF(grid.x_min));
    dbl("grid.x_max", CHLAG_REF(grid.x_max));
    lng("grid.N", CHLAG_REF(grid.N));
    dbl("grid.pad_tol", CHLAG_REF(grid.pad_tol));
    dbl("time.t_end", CHLAG_REF(time.t_end));
    dbl("time.dt", CHLAG_REF(time.dt));
    dbl("time.output_every", CHLAG_REF(time.output_every));
    dbl("numerics.tan_clamp", CHLAG_REF(numerics.tan_clamp));
    dbl("numerics.eps_plateau", CHLAG_REF(numerics.eps_plateau));
    dbl("numerics.eps_slope", CHLAG_REF(numerics.eps_slope));
    dbl("numerics.eps_monotone", CHLAG_REF(numerics.eps_monotone));
    dbl("numerics.substep_cos_threshold", CHLAG_REF(numerics.substep_cos_threshold));
    dbl("numerics.breaking_eps", CHLAG_REF(numerics.breaking_eps));
    str("outputs.directory", CHLAG_REF(outputs.directory));
    bln("outputs.write_frames", CHLAG_REF(outputs.write_frames));
    bln("outputs.write_diagnostics", CHLAG_REF(outputs.write_diagnostics));
    lng("outputs.x_samples", CHLAG_REF(outputs.x_samples));
    dbl("verify.residual_tol", CHLAG_REF(verify.residual_tol));
    dbl("verify.energy_tol", CHLAG_REF(verify.energy_tol));
    dbl("verify.nonlocal_tol", CHLAG_REF(verify.nonlocal_tol));
    dbl("verify.frechet_tol", CHLAG_REF(verify.frechet_tol));
    dbl("verify.rho_tol", CHLAG_REF(verify.rho_tol));
    bln("verify.inject_corruption", CHLAG_REF(verify.inject_corruption));
    lng("verify.convergence_levels", CHLAG_REF(verify.convergence_levels));
#undef CHLAG_REF
    return reg;
  }();
  return r;
}

const Field& lookup(const std::string& key) {
  for (const auto& [k, f] : registry())
    if (k == key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

void assign(RunConfig& cfg, const std::string& line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  try {
    lookup(key).set(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin, RunConfig base) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    assign(base, line, origin + ":" + std::to_string(lineno));
  }
  return base;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  assign(cfg, assignment, "--override");
}

void validate_config(const RunConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.grid.N >= 16, "grid.N must be >= 16 (got " + std::to_string(c.grid.N) + ")");
  require(c.time.dt > 0, "time.dt must be > 0");
  require(c.time.t_end >= 0, "time.t_end must be >= 0");
  require(c.time.t_end == 0 || c.time.dt <= c.time.t_end, "time.dt must not exceed time.t_end");
  require(c.time.output_every >= 0, "time.output_every must be >= 0");
  require(c.grid.pad_tol > 0 && c.grid.pad_tol < 1, "grid.pad_tol must lie in (0, 1)");
  require(c.grid.x_max > c.grid.x_min, "grid.x_min must be < grid.x_max");
  require(c.initial.edge_tol > 0, "initial.edge_tol must be > 0");
  require(c.numerics.tan_clamp > 0, "numerics.tan_clamp must be > 0");
  require(c.numerics.eps_plateau > 0, "numerics.eps_plateau must be > 0");
  require(c.numerics.eps_slope > 0 && c.numerics.eps_slope < 1, "numerics.eps_slope must lie in (0, 1)");
  require(c.numerics.eps_monotone >= 0, "numerics.eps_monotone must be >= 0");
  require(c.numerics.substep_cos_threshold >= 0 && c.numerics.substep_cos_threshold < 1,
          "numerics.substep_cos_threshold must lie in [0, 1)");
  require(c.numerics.breaking_eps > 0 && c.numerics.breaking_eps < 1, "numerics.breaking_eps must lie in (0, 1)");
  require(c.outputs.x_samples >= 2, "outputs.x_samples must be >= 2");
  require(c.verify.convergence_levels >= 2, "verify.convergence_levels must be >= 2");
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  for (const auto& [k, f] : registry()) j[k] = f.get(cfg);
  return j;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, f] : registry()) out.push_back(k);
  return out;
}

}  // namespace chlag
