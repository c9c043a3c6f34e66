#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "chlag/config.hpp"

namespace chlag {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfigError = 2, kExitIntegrationError = 3 };

/// Writes frames, diagnostics.csv and metadata.json under
/// cfg.outputs.directory. Partial outputs survive an integration failure.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct VerifyCheck {
  std::string name;
  double value = 0;
  double limit = 0;
  bool pass = false;
};

/// The invariant suite at the configured resolution.
std::vector<VerifyCheck> verify_checks(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct CompareRow {
  double t = 0;
  double u_diff = 0;
  double rho_diff = 0;
  bool oracle_ok = true;
};

/// Lagrangian pipeline against the Eulerian oracle on the oracle grid
/// (grid.N points on [x_min, x_max]). Rows after an oracle blowup carry
/// oracle_ok = false; guard_message records why.
std::vector<CompareRow> compare_table(const RunConfig& cfg, std::string* guard_message = nullptr);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct ConvergenceRow {
  long N = 0;
  double dt = 0;
  double error = 0;  // sup |u - u_finest| at t_end
  double order = std::numeric_limits<double>::quiet_NaN();  // log2(error / next error); NaN where undefined
};

/// Runs N, 2N, ... (verify.convergence_levels levels, dt scaled alike) in
/// parallel and compares u at t_end with the finest level.
std::vector<ConvergenceRow> convergence_table(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_presets(std::ostream& out);

}  // namespace chlag
