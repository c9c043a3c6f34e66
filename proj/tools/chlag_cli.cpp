#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chlag/commands.hpp"
#include "chlag/errors.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value config file");
  sub->add_option("--out", c.out, "output directory (overrides outputs.directory)");
  sub->add_option("--override", c.overrides, "key=value assignment, repeatable")->take_all()->allow_extra_args(false);
}

chlag::RunConfig resolve(const Common& c) {
  chlag::RunConfig cfg = c.config.empty() ? chlag::RunConfig{} : chlag::load_config(c.config);
  for (const auto& kv : c.overrides) chlag::apply_override(cfg, kv);
  if (!c.out.empty()) cfg.outputs.directory = c.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative Lagrangian solver for Camassa-Holm type systems"};
  app.require_subcommand(1);
  Common common;
  auto* run = app.add_subcommand("run", "integrate a scenario and write frames, diagnostics and metadata");
  auto* verify = app.add_subcommand("verify", "run the invariant suite and report pass/fail");
  auto* compare = app.add_subcommand("compare", "compare against the Eulerian oracle before breaking");
  auto* convergence = app.add_subcommand("convergence", "refinement study at N, 2N, 4N");
  app.add_subcommand("presets", "list the built-in flux models");
  for (auto* s : {run, verify, compare, convergence}) add_common(s, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : chlag::kExitConfigError;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "presets") return chlag::cmd_presets(std::cout);

  chlag::RunConfig cfg;
  try {
    cfg = resolve(common);
  } catch (const chlag::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return chlag::kExitConfigError;
  }
  if (name == "run") return chlag::cmd_run(cfg, std::cout, std::cerr);
  if (name == "verify") return chlag::cmd_verify(cfg, std::cout, std::cerr);
  if (name == "compare") return chlag::cmd_compare(cfg, std::cout, std::cerr);
  return chlag::cmd_convergence(cfg, std::cout, std::cerr);
}
