#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "chlag/commands.hpp"
#include "chlag/errors.hpp"
#include "chlag/io.hpp"

using namespace chlag;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chlag_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig small(const std::string& kind, const fs::path& out) {
  RunConfig c;
  c.initial.kind = kind;
  c.grid.N = 256;
  c.grid.x_min = -10;
  c.grid.x_max = 10;
  c.time.t_end = 0.2;
  c.time.dt = 0.01;
  c.time.output_every = 0.1;
  c.outputs.x_samples = 41;
  c.outputs.directory = out.string();
  return c;
}

int shell(const std::string& args) {
  const int rc = std::system((std::string(CHLAG_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config("# comment\nmodel.preset = constantin_lannes\ngrid.N = 64  # inline\n"
                                   "model.f_coeffs = 0, 1, 2\noutputs.write_frames = false\n");
  CHECK(c.model.preset == "constantin_lannes");
  CHECK(c.grid.N == 64);
  CHECK(c.model.f_coeffs == std::vector<double>{0, 1, 2});
  CHECK_FALSE(c.outputs.write_frames);
  CHECK_THROWS_WITH_AS(parse_config("grid.M = 3"), doctest::Contains("unknown config key 'grid.M'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("grid.N = many"), doctest::Contains("<config>:1"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.N"), ConfigError);
  RunConfig d;
  apply_override(d, "time.dt=0.5");
  CHECK(d.time.dt == 0.5);
  CHECK(to_json(d)["time.dt"] == 0.5);
  CHECK(config_keys().size() == to_json(d).size());
}

TEST_CASE("config validation") {
  RunConfig c;
  c.grid.N = 8;
  CHECK_THROWS_WITH_AS(validate_config(c), doctest::Contains("grid.N"), ConfigError);
  c = RunConfig{};
  c.grid.pad_tol = 1.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = RunConfig{};
  c.time.dt = 0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  CHECK_NOTHROW(validate_config(RunConfig{}));
}

TEST_CASE("run writes frames, diagnostics and metadata") {
  SUBCASE("zero data") {
    const auto dir = scratch("zero");
    std::ostringstream out, err;
    REQUIRE(cmd_run(small("zero", dir), out, err) == kExitOk);
    CHECK(fs::exists(dir / "frame_00000.csv"));
    CHECK(fs::exists(dir / "frame_00002.csv"));
    const std::string frame = slurp(dir / "frame_00001.csv");
    CHECK(frame.rfind("x,u,ux,ux_valid,rho,rho_valid\n", 0) == 0);
    std::istringstream rows(frame);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) CHECK(line.find(",0,0,1,0,1") != std::string::npos);
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    CHECK(meta["E0"] == 0.0);
    CHECK(meta["status"] == "completed");
  }
  SUBCASE("peakon: metadata E0 equals the first diagnostics row") {
    const auto dir = scratch("peakon");
    RunConfig c = small("peakon", dir);
    c.initial.amplitude = 1.0;
    c.grid.N = 4096;
    c.time.t_end = 1.0;
    c.time.dt = 2e-3;
    c.time.output_every = 0.25;
    std::ostringstream out, err;
    REQUIRE(cmd_run(c, out, err) == kExitOk);
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    std::istringstream diag(slurp(dir / "diagnostics.csv"));
    std::string header, first, last, line;
    std::getline(diag, header);
    std::getline(diag, first);
    CHECK(header.rfind("T,energy_lagrangian,energy_drift_rel,residual_uZ", 0) == 0);
    last = first;
    int n = 1;
    while (std::getline(diag, line)) {
      last = line;
      ++n;
    }
    CHECK(n == 5);
    const double e_row = std::stod(first.substr(first.find(',') + 1));
    CHECK(std::abs(meta["E0"].get<double>() - e_row) <= 1e-12);
    std::stringstream ls(last);
    std::string t, e, drift;
    std::getline(ls, t, ',');
    std::getline(ls, e, ',');
    std::getline(ls, drift, ',');
    CHECK(std::stod(drift) <= 1e-4);
  }
  SUBCASE("outputs are deterministic") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream out, err;
    REQUIRE(cmd_run(small("gaussian", a), out, err) == kExitOk);
    REQUIRE(cmd_run(small("gaussian", b), out, err) == kExitOk);
    CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
    CHECK(slurp(a / "frame_00002.csv") == slurp(b / "frame_00002.csv"));
  }
  SUBCASE("invalid config exits with code 2 and names the invariant") {
    RunConfig c = small("zero", scratch("bad"));
    c.grid.N = 8;
    std::ostringstream out, err;
    CHECK(cmd_run(c, out, err) == kExitConfigError);
    CHECK(err.str().find("grid.N must be >= 16") != std::string::npos);
  }
  SUBCASE("from_file data") {
    const auto dir = scratch("file");
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "data.csv");
      f << "x,u,rho\n";
      for (int i = 0; i <= 200; ++i) {
        const double x = -10 + 0.1 * i;
        f << io::fmt(x) << ',' << io::fmt(0.3 * std::exp(-x * x)) << ",0\n";
      }
    }
    RunConfig c = small("from_file", dir / "out");
    c.initial.file = (dir / "data.csv").string();
    std::ostringstream out, err;
    CHECK(cmd_run(c, out, err) == kExitOk);
    c.initial.file = (dir / "missing.csv").string();
    CHECK(cmd_run(c, out, err) == kExitConfigError);
  }
}

TEST_CASE("verify") {
  RunConfig c = small("gaussian", scratch("verify"));
  c.grid.N = 2048;
  c.time.t_end = 0.5;
  c.time.dt = 2e-3;
  std::ostringstream out, err;
  CHECK(cmd_verify(c, out, err) == kExitOk);
  CHECK(out.str().find("FAIL") == std::string::npos);
  SUBCASE("corruption is caught") {
    c.verify.inject_corruption = true;
    std::ostringstream o2, e2;
    CHECK(cmd_verify(c, o2, e2) == kExitVerifyFailed);
    CHECK(o2.str().find("FAIL  residual u_Z") != std::string::npos);
  }
  SUBCASE("halving N grows the residuals by about four") {
    c.time.t_end = 0.2;
    auto residual = [&](long N) {
      RunConfig r = c;
      r.grid.N = N;
      for (const auto& chk : verify_checks(r))
        if (chk.name.rfind("residual u_Z", 0) == 0) return chk.value;
      return 0.0;
    };
    CHECK(residual(1024) / residual(2048) >= 3.0);
  }
}

TEST_CASE("compare") {
  SUBCASE("zero data gives a zero table") {
    for (const auto& r : compare_table(small("zero", scratch("cmp0")))) {
      CHECK(r.u_diff == 0.0);
      CHECK(r.oracle_ok);
    }
  }
  SUBCASE("post-breaking request stops the oracle only") {
    RunConfig c = small("peakon_antipeakon", scratch("cmp1"));
    c.initial.amplitude = 1.0;
    c.grid.x_min = -12;
    c.grid.x_max = 12;
    c.grid.N = 1024;
    c.time.t_end = 2.5;
    c.time.dt = 1e-3;
    c.time.output_every = 0.5;
    std::string guard;
    const auto rows = compare_table(c, &guard);
    CHECK(rows.size() == 6);
    CHECK_FALSE(rows.back().oracle_ok);
    CHECK(guard.find("wave breaking") != std::string::npos);
  }
}

TEST_CASE("convergence") {
  RunConfig c = small("zero", scratch("conv0"));
  for (const auto& r : convergence_table(c)) CHECK(r.error == 0.0);
  c = small("gaussian", scratch("conv1"));
  c.time.t_end = 0.3;
  c.verify.convergence_levels = 4;
  c.grid.N = 128;
  c.time.dt = 0.01;
  const auto rows = convergence_table(c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].N == 128);
  CHECK(rows[3].N == 1024);
  CHECK(rows[0].order >= 1.0);
  CHECK(rows[1].order >= 1.0);
  CHECK(std::isnan(rows[2].order));
  CHECK(std::isnan(rows[3].order));
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "initial.kind = zero\ngrid.N = 64\ntime.t_end = 0.1\ntime.dt = 0.05\ntime.output_every = 0.05\n";
  }
  const std::string cfg = "--config " + (dir / "run.cfg").string();
  CHECK(shell("presets") == 0);
  CHECK(shell("run " + cfg + " --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "diagnostics.csv"));
  CHECK(shell("run " + cfg + " --override grid.N=8 --out " + (dir / "o2").string()) == 2);
  CHECK(shell("run " + cfg + " --override grid.bogus=1") == 2);
  CHECK(shell("run --config " + (dir / "nope.cfg").string()) == 2);
  CHECK(shell("verify " + cfg + " --out " + (dir / "v").string()) == 0);
  CHECK(shell("verify " + cfg + " --override verify.inject_corruption=true --override initial.kind=gaussian --override grid.N=256 --out " +
              (dir / "v2").string()) == 1);
  CHECK(shell("") == 2);
}
