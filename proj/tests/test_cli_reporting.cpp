#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "carroll/report.hpp"

using namespace carroll;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("carrollfluid_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig remark_cfg() {
  RunConfig cfg;
  cfg.gamma = 2.0;
  cfg.preset = "remark-family";
  cfg.preset_params = {{"m", 1.0}, {"theta", 0.5}};
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CARROLLFLUID_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("initial data sources are mutually exclusive") {
  RunConfig cfg = remark_cfg();
  cfg.csv_path = "somewhere.csv";
  CHECK_THROWS_AS(load_initial_data(cfg), ConfigError);
  cfg.preset.clear();
  cfg.csv_path.clear();
  CHECK_THROWS_AS(load_initial_data(cfg), ConfigError);
  CHECK_NOTHROW(load_initial_data(remark_cfg()));
}

TEST_CASE("certify reports admissibility, bounds and the blow-up window") {
  const ordered_json j = certify_report(remark_cfg());
  CHECK(j["tool"] == "carrollfluid");
  CHECK(j["mode"] == "certify");
  CHECK(j["gamma"] == 2.0);
  CHECK(j["admissibility"]["admissible"] == true);
  CHECK(j["region_bounds"]["M1"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(j["region_bounds"]["m2"].get<double>() == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(j.contains("classification"));
  CHECK(j.contains("eigenvalue_envelope"));

  const ordered_json& b = j["blowup"];
  CHECK(b["method"] == "riccati-window");
  CHECK(b["blows_up"] == true);
  CHECK(b["earliest_possible"].get<double>() ==
        doctest::Approx(1.5729032325165739).epsilon(1e-6));
  CHECK(b["earliest_guaranteed"].get<double>() ==
        doctest::Approx(2.1809763415432054).epsilon(1e-6));
  CHECK(b["n_windows"].get<int>() > 0);
}

TEST_CASE("certify reports the closed-form prediction at gamma 3") {
  RunConfig cfg;
  cfg.gamma = 3.0;
  cfg.preset = "arctan-compressive";
  cfg.preset_params = {{"sigma", 2.0}, {"eps", 0.1}};
  const ordered_json j = certify_report(cfg);
  const ordered_json& b = j["blowup"];
  CHECK(b["method"] == "decoupled-exact");
  CHECK(b["blows_up"] == true);
  CHECK(b["t_star"].get<double>() ==
        doctest::Approx(39.899916415720195).epsilon(1e-9));
  CHECK(b["family"] == "both");
  CHECK(b["lipschitz_constant"].get<double>() ==
        doctest::Approx(4.652992541720682).epsilon(1e-12));
}

TEST_CASE("certify never fails on inadmissible data, it reports it") {
  RunConfig cfg;
  cfg.gamma = 2.0;
  cfg.preset = "gaussian-bump";
  cfg.preset_params = {{"sigma", 2.0}, {"a", 8.0}, {"s", 1.0}};
  const ordered_json j = certify_report(cfg);
  CHECK(j["admissibility"]["admissible"] == false);
  CHECK(j.contains("note"));
  CHECK(!j.contains("blowup"));
  std::ostringstream out;
  CHECK(cmd_certify(cfg, out) == 0);
  CHECK(!out.str().empty());
}

TEST_CASE("simulate writes a manifest and certified snapshots") {
  const fs::path dir = fresh_dir("simulate_grid");
  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::grid;
  cfg.t_end = 0.3;
  cfg.snapshot_times = {0.15};
  cfg.nx = 200;
  cfg.out_dir = dir.string();

  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 0);

  const ordered_json m = ordered_json::parse(slurp(dir / "manifest.json"));
  CHECK(m["mode"] == "simulate");
  CHECK(m["all_certificates_pass"] == true);
  CHECK(m["config"]["solver"] == "grid");
  CHECK(m["config"]["boundary"] == "farfield-constant");
  CHECK(m["config"]["gamma"] == 2.0);
  REQUIRE(m["snapshots"].size() == 2);
  CHECK(m["snapshots"][0]["t"].get<double>() == doctest::Approx(0.15));
  CHECK(m["snapshots"][1]["t"].get<double>() == doctest::Approx(0.3));
  for (const auto& snap : m["snapshots"]) {
    const fs::path csv = dir / snap["file"].get<std::string>();
    REQUIRE(fs::exists(csv));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,sigma,beta,w1,w2,lambda1,lambda2");
    CHECK(snap["certificate"]["pass"] == true);
  }
  // the streamed report and the on-disk manifest are the same document
  CHECK(ordered_json::parse(out.str()) == m);
}

TEST_CASE("each solver produces a passing run on its home turf") {
  for (SolverKind solver :
       {SolverKind::exact3, SolverKind::characteristics, SolverKind::grid}) {
    const fs::path dir = fresh_dir("solver_" + solver_name(solver));
    RunConfig cfg;
    cfg.gamma = 3.0;
    cfg.preset = "arctan-rarefactive";
    cfg.preset_params = {{"sigma", 2.0}, {"eps", 0.1}};
    cfg.solver = solver;
    cfg.t_end = 0.5;
    cfg.nx = 128;
    cfg.bundle_dx = 0.1;
    cfg.out_dir = dir.string();
    std::ostringstream out;
    CHECK(cmd_simulate(cfg, out) == 0);
    const ordered_json m = ordered_json::parse(out.str());
    CHECK(m["all_certificates_pass"] == true);
    CHECK(m["config"]["solver"] == solver_name(solver));
  }
}

TEST_CASE("simulate refuses to run into the blow-up margin") {
  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::grid;
  cfg.nx = 64;
  cfg.out_dir = fresh_dir("horizon").string();
  cfg.t_end = 1.6;  // earliest possible blow-up is about 1.573
  CHECK_THROWS_AS(simulate_report(cfg), HorizonError);
  cfg.allow_near_blowup = true;
  CHECK_NOTHROW(simulate_report(cfg));
  cfg.allow_near_blowup = false;
  cfg.t_end = 1.4;
  CHECK_NOTHROW(simulate_report(cfg));
}

TEST_CASE("simulate validates solver and gate up front") {
  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::exact3;  // gamma is 2, not 3
  cfg.t_end = 0.1;
  cfg.out_dir = fresh_dir("badsolver").string();
  CHECK_THROWS_AS(simulate_report(cfg), ConfigError);

  RunConfig bad;
  bad.gamma = 2.0;
  bad.preset = "gaussian-bump";
  bad.preset_params = {{"sigma", 2.0}, {"a", 8.0}, {"s", 1.0}};
  bad.solver = SolverKind::grid;
  bad.t_end = 0.1;
  bad.out_dir = fresh_dir("badgate").string();
  CHECK_THROWS_AS(simulate_report(bad), GateError);

  RunConfig late;
  late.gamma = 3.0;
  late.preset = "arctan-compressive";
  late.preset_params = {{"sigma", 2.0}, {"eps", 0.1}};
  late.solver = SolverKind::exact3;
  late.t_end = 39.0;  // blow-up at 39.9; inside the 5 percent margin
  late.out_dir = fresh_dir("late").string();
  CHECK_THROWS_AS(simulate_report(late), HorizonError);

  RunConfig snaps = remark_cfg();
  snaps.solver = SolverKind::grid;
  snaps.t_end = 0.2;
  snaps.snapshot_times = {0.5};
  snaps.out_dir = fresh_dir("badsnaps").string();
  CHECK_THROWS_AS(simulate_report(snaps), ConfigError);
}

TEST_CASE("an impossible region tolerance turns into exit code 2") {
  const fs::path dir = fresh_dir("exit2");
  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::grid;
  cfg.t_end = 0.2;
  cfg.nx = 64;
  cfg.tol_region = -1.0;  // every finite excess now counts as a violation
  cfg.out_dir = dir.string();
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, out) == 2);
  const ordered_json m = ordered_json::parse(out.str());
  CHECK(m["all_certificates_pass"] == false);
  CHECK(m["snapshots"][0]["certificate"]["n_violations"].get<int>() > 0);
}

TEST_CASE("reports are deterministic") {
  const ordered_json a = certify_report(remark_cfg());
  const ordered_json b = certify_report(remark_cfg());
  CHECK(a.dump() == b.dump());

  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::grid;
  cfg.t_end = 0.2;
  cfg.nx = 64;
  const fs::path dir_a = fresh_dir("det_a");
  const fs::path dir_b = fresh_dir("det_b");
  cfg.out_dir = dir_a.string();
  simulate_report(cfg);
  cfg.out_dir = dir_b.string();
  simulate_report(cfg);
  CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));
  CHECK(slurp(dir_a / "snapshot_000.csv") == slurp(dir_b / "snapshot_000.csv"));
}

TEST_CASE("compare measures errors against the reference run") {
  RunConfig base;
  base.gamma = 3.0;
  base.preset = "arctan-compressive";
  base.preset_params = {{"sigma", 2.0}, {"eps", 0.1}};
  base.t_end = 1.0;

  std::vector<std::string> manifests;
  for (int nx : {100, 200}) {
    RunConfig cfg = base;
    cfg.solver = SolverKind::grid;
    cfg.nx = nx;
    cfg.out_dir = fresh_dir("cmp_grid_" + std::to_string(nx)).string();
    simulate_report(cfg);
    manifests.push_back(cfg.out_dir + "/manifest.json");
  }
  RunConfig ref = base;
  ref.solver = SolverKind::exact3;
  ref.nx = 500;
  ref.out_dir = fresh_dir("cmp_exact").string();
  simulate_report(ref);
  manifests.push_back(ref.out_dir + "/manifest.json");

  CompareOptions opt;
  opt.manifests = manifests;
  opt.window_lo = -10.0;
  opt.window_hi = 10.0;
  const ordered_json j = compare_report(opt);
  CHECK(j["mode"] == "compare");
  CHECK(j["reference"] == manifests.back());
  REQUIRE(j["runs"].size() == 2);

  const ordered_json& coarse = j["runs"][0]["times"][0]["fields"];
  const ordered_json& fine = j["runs"][1]["times"][0]["fields"];
  for (const char* field : {"sigma", "beta", "w1", "w2"}) {
    CHECK(coarse[field]["linf"].get<double>() > 0.0);
    CHECK(fine[field]["linf"].get<double>() <
          coarse[field]["linf"].get<double>());
  }
  REQUIRE(j.contains("convergence"));
  const double order = j["convergence"]["w1"]["order_linf"].get<double>();
  CHECK(order > 0.5);
  CHECK(order < 1.5);
}

TEST_CASE("compare rejects mismatched or damaged inputs") {
  RunConfig cfg = remark_cfg();
  cfg.solver = SolverKind::grid;
  cfg.t_end = 0.2;
  cfg.nx = 64;
  const fs::path dir_a = fresh_dir("mismatch_a");
  cfg.out_dir = dir_a.string();
  simulate_report(cfg);

  const fs::path dir_b = fresh_dir("mismatch_b");
  cfg.gamma = 2.5;
  cfg.out_dir = dir_b.string();
  simulate_report(cfg);

  CompareOptions opt;
  opt.manifests = {(dir_a / "manifest.json").string(),
                   (dir_b / "manifest.json").string()};
  CHECK_THROWS_AS(compare_report(opt), ConfigError);

  // a certify report is not a run manifest
  const fs::path not_manifest = dir_a / "certify.json";
  std::ofstream(not_manifest) << certify_report(remark_cfg()).dump(2);
  CompareOptions wrong;
  wrong.manifests = {not_manifest.string(), (dir_a / "manifest.json").string()};
  CHECK_THROWS_AS(compare_report(wrong), ConfigError);

  // matching config but a corrupted snapshot file
  const fs::path dir_c = fresh_dir("mismatch_c");
  cfg.gamma = 2.0;
  cfg.out_dir = dir_c.string();
  simulate_report(cfg);
  std::ofstream(dir_c / "snapshot_000.csv") << "x,sigma\n1,2\n";
  CompareOptions corrupt;
  corrupt.manifests = {(dir_c / "manifest.json").string(),
                       (dir_a / "manifest.json").string()};
  CHECK_THROWS_AS(compare_report(corrupt), DataError);
}

TEST_CASE("the binary maps outcomes to exit codes") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("") == 1);  // a subcommand is required
  CHECK(run_cli("certify --gamma 2 --preset remark-family") == 0);
  CHECK(run_cli("certify --gamma 2 --preset remark-family --param m=2") == 0);
  CHECK(run_cli("certify --gamma 1 --preset constant") == 1);
  CHECK(run_cli("certify --gamma 2 --preset no-such-preset") == 1);
  CHECK(run_cli("certify --gamma 2 --preset constant --param m=abc") == 1);
  CHECK(run_cli("certify --gamma 2 --preset constant --bogus") == 1);

  const fs::path dir = fresh_dir("cli_sim");
  const std::string out_arg = " --out " + dir.string();
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver grid "
                "--t-end 0.2 --nx 64" + out_arg) == 0);
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver grid "
                "--t-end 0.2 --nx 64 --tol-region -1" + out_arg) == 2);
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver grid "
                "--t-end 1.6 --nx 64" + out_arg) == 1);
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver grid "
                "--t-end 1.6 --nx 64 --allow-near-blowup" + out_arg) == 0);
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver exact3 "
                "--t-end 0.2" + out_arg) == 1);
  CHECK(run_cli("simulate --gamma 2 --preset remark-family --solver grid "
                "--t-end 0.2 --boundary nonsense" + out_arg) == 1);
}
