#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef MINAREA_BIN_PATH
#define MINAREA_BIN_PATH "./minarea"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

int counter = 0;

CliResult run_cli(const std::string& args) {
  const std::string out_path = "minarea_cli_out_" + std::to_string(counter++) + ".txt";
  const std::string cmd =
      std::string(MINAREA_BIN_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_path);
  result.out.assign(std::istreambuf_iterator<char>(f), {});
  std::remove(out_path.c_str());
  return result;
}

}  // namespace

TEST_CASE("field eval prints the field and exit codes follow the contract") {
  const CliResult r = run_cli("field eval --k 2 --y 0,0,0 --x 0.5,0,0");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["W"][0].get<double>() == -0.75);
  CHECK(j["W"][1].get<double>() == 0.0);
  CHECK(j["schema_version"] == 1);

  // boundary point: the field vanishes
  const CliResult rb = run_cli("field eval --k 3 --y 0.3,0,0 --x 1,0,0");
  REQUIRE(rb.exit_code == 0);
  const nlohmann::json jb = nlohmann::json::parse(rb.out);
  for (const auto& c : jb["W"]) CHECK(std::abs(c.get<double>()) <= 1e-12);

  // frame enables the divergence fields
  const CliResult rf =
      run_cli("field eval --k 2 --y 0,0,0 --x 0.5,0,0 --frame \"0,1,0;0,0,1\"");
  REQUIRE(rf.exit_code == 0);
  const nlohmann::json jf = nlohmann::json::parse(rf.out);
  CHECK(jf["div"].get<double>() == -3.0);
  CHECK(jf["deficit"].get<double>() == 4.0);

  // usage error: missing required flag
  CHECK(run_cli("field eval --y 0,0,0 --x 0.5,0,0").exit_code == 2);
  // singular point: x = y
  CHECK(run_cli("field eval --k 2 --y 0,0,0 --x 0,0,0").exit_code == 2);
  // dimension mismatch
  CHECK(run_cli("field eval --k 2 --y 0,0 --x 0.5,0,0").exit_code == 2);
}

TEST_CASE("fuzz runs are seeded and deterministic") {
  const std::string args = "field fuzz --seed 7 --samples 2000";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);  // byte-identical reports
  const nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(j["min_deficit"].get<double>() >= -1e-10);
  CHECK(j["fd_max_rel_err"].get<double>() <= 1e-6);
  CHECK(j["pass"] == true);

  // the seed is mandatory
  CHECK(run_cli("field fuzz --samples 100").exit_code == 2);
}

TEST_CASE("surface catalog answers") {
  const CliResult disk = run_cli("surface --family flatdisk --d 0.6");
  REQUIRE(disk.exit_code == 0);
  CHECK(nlohmann::json::parse(disk.out)["area"].get<double>() ==
        doctest::Approx(2.0106192982974678).epsilon(1e-15));

  const CliResult cone = run_cli("surface --family cone");
  REQUIRE(cone.exit_code == 0);
  CHECK(nlohmann::json::parse(cone.out)["area"].get<double>() ==
        doctest::Approx(6.5797362673929057).epsilon(1e-15));

  const CliResult cat = run_cli("surface --family catenoid --c 0.9");
  REQUIRE(cat.exit_code == 0);  // admissible: the height root exists
  CHECK(nlohmann::json::parse(cat.out)["z1"].get<double>() ==
        doctest::Approx(0.30526320700163504).epsilon(1e-14));

  // inadmissible waist radius: no root
  CHECK(run_cli("surface --family catenoid --c 1.0").exit_code == 2);
  CHECK(run_cli("surface --family nosuch").exit_code == 2);
}

TEST_CASE("solve and verify round trip through files") {
  const CliResult exp = run_cli(
      "surface --family flatdisk --y 0,0,0.6 --export cli_disk.obj --resolution 12 "
      "--perturb 0.05 --seed 11");
  REQUIRE(exp.exit_code == 0);

  const CliResult solve =
      run_cli("solve --input cli_disk.obj --mesh-out cli_disk_solved.obj");
  REQUIRE(solve.exit_code == 0);
  const nlohmann::json js = nlohmann::json::parse(solve.out);
  CHECK(js["converged"] == true);
  CHECK(js["final_area"].get<double>() ==
        doctest::Approx(M_PI * 0.64).epsilon(5e-3));
  CHECK(js["max_boundary_deviation"].get<double>() <= 1e-9);

  const CliResult verify = run_cli("verify --input cli_disk_solved.obj");
  REQUIRE(verify.exit_code == 0);
  const nlohmann::json jv = nlohmann::json::parse(verify.out);
  CHECK(jv["checks"]["bound"]["pass"] == true);
  CHECK(jv["checks"]["equality"]["is_equality_case"] == true);

  // unconverged solve exits 1
  const CliResult stuck = run_cli("solve --input cli_disk.obj --iters 2");
  CHECK(stuck.exit_code == 1);
  CHECK(nlohmann::json::parse(stuck.out)["converged"] == false);

  // malformed mesh exits 2
  {
    std::ofstream f("cli_bad.obj");
    f << "v 0 0 0\nf 1 2 9\n";
  }
  CHECK(run_cli("solve --input cli_bad.obj").exit_code == 2);
  std::remove("cli_bad.obj");
  std::remove("cli_disk.obj");
  std::remove("cli_disk.obj.json");
  std::remove("cli_disk_solved.obj");
  std::remove("cli_disk_solved.obj.json");
}

TEST_CASE("verify subcommand verdicts and outputs") {
  // equality case: everything passes
  const CliResult eq = run_cli("verify --family flatdisk --y 0,0,0.6 --out cli_eq.json");
  REQUIRE(eq.exit_code == 0);
  const nlohmann::json je = nlohmann::json::parse(eq.out);
  CHECK(je["margin"].get<double>() == 0.0);
  CHECK(je["checks"]["equality"]["is_equality_case"] == true);
  {
    std::ifstream f("cli_eq.json");
    std::string file_copy(std::istreambuf_iterator<char>(f), {});
    CHECK(file_copy == eq.out);  // --out mirrors stdout
  }
  std::remove("cli_eq.json");

  // catenoid passes with a strictly positive margin
  const CliResult cat = run_cli("verify --family catenoid --c 0.5 --csv cli_cat.csv");
  REQUIRE(cat.exit_code == 0);
  CHECK(nlohmann::json::parse(cat.out)["margin"].get<double>() > 0);
  {
    std::ifstream f("cli_cat.csv");
    std::string csv(std::istreambuf_iterator<char>(f), {});
    CHECK(csv.rfind("r,flux\n", 0) == 0);
  }
  std::remove("cli_cat.csv");

  // the singular cone fails its flux-limit check: exit 1, report still written
  const CliResult cone = run_cli("verify --family cone");
  CHECK(cone.exit_code == 1);
  const nlohmann::json jc = nlohmann::json::parse(cone.out);
  CHECK(jc["checks"]["bound"]["pass"] == true);
  CHECK(jc["checks"]["flux_limit"]["pass"] == false);

  // hypothesis violation: disk that does not pass through y
  CHECK(run_cli("verify --family flatdisk --y 0,0,0.5 --plane-point 0,0,0 "
                "--plane-frame \"1,0,0;0,1,0\"")
            .exit_code == 2);

  // determinism: repeated runs are byte-identical
  const CliResult c1 = run_cli("verify --family catenoid --c 0.5");
  const CliResult c2 = run_cli("verify --family catenoid --c 0.5");
  CHECK(c1.out == c2.out);
}
