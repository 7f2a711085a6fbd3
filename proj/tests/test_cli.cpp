#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + CATSIM_CLI_PATH + " " + args + " 2>/dev/null";
  std::FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("catsim_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json results(const Run& r) { return nlohmann::json::parse(r.out)["results"]; }

}  // namespace

TEST_CASE("unitary interference from the command line") {
  const auto dir = scratch("unitary");
  const Run r = cli("interfere --mode unitary --hours 1 --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(results(r)["visibility_central"].get<double>() >= 0.99);
  CHECK(fs::exists(dir / "interfere.csv"));
  CHECK(slurp(dir / "interfere.csv").rfind("position,intensity\n", 0) == 0);
}

TEST_CASE("collapse interference from the command line") {
  const auto dir = scratch("collapse");
  const Run r = cli("interfere --mode collapse --trials 10000 --hours 1 --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto res = results(r);
  CHECK(res["visibility_central"].get<double>() <= 0.02);
  CHECK(std::abs(res["collapsed"]["fraction"].get<double>() - 0.5) < 4.0 * 0.005);
  CHECK(fs::exists(dir / "interfere_outcomes.csv"));
}

TEST_CASE("packet spread with unit-suffixed flags") {
  const Run r = cli("packet-spread --mass 1g --sigma0 bohr --out " + scratch("spread").string());
  REQUIRE(r.code == 0);
  CHECK(results(r)["doubling_time_s"].get<double>() == doctest::Approx(9.2e10).epsilon(0.005));
}

TEST_CASE("every experiment is byte-reproducible") {
  const char* runs[] = {"decay-stats --trials 2000",
                        "neutron",
                        "packet-spread",
                        "overlap-scan",
                        "interfere --mode collapse --trials 3000",
                        "interfere --phase-policy random --seed 12",
                        "montecarlo --trials 3000",
                        "density --members 100 --screen-points 2001"};
  int k = 0;
  for (const char* args : runs) {
    CAPTURE(args);
    const auto a = scratch("repro_a" + std::to_string(k));
    const auto b = scratch("repro_b" + std::to_string(k));
    ++k;
    const Run ra = cli(std::string(args) + " --out " + a.string());
    const Run rb = cli(std::string(args) + " --out " + b.string());
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out == rb.out);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const bool identical = slurp(entry.path()) == slurp(b / entry.path().filename());
      CHECK(identical);
    }
    CHECK(files >= 2);
  }
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("env");
  const Run r = cli("neutron -q", "CATSIM_OUTPUT_DIR=" + dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(fs::exists(dir / "neutron_summary.json"));
}

TEST_CASE("configuration files, overrides and pinned defaults") {
  const auto dir = scratch("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"experiment": "neutron", "neutron_time": "10min", "seed": 5})";
  }
  Run r = cli("neutron --config " + (dir / "run.json").string() + " --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["seed"] == 5);
  CHECK(results(r)["time"] == 600.0);

  r = cli("validate --set horizon=2h --set fixed_phases=[0.5,1.0] --members 12");
  REQUIRE(r.code == 0);
  const auto resolved = nlohmann::json::parse(r.out);
  CHECK(resolved["horizon"] == 7200.0);
  CHECK(resolved["fixed_phases"][1] == 1.0);
  CHECK(resolved["members"] == 12);

  r = cli("validate --paper-defaults --set mirror_mass=5 --horizon 10");
  REQUIRE(r.code == 0);
  const auto pinned = nlohmann::json::parse(r.out);
  CHECK(pinned["mirror_mass"] == 1.0);
  CHECK(pinned["horizon"] == 3600.0);
  CHECK(pinned["mean_life"].is_null());
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(cli("validate").code == 0);
  CHECK(cli("interfere --wavelength -1 --out " + dir.string()).code == 2);
  CHECK(cli("interfere --set wavelenght=1e-5 --out " + dir.string()).code == 2);
  CHECK(cli("interfere --mean-life -1 --out " + dir.string()).code == 2);
  CHECK(cli("interfere --mode quantum").code == 2);
  CHECK(cli("interfere --no-such-flag").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("interfere --set novalue").code == 2);
  {
    std::ofstream f(dir / "broken.json");
    f << "{\n  \"seed\": \n}";
  }
  CHECK(cli("interfere --config " + (dir / "broken.json").string()).code == 2);
  {
    std::ofstream f(dir / "ok.json");
    f << "{}";
  }
  CHECK(cli("interfere --paper-defaults --config " + (dir / "ok.json").string()).code == 2);
  CHECK(cli("decay-stats --n-nuclei 1e23 --mean-life 1 --out " + dir.string()).code == 3);
  CHECK(cli("--version").code == 0);
  CHECK(cli("--help").code == 0);
}
