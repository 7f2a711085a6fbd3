#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "catsim/config.hpp"
#include "catsim/errors.hpp"
#include "catsim/experiments.hpp"

using namespace catsim;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("catsim_experiments_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json run(const std::string& config_text, const std::string& name) {
  const RunResult r = run_experiment(validate_config(config_text), scratch(name));
  for (const auto& f : r.files) CHECK(fs::exists(f));
  const bool written = slurp(r.files.back()) == r.summary_json;
  CHECK(written);
  return json::parse(r.summary_json);
}

}  // namespace

TEST_CASE("decay statistics") {
  const json s = run(R"({"experiment": "decay-stats", "trials": 4000})", "decay");
  CHECK(s["version"] == kVersion);
  CHECK(s["seed"] == 1);
  CHECK(s["config"]["trials"] == 4000);
  const json& r = s["results"];
  CHECK(std::abs(r["intact_norm"].get<double>() - 0.5) < 1e-12);
  CHECK(std::abs(r["monte_carlo_any_decay"]["z_score"].get<double>()) < 4.0);
}

TEST_CASE("neutron") {
  const json r = run(R"({"experiment": "neutron"})", "neutron")["results"];
  CHECK(r["decayed"].get<double>() == doctest::Approx(0.4916).epsilon(1e-3));
  CHECK(r["roughly_half"] == true);
}

TEST_CASE("packet spread") {
  const json r = run(R"({"experiment": "packet-spread", "mirror_mass": "1g", "sigma0": "bohr"})", "spread")["results"];
  CHECK(r["doubling_time_s"].get<double>() == doctest::Approx(9.2e10).epsilon(0.005));
  CHECK(r["dk_below_1e-16"] == true);
}

TEST_CASE("overlap scan") {
  const json r = run(R"({"experiment": "overlap-scan"})", "overlap")["results"];
  CHECK(r["ratio_overlap"].get<double>() == doctest::Approx(1e-42).epsilon(1e-15));
  CHECK(r["quadrature_max_relative_error"].get<double>() < 1e-6);
}

TEST_CASE("interference modes") {
  const json u = run(R"({"experiment": "interfere", "mode": "unitary", "phase_policy": "zero"})", "unitary")["results"];
  CHECK(u["visibility_central"].get<double>() >= 0.99);
  CHECK(u["max_relative_deviation_from_half_silvered"].get<double>() < 1e-9);
  CHECK(u["packet_overlap_modulus"].get<double>() < 1e-30);
  CHECK(std::abs(u["coherent_integral"].get<double>() / u["incoherent_integral"].get<double>() - 1.0) < 0.01);

  const json c = run(R"({"experiment": "interfere", "mode": "collapse", "trials": 2000})", "collapse")["results"];
  CHECK(c["visibility_central"].get<double>() <= 0.02);
  CHECK(std::abs(c["collapsed"]["z_score"].get<double>()) < 4.0);
  CHECK(c["mirror_up"].get<int>() + c["mirror_down"].get<int>() + c["caught_moving"].get<int>() == 2000);

  const json h = run(R"({"experiment": "interfere", "mode": "half-silvered"})", "half")["results"];
  CHECK(h["visibility_central"].get<double>() >= 0.99);
}

TEST_CASE("montecarlo and density") {
  const json m = run(R"({"experiment": "montecarlo", "trials": 2000})", "mc")["results"];
  CHECK(std::abs(m["collapsed"]["z_score"].get<double>()) < 4.0);
  CHECK(m["mean_mirror_position"][2].get<double>() == doctest::Approx(1.0).epsilon(0.1));

  const json d = run(R"({"experiment": "density", "members": 200, "screen_points": 5001})", "density")["results"];
  CHECK(d["visibility_collapsed"].get<double>() <= 0.02);
  CHECK(d["decayed_expectation"][2].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("outputs are a pure function of the configuration") {
  const RunConfig c = validate_config(R"({"experiment": "interfere", "mode": "collapse", "trials": 500, "seed": 4})");
  const RunResult a = run_experiment(c, scratch("repro_a"));
  const RunResult b = run_experiment(c, scratch("repro_b"));
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].filename() == b.files[i].filename());
    const bool identical = slurp(a.files[i]) == slurp(b.files[i]);
    CHECK(identical);
  }
  const RunResult other = run_experiment(validate_config(R"({"experiment": "interfere", "mode": "collapse", "trials": 500, "seed": 5})"),
                                         scratch("repro_c"));
  CHECK_FALSE(slurp(other.files[1]) == slurp(a.files[1]));
}

TEST_CASE("numerical failure surfaces as NumericalError") {
  const RunConfig c = validate_config(R"({"experiment": "decay-stats", "n_nuclei": 1e23, "mean_life": 1})");
  CHECK_THROWS_AS(run_experiment(c, scratch("numeric")), NumericalError);
}
