#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "catsim/catsim.h"

namespace {

struct Config {
  catsim_config* handle = nullptr;
  explicit Config(const char* json) { REQUIRE(catsim_config_parse(json, &handle) == CATSIM_OK); }
  ~Config() { catsim_config_destroy(handle); }
};

struct Simulation {
  catsim_simulation* handle = nullptr;
  explicit Simulation(const Config& c) { REQUIRE(catsim_simulation_create(c.handle, &handle) == CATSIM_OK); }
  ~Simulation() { catsim_simulation_destroy(handle); }
};

}  // namespace

TEST_CASE("version and closed forms") {
  CHECK(std::string(catsim_version()) == "0.1.0");
  double v = 0.0, w = 0.0;
  CHECK(catsim_survival_single(1000.0, 1000.0, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(std::exp(-1.0)));
  CHECK(catsim_decayed_single(887.0, 600.0, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(0.4916).epsilon(1e-3));
  CHECK(catsim_calibrate_mean_life(1e23, 3600.0, &v) == CATSIM_OK);
  CHECK(catsim_sample_branch_norms(1e23, v, 3600.0, &v, &w) == CATSIM_OK);
  CHECK(std::abs(v - 0.5) < 1e-12);
  CHECK(std::abs(w - 0.5) < 1e-12);
  CHECK(catsim_doubling_time(1.0, 5.29177210903e-9, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(9.2e10).epsilon(0.005));
  CHECK(catsim_spread_width(1.0, 1e-19, 0.0, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(1.054571817e-27 / 2e-19));
  CHECK(catsim_ratio_overlap(1e-12, 1e2, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(1e-42).epsilon(1e-15));
  CHECK(catsim_gaussian_branch_overlap(1.0, 1.0, 10.0, &v) == CATSIM_OK);
  CHECK(v == doctest::Approx(std::exp(-12.5)));
  const double fringes[] = {0.0, 1.0, 0.0, 1.0};
  CHECK(catsim_visibility(fringes, 4, 0, 4, &v) == CATSIM_OK);
  CHECK(v == 1.0);
}

TEST_CASE("errors are reported as status codes") {
  double v = 0.0;
  CHECK(catsim_survival_single(-1.0, 1.0, &v) == CATSIM_ERR_ARGUMENT);
  CHECK(std::strlen(catsim_last_error()) > 0);
  CHECK(catsim_survival_single(1.0, 1.0, nullptr) == CATSIM_ERR_ARGUMENT);
  CHECK(catsim_visibility(nullptr, 4, 0, 4, &v) == CATSIM_ERR_ARGUMENT);
  const double one[] = {1.0};
  CHECK(catsim_visibility(one, 1, 0, 2, &v) == CATSIM_ERR_ARGUMENT);

  catsim_config* c = nullptr;
  CHECK(catsim_config_parse(R"({"mean_life": -1, "wavelenght": 1})", &c) == CATSIM_ERR_CONFIG);
  CHECK(c == nullptr);
  const std::string msg = catsim_last_error();
  CHECK(msg.find("mean_life > 0") != std::string::npos);
  CHECK(msg.find("did you mean \"wavelength\"") != std::string::npos);
  CHECK(catsim_config_parse("{}", nullptr) == CATSIM_ERR_ARGUMENT);
  REQUIRE(catsim_config_parse(nullptr, &c) == CATSIM_OK);
  CHECK(std::string(catsim_config_experiment(c)) == "interfere");
  catsim_config_destroy(c);

  catsim_config_destroy(nullptr);
  catsim_result_destroy(nullptr);
  catsim_simulation_destroy(nullptr);
  CHECK(catsim_result_file_count(nullptr) == 0);
  CHECK(catsim_simulation_screen_points(nullptr) == 0);
}

TEST_CASE("config handle") {
  const Config c(R"({"experiment": "neutron", "seed": 3})");
  CHECK(std::string(catsim_config_experiment(c.handle)) == "neutron");
  const std::string resolved = catsim_config_resolved_json(c.handle);
  CHECK(resolved.find("\"seed\": 3") != std::string::npos);
  const Config again(resolved.c_str());
  CHECK(resolved == catsim_config_resolved_json(again.handle));
}

TEST_CASE("run writes files") {
  const auto dir = std::filesystem::temp_directory_path() / "catsim_capi_run";
  std::filesystem::remove_all(dir);
  const Config c(R"({"experiment": "packet-spread"})");
  catsim_result* r = nullptr;
  REQUIRE(catsim_run(c.handle, dir.string().c_str(), &r) == CATSIM_OK);
  CHECK(catsim_result_file_count(r) == 2);
  for (size_t i = 0; i < catsim_result_file_count(r); ++i) CHECK(std::filesystem::exists(catsim_result_file(r, i)));
  CHECK(catsim_result_file(r, 99) == nullptr);
  CHECK(std::string(catsim_result_summary_json(r)).find("doubling_time_s") != std::string::npos);
  catsim_result_destroy(r);

  const Config heavy(R"({"experiment": "decay-stats", "n_nuclei": 1e23, "mean_life": 1})");
  CHECK(catsim_run(heavy.handle, dir.string().c_str(), &r) == CATSIM_ERR_NUMERIC);
  CHECK(r == nullptr);

  // A regular file where the output directory should be.
  const auto blocker = dir / "file";
  { std::FILE* f = std::fopen(blocker.string().c_str(), "w"); std::fclose(f); }
  CHECK(catsim_run(c.handle, (blocker / "sub").string().c_str(), &r) == CATSIM_ERR_IO);
}

TEST_CASE("simulation handle") {
  const Config c(R"({"screen_points": 20001, "phase_policy": "zero", "trials": 4000, "members": 1000})");
  const Simulation sim(c);
  const size_t n = catsim_simulation_screen_points(sim.handle);
  REQUIRE(n == 20001);
  std::vector<double> pos(n), unitary(n), half(n), collapsed(n), mixed(n);
  CHECK(catsim_simulation_positions(sim.handle, pos.data(), n) == CATSIM_OK);
  CHECK(pos.front() == -2.0);
  CHECK(catsim_simulation_positions(sim.handle, pos.data(), n - 1) == CATSIM_ERR_ARGUMENT);

  double a = 0, b = 0;
  CHECK(catsim_simulation_branch_norms(sim.handle, 3600.0, &a, &b) == CATSIM_OK);
  CHECK(std::abs(a - 0.5) < 1e-12);
  CHECK(catsim_simulation_branch_overlap(sim.handle, 3600.0, &a) == CATSIM_OK);
  CHECK(a < 1e-30);
  CHECK(catsim_simulation_branch_norms(sim.handle, -1.0, &a, &b) == CATSIM_ERR_ARGUMENT);
  CHECK(catsim_simulation_collapsed_fraction(sim.handle, 4000, 8, &a) == CATSIM_OK);
  CHECK(std::abs(a - 0.5) < 4.0 * std::sqrt(0.25 / 4000));

  CHECK(catsim_simulation_pattern(sim.handle, CATSIM_PATTERN_UNITARY, unitary.data(), n) == CATSIM_OK);
  CHECK(catsim_simulation_pattern(sim.handle, CATSIM_PATTERN_HALF_SILVERED, half.data(), n) == CATSIM_OK);
  CHECK(catsim_simulation_pattern(sim.handle, CATSIM_PATTERN_COLLAPSED, collapsed.data(), n) == CATSIM_OK);
  CHECK(catsim_simulation_pattern(sim.handle, CATSIM_PATTERN_MIXED, mixed.data(), n) == CATSIM_OK);
  CHECK(catsim_simulation_pattern(sim.handle, static_cast<catsim_pattern_kind>(42), mixed.data(), n) == CATSIM_ERR_ARGUMENT);
  for (size_t i = 0; i < n; i += 17) CHECK(unitary[i] == doctest::Approx(half[i]).epsilon(1e-9));

  double v = 0.0;
  CHECK(catsim_simulation_central_visibility(sim.handle, unitary.data(), n, &v) == CATSIM_OK);
  CHECK(v >= 0.99);
  CHECK(catsim_simulation_central_visibility(sim.handle, collapsed.data(), n, &v) == CATSIM_OK);
  CHECK(v <= 0.02);
  CHECK(catsim_simulation_central_visibility(sim.handle, mixed.data(), n, &v) == CATSIM_OK);
  CHECK(v <= 0.05);
}
