// catsim command-line front end. Builds a JSON run configuration from an
// optional config file plus flags and hands it to the C library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catsim/catsim.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int exit_code(catsim_status s) {
  switch (s) {
    case CATSIM_OK:
      return kExitOk;
    case CATSIM_ERR_CONFIG:
    case CATSIM_ERR_ARGUMENT:
      return kExitConfig;
    case CATSIM_ERR_NUMERIC:
      return kExitNumeric;
    default:
      return kExitFailure;
  }
}

// "10000" -> 10000, "1e-3" -> 0.001, "1g" -> "1g"
json scalar_from_text(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  if (text == "null") return nullptr;
  try {
    std::size_t used = 0;
    if (text.find_first_of(".eE") == std::string::npos) {
      const unsigned long long u = std::stoull(text, &used);
      if (used == text.size() && text.front() != '-') return u;
    }
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

struct FlagBinding {
  const char* flag;
  const char* key;
  const char* help;
};

// Flags that map one-to-one onto configuration keys.
constexpr FlagBinding kFlags[] = {
    {"--n-nuclei", "n_nuclei", "number of nuclei in the sample"},
    {"--mean-life", "mean_life", "single-nucleus mean life (s, or e.g. 15min); default calibrates"},
    {"--calibration-horizon", "calibration_horizon", "horizon with 50% decay chance (default 1h)"},
    {"--horizon", "horizon", "observation time (s, or e.g. 1h)"},
    {"--mass", "mirror_mass", "mirror mass (g, or e.g. 1g)"},
    {"--sigma0", "sigma0", "initial mirror spread (cm, or e.g. bohr)"},
    {"--lift", "mirror_lift", "up-site displacement of M2 (cm)"},
    {"--transit-time", "transit_time", "mirror switching time (s)"},
    {"--efficiency", "efficiency", "Geiger counter efficiency"},
    {"--delay", "delay", "Geiger counter delay (s)"},
    {"--phase-policy", "phase_policy", "zero | fixed | random"},
    {"--mode", "mode", "unitary | collapse | half-silvered"},
    {"--trials", "trials", "Monte Carlo trials"},
    {"--wavelength", "wavelength", "laser wavelength (cm, or e.g. 632.8nm)"},
    {"--screen-points", "screen_points", "screen samples"},
    {"--members", "members", "random-phase ensemble size"},
    {"--bound-extent", "bound_extent", "bound-state extent (cm)"},
    {"--spread-extent", "spread_extent", "decay-product extent (cm)"},
    {"--neutron-mean-life", "neutron_mean_life", "neutron mean life (s)"},
    {"--neutron-time", "neutron_time", "neutron observation time (s)"},
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string ensemble_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> hours;
  bool pinned_defaults = false;
  bool include_moving = false;
  bool quiet = false;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;  // key -> flag text
};

json build_config(const std::string& experiment, const Options& opt) {
  json doc = json::object();
  if (!opt.config_path.empty()) {
    if (opt.pinned_defaults) throw CLI::ValidationError("--paper-defaults", "cannot be combined with --config");
    const std::string text = read_file(opt.config_path);
    doc = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    if (!doc.is_object()) throw CLI::ValidationError("--config", "file must hold a JSON object");
  }
  for (const auto& [key, text] : opt.values) doc[key] = scalar_from_text(text);
  if (opt.hours) doc["horizon"] = *opt.hours * 3600.0;
  if (opt.seed) doc["seed"] = *opt.seed;
  if (opt.include_moving) doc["include_moving"] = true;
  if (!opt.ensemble_path.empty()) doc["ensemble"] = json::parse(read_file(opt.ensemble_path));
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got " + kv);
    const std::string value = kv.substr(eq + 1);
    doc[kv.substr(0, eq)] = (!value.empty() && (value.front() == '[' || value.front() == '{'))
                                ? json::parse(value)
                                : scalar_from_text(value);
  }
  if (opt.pinned_defaults) {
    doc["horizon"] = 3600.0;
    doc["calibration_horizon"] = 3600.0;
    doc["mean_life"] = nullptr;
    doc["mirror_mass"] = 1.0;
    doc["sigma0"] = "bohr";
  }
  if (experiment != "validate") doc["experiment"] = experiment;
  return doc;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("CATSIM_OUTPUT_DIR"); env && *env) return env;
  return "catsim-out";
}

int execute(const std::string& experiment, const Options& opt) {
  json doc;
  try {
    doc = build_config(experiment, opt);
  } catch (const json::parse_error& e) {
    std::cerr << "catsim: malformed JSON input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "catsim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "catsim: " << e.what() << '\n';
    return kExitConfig;
  }

  catsim_config* config = nullptr;
  if (const auto s = catsim_config_parse(doc.dump().c_str(), &config); s != CATSIM_OK) {
    std::cerr << "catsim: invalid configuration\n";
    std::istringstream lines(catsim_last_error());
    for (std::string line; std::getline(lines, line);) std::cerr << "  " << line << '\n';
    return exit_code(s);
  }
  std::unique_ptr<catsim_config, decltype(&catsim_config_destroy)> guard(config, catsim_config_destroy);

  if (experiment == "validate") {
    std::cout << catsim_config_resolved_json(config) << '\n';
    return kExitOk;
  }

  catsim_result* result = nullptr;
  const std::string out_dir = opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
  if (const auto s = catsim_run(config, out_dir.c_str(), &result); s != CATSIM_OK) {
    std::cerr << "catsim: " << experiment << " failed: " << catsim_last_error() << '\n';
    return exit_code(s);
  }
  std::unique_ptr<catsim_result, decltype(&catsim_result_destroy)> result_guard(result, catsim_result_destroy);
  if (!opt.quiet) {
    for (std::size_t i = 0; i < catsim_result_file_count(result); ++i) {
      std::cerr << "wrote " << catsim_result_file(result, i) << '\n';
    }
    std::cout << catsim_result_summary_json(result);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catsim: unitary branching vs state-vector collapse in a closed chamber"};
  app.set_version_flag("--version", std::string(catsim_version()));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"decay-stats", "sample decay statistics and 50% calibration"},
      {"packet-spread", "mirror wave-packet spreading and doubling time"},
      {"overlap-scan", "bound-state vs decay-product overlap estimates"},
      {"interfere", "screen pattern under unitary, collapse, or half-silvered mirror"},
      {"montecarlo", "seeded collapse-rule trials"},
      {"density", "mixed-state ensemble patterns"},
      {"neutron", "single neutron after a fixed time"},
      {"validate", "print the resolved configuration and exit"},
  };

  Options opt;
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (default $CATSIM_OUTPUT_DIR or ./catsim-out)");
    sub->add_option("--seed", opt.seed, "run seed");
    sub->add_option("--hours", opt.hours, "observation time in hours");
    sub->add_option("--ensemble", opt.ensemble_path, "JSON ensemble member list")->check(CLI::ExistingFile);
    sub->add_option("--set", opt.sets, "override any configuration key: key=value");
    sub->add_flag("--include-moving", opt.include_moving, "count mid-transit runs as up");
    sub->add_flag("--paper-defaults", opt.pinned_defaults, "pin the one-hour calibrated 1 g / Bohr-radius setup");
    sub->add_flag("-q,--quiet", opt.quiet, "do not print the summary");
    for (const auto& f : kFlags) {
      sub->add_option_function<std::string>(
          f.flag, [&opt, key = std::string(f.key)](const std::string& v) { opt.values[key] = v; }, f.help);
    }
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return execute(chosen, opt);
}
