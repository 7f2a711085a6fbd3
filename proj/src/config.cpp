#include "catsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>

#include <json.hpp>

#include "catsim/errors.hpp"
#include "catsim/units.hpp"

namespace catsim {
namespace {

using json = nlohmann::json;

enum class Dim { time, mass, length, none };

struct UnitEntry {
  const char* suffix;
  Dim dim;
  double scale;
};

constexpr UnitEntry kUnits[] = {
    {"s", Dim::time, 1.0},
    {"ms", Dim::time, 1e-3},
    {"min", Dim::time, 60.0},
    {"h", Dim::time, units::hour},
    {"yr", Dim::time, units::julian_year},
    {"g", Dim::mass, 1.0},
    {"kg", Dim::mass, 1e3},
    {"mg", Dim::mass, 1e-3},
    {"cm", Dim::length, 1.0},
    {"m", Dim::length, 1e2},
    {"mm", Dim::length, 1e-1},
    {"um", Dim::length, 1e-4},
    {"nm", Dim::length, units::nanometer},
    {"fm", Dim::length, 1e-13},
    {"bohr", Dim::length, units::bohr_radius},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::time:
      return "time (s, ms, min, h, yr)";
    case Dim::mass:
      return "mass (g, kg, mg)";
    case Dim::length:
      return "length (cm, m, mm, um, nm, fm, bohr)";
    case Dim::none:
      return "number";
  }
  return "";
}

// Number, or a string "<number><unit>" / "<unit>" (e.g. "1g", "bohr", "1h").
std::optional<double> parse_quantity(const json& v, Dim dim) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string() || dim == Dim::none) return std::nullopt;
  const std::string text = v.get<std::string>();
  const char* begin = text.c_str();
  char* rest = nullptr;
  double magnitude = std::strtod(begin, &rest);
  if (rest == begin) magnitude = 1.0;  // bare unit
  std::string unit(rest);
  unit.erase(std::remove(unit.begin(), unit.end(), ' '), unit.end());
  if (unit.empty()) return magnitude;
  for (const auto& u : kUnits) {
    if (u.dim == dim && unit == u.suffix) return magnitude * u.scale;
  }
  return std::nullopt;
}

struct Parser {
  std::vector<Diagnostic> diags;

  void fail(const std::string& key, const std::string& msg) { diags.push_back({key, msg}); }

  std::optional<double> number(const std::string& key, const json& v, Dim dim = Dim::none) {
    auto q = parse_quantity(v, dim);
    if (!q || !std::isfinite(*q)) {
      fail(key, std::string("expected a ") + dim_name(dim));
      return std::nullopt;
    }
    return q;
  }

  void positive(const std::string& key, const json& v, double& out, Dim dim) {
    if (auto q = number(key, v, dim)) {
      if (*q > 0.0) out = *q;
      else fail(key, key + " > 0");
    }
  }

  void non_negative(const std::string& key, const json& v, double& out, Dim dim) {
    if (auto q = number(key, v, dim)) {
      if (*q >= 0.0) out = *q;
      else fail(key, key + " >= 0");
    }
  }

  void count(const std::string& key, const json& v, std::size_t& out, std::size_t min) {
    if (auto q = number(key, v)) {
      if (*q >= static_cast<double>(min) && std::floor(*q) == *q && *q < 1e15) {
        out = static_cast<std::size_t>(*q);
      } else {
        fail(key, key + " must be an integer >= " + std::to_string(min));
      }
    }
  }

  void boolean(const std::string& key, const json& v, bool& out) {
    if (v.is_boolean()) out = v.get<bool>();
    else fail(key, "expected true or false");
  }

  void vec3(const std::string& key, const json& v, Vec3& out) {
    if (v.is_array() && v.size() == 3 && std::all_of(v.begin(), v.end(), [](const json& e) {
          return e.is_number();
        })) {
      out = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    } else {
      fail(key, "expected [x, y, z] in cm");
    }
  }

  template <class E>
  void choice(const std::string& key, const json& v, E& out,
              const std::vector<std::pair<const char*, E>>& options) {
    std::string allowed;
    if (v.is_string()) {
      for (const auto& [name, value] : options) {
        if (v.get<std::string>() == name) {
          out = value;
          return;
        }
      }
    }
    for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    fail(key, "expected one of: " + allowed);
  }
};

const std::vector<std::pair<const char*, Experiment>> kExperiments = {
    {"decay-stats", Experiment::decay_stats}, {"packet-spread", Experiment::packet_spread},
    {"overlap-scan", Experiment::overlap_scan}, {"interfere", Experiment::interfere},
    {"montecarlo", Experiment::montecarlo},   {"density", Experiment::density},
    {"neutron", Experiment::neutron}};

const std::vector<std::pair<const char*, PhasePolicy::Kind>> kPhasePolicies = {
    {"zero", PhasePolicy::Kind::zero}, {"fixed", PhasePolicy::Kind::fixed}, {"random", PhasePolicy::Kind::random}};

const std::vector<std::pair<const char*, InterfereMode>> kModes = {
    {"unitary", InterfereMode::unitary}, {"collapse", InterfereMode::collapse},
    {"half-silvered", InterfereMode::half_silvered}};

const std::vector<std::pair<const char*, MirrorSetting>> kMirrorSettings = {
    {"down_full", MirrorSetting::down_full}, {"up", MirrorSetting::up}, {"down_half", MirrorSetting::down_half}};

template <class E>
const char* name_of(E value, const std::vector<std::pair<const char*, E>>& options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "?";
}

using Handler = std::function<void(Parser&, RunConfig&, const std::string&, const json&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"experiment", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.choice(k, v, c.experiment, kExperiments); }},
      {"n_nuclei", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (auto q = p.number(k, v)) {
           if (*q >= 1.0 && std::floor(*q) == *q) c.n_nuclei = *q;
           else p.fail(k, "n_nuclei must be an integer >= 1");
         }
       }},
      {"mean_life", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (v.is_null()) {
           c.mean_life.reset();
           return;
         }
         double tau = 0.0;
         p.positive(k, v, tau, Dim::time);
         if (tau > 0.0) c.mean_life = tau;
       }},
      {"calibration_horizon", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.calibration_horizon, Dim::time); }},
      {"horizon", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.non_negative(k, v, c.horizon, Dim::time); }},
      {"mirror_mass", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.mirror_mass, Dim::mass); }},
      {"sigma0", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.sigma0, Dim::length); }},
      {"mirror_lift", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.mirror_lift, Dim::length); }},
      {"transit_time", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.transit_time, Dim::time); }},
      {"efficiency", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (auto q = p.number(k, v)) {
           if (*q >= 0.0 && *q <= 1.0) c.efficiency = *q;
           else p.fail(k, "0 <= efficiency <= 1");
         }
       }},
      {"delay", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.non_negative(k, v, c.delay, Dim::time); }},
      {"imperfect_shielding", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.boolean(k, v, c.imperfect_shielding); }},
      {"phase_policy", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.choice(k, v, c.phase_policy, kPhasePolicies); }},
      {"fixed_phases", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
           c.fixed_phases = {v[0].get<double>(), v[1].get<double>()};
         } else {
           p.fail(k, "expected [intact_phase, decayed_phase] in radians");
         }
       }},
      {"mode", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.choice(k, v, c.mode, kModes); }},
      {"trials", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.count(k, v, c.trials, 1); }},
      {"include_moving", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.boolean(k, v, c.include_moving); }},
      {"laser_pos", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.vec3(k, v, c.optics.laser_pos); }},
      {"m1_pos", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.vec3(k, v, c.optics.m1_pos); }},
      {"m2_pos", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.vec3(k, v, c.optics.m2_pos); }},
      {"screen_origin", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.vec3(k, v, c.optics.screen_origin); }},
      {"screen_axis", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         Vec3 axis = c.optics.screen_axis;
         p.vec3(k, v, axis);
         if (axis.norm() > 0.0) c.optics.screen_axis = axis * (1.0 / axis.norm());
         else p.fail(k, "screen_axis must be non-zero");
       }},
      {"wavelength", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.optics.wavelength, Dim::length); }},
      {"m2_state", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.choice(k, v, c.optics.m2_state, kMirrorSettings); }},
      {"screen_half_width", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.optics.screen_half_width, Dim::length); }},
      {"screen_points", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.count(k, v, c.optics.screen_points, 2); }},
      {"central_fraction", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (auto q = p.number(k, v)) {
           if (*q > 0.0 && *q <= 1.0) c.optics.central_fraction = *q;
           else p.fail(k, "0 < central_fraction <= 1");
         }
       }},
      {"members", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.count(k, v, c.members, 1); }},
      {"max_members", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.count(k, v, c.max_members, 1); }},
      {"ensemble", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (v.is_null()) {
           c.ensemble.reset();
           return;
         }
         try {
           c.ensemble = parse_ensemble_spec(v.dump());
         } catch (const ConfigError& e) {
           for (const auto& d : e.diagnostics()) p.diags.push_back(d);
         }
         (void)k;
       }},
      {"bound_extent", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.bound_extent, Dim::length); }},
      {"spread_extent", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.spread_extent, Dim::length); }},
      {"scan_points", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.count(k, v, c.scan_points, 2); }},
      {"neutron_mean_life", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.positive(k, v, c.neutron_mean_life, Dim::time); }},
      {"neutron_time", [](Parser& p, RunConfig& c, const std::string& k, const json& v) { p.non_negative(k, v, c.neutron_time, Dim::time); }},
      {"seed", [](Parser& p, RunConfig& c, const std::string& k, const json& v) {
         if (v.is_number_unsigned()) c.seed = v.get<std::uint64_t>();
         else p.fail(k, "seed must be a non-negative integer");
       }},
  };
  return table;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

const char* to_string(Experiment e) { return name_of(e, kExperiments); }

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [n, e] : kExperiments) {
    if (name == n) return e;
  }
  return std::nullopt;
}

double RunConfig::resolved_mean_life() const {
  return mean_life ? *mean_life : calibrate_mean_life(n_nuclei, calibration_horizon).mean_life();
}

Chamber RunConfig::chamber() const {
  Chamber c{Sample(n_nuclei, DecayLaw(resolved_mean_life())),
            GaussianPacket::from_sigma0(mirror_mass, sigma0, optics.m2_pos),
            Trajectory{optics.m2_pos, optics.m2_pos + Vec3{0.0, 0.0, mirror_lift}, transit_time},
            DetectorModel{efficiency, delay},
            PhasePolicy{phase_policy, fixed_phases, seed},
            imperfect_shielding};
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, h] : handlers()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

std::string nearest_key(std::string_view unknown) {
  std::string best;
  std::size_t best_d = 3;
  for (const auto& k : config_keys()) {
    const std::size_t d = edit_distance(unknown, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

RunConfig validate_config(std::string_view json_text) {
  json doc;
  const bool blank = std::all_of(json_text.begin(), json_text.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", "line " + std::to_string(line_of(json_text, e.byte)) + ": malformed JSON (" + e.what() + ")");
    }
  }
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");

  RunConfig config;
  Parser parser;
  const auto& table = handlers();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) {
      std::string msg = "unknown key";
      if (auto hint = nearest_key(key); !hint.empty()) msg += " (did you mean \"" + hint + "\"?)";
      parser.fail(key, msg);
      continue;
    }
    it->second(parser, config, key, value);
  }

  if (config.spread_extent < config.bound_extent) {
    parser.fail("spread_extent", "bound_extent <= spread_extent");
  }
  if (config.members > config.max_members) parser.fail("members", "members <= max_members");
  if (config.ensemble) {
    if (config.ensemble->size() > config.max_members) parser.fail("ensemble", "member count <= max_members");
    double total = 0.0;
    for (const auto& m : *config.ensemble) total += m.weight;
    if (std::abs(total - 1.0) > 1e-12) parser.fail("ensemble", "member weights sum to 1");
  }
  try {
    validate(config.optics);
  } catch (const DomainError& e) {
    parser.fail("optics", e.what());
  }
  if (parser.diags.empty()) {
    try {
      (void)config.chamber();
    } catch (const DomainError& e) {
      parser.fail("chamber", e.what());
    }
  }
  if (!parser.diags.empty()) throw ConfigError(std::move(parser.diags));
  return config;
}

std::string resolved_json(const RunConfig& c) {
  auto vec = [](const Vec3& v) { return json::array({v.x, v.y, v.z}); };
  json j;
  j["experiment"] = to_string(c.experiment);
  j["n_nuclei"] = c.n_nuclei;
  j["mean_life"] = c.mean_life ? json(*c.mean_life) : json(nullptr);
  j["calibration_horizon"] = c.calibration_horizon;
  j["horizon"] = c.horizon;
  j["mirror_mass"] = c.mirror_mass;
  j["sigma0"] = c.sigma0;
  j["mirror_lift"] = c.mirror_lift;
  j["transit_time"] = c.transit_time;
  j["efficiency"] = c.efficiency;
  j["delay"] = c.delay;
  j["imperfect_shielding"] = c.imperfect_shielding;
  j["phase_policy"] = name_of(c.phase_policy, kPhasePolicies);
  j["fixed_phases"] = json::array({c.fixed_phases[0], c.fixed_phases[1]});
  j["mode"] = name_of(c.mode, kModes);
  j["trials"] = c.trials;
  j["include_moving"] = c.include_moving;
  j["laser_pos"] = vec(c.optics.laser_pos);
  j["m1_pos"] = vec(c.optics.m1_pos);
  j["m2_pos"] = vec(c.optics.m2_pos);
  j["screen_origin"] = vec(c.optics.screen_origin);
  j["screen_axis"] = vec(c.optics.screen_axis);
  j["wavelength"] = c.optics.wavelength;
  j["m2_state"] = name_of(c.optics.m2_state, kMirrorSettings);
  j["screen_half_width"] = c.optics.screen_half_width;
  j["screen_points"] = c.optics.screen_points;
  j["central_fraction"] = c.optics.central_fraction;
  j["members"] = c.members;
  j["max_members"] = c.max_members;
  if (c.ensemble) {
    json arr = json::array();
    for (const auto& m : *c.ensemble) {
      arr.push_back({{"weight", m.weight}, {"phase_seed", m.phase_seed}, {"trajectory_perturbation", vec(m.trajectory_perturbation)}});
    }
    j["ensemble"] = arr;
  } else {
    j["ensemble"] = nullptr;
  }
  j["bound_extent"] = c.bound_extent;
  j["spread_extent"] = c.spread_extent;
  j["scan_points"] = c.scan_points;
  j["neutron_mean_life"] = c.neutron_mean_life;
  j["neutron_time"] = c.neutron_time;
  j["seed"] = c.seed;
  return j.dump(2);
}

}  // namespace catsim
