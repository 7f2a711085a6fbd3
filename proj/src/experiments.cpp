#include "catsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "catsim/decay.hpp"
#include "catsim/errors.hpp"
#include "catsim/overlap.hpp"
#include "catsim/quadrature.hpp"
#include "catsim/wavepacket.hpp"

namespace catsim {
namespace {

using json = nlohmann::json;

struct Output {
  json results = json::object();
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) {
    if (!row.empty()) row += ',';
    row += fmt17(v);
  }
  return row + '\n';
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

json fraction_stats(std::size_t hits, std::size_t n, double expected) {
  const double f = static_cast<double>(hits) / static_cast<double>(n);
  const double sigma = binomial_sigma(expected, n);
  return {{"count", hits},
          {"trials", n},
          {"fraction", f},
          {"expected", expected},
          {"binomial_sigma", sigma},
          {"z_score", sigma > 0.0 ? (f - expected) / sigma : 0.0}};
}

Output decay_stats(const RunConfig& c) {
  Output out;
  const Chamber chamber = c.chamber();
  const Sample& sample = chamber.sample;
  const double t_end = 2.0 * std::max(c.horizon, 1.0);
  std::string csv = "t,survival_single,decayed_single,intact_norm,decayed_norm\n";
  constexpr int kSteps = 240;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = t_end * i / kSteps;
    const BranchNorms n = sample_branch_norms(sample, t);
    csv += csv_row({t, survival_single(sample.law(), t), decayed_single(sample.law(), t), n.intact, n.decayed});
  }
  out.files.emplace_back("decay_stats.csv", std::move(csv));

  const BranchNorms at = sample_branch_norms(sample, c.horizon);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < c.trials; ++i) {
    if (!sample_decay_events(sample, c.horizon, derive_seed(c.seed, i)).empty()) ++hits;
  }
  out.results = {{"n_nuclei", sample.n_nuclei()},
                 {"mean_life", sample.law().mean_life()},
                 {"calibrated", !c.mean_life.has_value()},
                 {"horizon", c.horizon},
                 {"survival_single_at_horizon", survival_single(sample.law(), c.horizon)},
                 {"intact_norm", at.intact},
                 {"decayed_norm", at.decayed},
                 {"norm_sum", at.intact + at.decayed},
                 {"monte_carlo_any_decay", fraction_stats(hits, c.trials, at.decayed)}};
  return out;
}

Output neutron(const RunConfig& c) {
  Output out;
  const DecayLaw law(c.neutron_mean_life);
  std::string csv = "t,survival,decayed\n";
  const double t_end = 3.0 * std::max(c.neutron_time, 1.0);
  constexpr int kSteps = 180;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = t_end * i / kSteps;
    csv += csv_row({t, survival_single(law, t), decayed_single(law, t)});
  }
  out.files.emplace_back("neutron.csv", std::move(csv));
  const double decayed = decayed_single(law, c.neutron_time);
  out.results = {{"mean_life", c.neutron_mean_life},
                 {"time", c.neutron_time},
                 {"survival", survival_single(law, c.neutron_time)},
                 {"decayed", decayed},
                 {"roughly_half", decayed >= 0.45 && decayed <= 0.55}};
  return out;
}

Output packet_spread(const RunConfig& c) {
  Output out;
  const GaussianPacket packet = GaussianPacket::from_sigma0(c.mirror_mass, c.sigma0);
  const double t_double = doubling_time(c.mirror_mass, c.sigma0);
  std::string csv = "t,sigma,sigma_ratio\n";
  // Log grid from 1 s to 100 doubling times.
  const double lo = 0.0;
  const double hi = std::log10(std::max(100.0 * t_double, 10.0));
  constexpr int kSteps = 160;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = std::pow(10.0, lo + (hi - lo) * i / kSteps);
    const double sigma = spread_width(packet, t);
    csv += csv_row({t, sigma, sigma / packet.sigma0()});
  }
  out.files.emplace_back("packet_spread.csv", std::move(csv));
  out.results = {{"mass", c.mirror_mass},
                 {"sigma0", packet.sigma0()},
                 {"dk", packet.dk},
                 {"dk_below_1e-16", packet.dk < 1e-16},
                 {"doubling_time_s", t_double},
                 {"doubling_time_years", t_double / units::julian_year},
                 {"sigma_at_doubling_ratio", spread_width(packet, t_double) / packet.sigma0()},
                 {"horizon", c.horizon},
                 {"relative_growth_at_horizon", spread_width(packet, c.horizon) / packet.sigma0() - 1.0}};
  return out;
}

Output overlap_scan(const RunConfig& c) {
  Output out;
  std::string csv = "spread_extent,ratio_overlap,gaussian_overlap,gaussian_overlap_quadrature\n";
  const double lo = std::log10(c.bound_extent);
  const double hi = std::log10(c.spread_extent);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.scan_points; ++i) {
    const double spread = i + 1 == c.scan_points
                              ? c.spread_extent
                              : std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c.scan_points - 1));
    const double ratio = ratio_overlap({c.bound_extent, spread});
    const double analytic = gaussian_branch_overlap(c.bound_extent, spread, 0.0);
    const double q1 = gaussian_overlap_1d_quadrature(c.bound_extent, spread, 0.0);
    const double quad = q1 * q1 * q1;
    worst = std::max(worst, std::abs(quad / analytic - 1.0));
    csv += csv_row({spread, ratio, analytic, quad});
  }
  out.files.emplace_back("overlap_scan.csv", std::move(csv));
  out.results = {{"bound_extent", c.bound_extent},
                 {"spread_extent", c.spread_extent},
                 {"ratio_overlap", ratio_overlap({c.bound_extent, c.spread_extent})},
                 {"printed_estimate", 1e-52},
                 {"gaussian_overlap", gaussian_branch_overlap(c.bound_extent, c.spread_extent, 0.0)},
                 {"quadrature_max_relative_error", worst}};
  return out;
}

json branch_json(const Branch& b) {
  return {{"kind", b.kind == BranchKind::intact ? "intact" : "decayed"},
          {"norm", b.norm},
          {"phase", b.phase},
          {"mirror_position", vec_json(b.packet.center)},
          {"decay_time", b.decay_time ? json(*b.decay_time) : json(nullptr)}};
}

Output interfere(const RunConfig& c) {
  Output out;
  const Chamber chamber = c.chamber();
  const auto positions = screen_positions(c.optics);
  const IndexRange window = central_window(c.optics, positions.size());
  ScreenPattern pattern;
  json results;

  switch (c.mode) {
    case InterfereMode::unitary: {
      const SystemState state = unitary_evolve(prepare(chamber), c.horizon);
      pattern = pattern_unitary(c.optics, state.branches, positions);
      const Branch& intact = *state.find(BranchKind::intact);
      const Branch& decayed = *state.find(BranchKind::decayed);
      ScreenPattern incoherent{positions, std::vector<double>(positions.size())};
      for (std::size_t i = 0; i < positions.size(); ++i) {
        incoherent.intensities[i] =
            std::norm(branch_amplitude(c.optics, PathKind::down, positions[i], 0.0, intact.norm)) +
            std::norm(branch_amplitude(c.optics, PathKind::up, positions[i], 0.0, decayed.norm));
      }
      const ScreenPattern reference = pattern_half_silvered(c.optics, positions);
      double max_rel = 0.0;
      for (std::size_t i = 0; i < positions.size(); ++i) {
        max_rel = std::max(max_rel, std::abs(pattern.intensities[i] / reference.intensities[i] - 1.0));
      }
      results = {{"branches", json::array({branch_json(intact), branch_json(decayed)})},
                 {"packet_overlap_modulus", std::abs(overlap(intact.packet, decayed.packet, c.horizon))},
                 {"max_relative_deviation_from_half_silvered", max_rel},
                 {"relative_phase", decayed.phase - intact.phase},
                 {"coherent_integral", integrated_intensity(pattern)},
                 {"incoherent_integral", integrated_intensity(incoherent)}};
      break;
    }
    case InterfereMode::collapse: {
      const auto outcomes = collapse_trials(chamber, c.horizon, c.seed, c.trials);
      pattern = pattern_collapsed(c.optics, outcomes, positions, c.include_moving);
      std::size_t up = 0, down = 0, moving = 0, collapsed = 0;
      std::string trials_csv = trial_csv_header() + '\n';
      for (const auto& o : outcomes) {
        up += o.final_config == MirrorConfig::up;
        down += o.final_config == MirrorConfig::down;
        moving += o.final_config == MirrorConfig::moving;
        collapsed += o.collapsed();
        trials_csv += to_csv_row(o) + '\n';
      }
      out.files.emplace_back("interfere_outcomes.csv", std::move(trials_csv));
      const double expected = c.efficiency == 1.0 ? sample_branch_norms(chamber.sample, c.horizon).decayed
                                                  : std::nan("");
      results = {{"collapsed", std::isnan(expected) ? json{{"count", collapsed}, {"trials", c.trials}}
                                                    : fraction_stats(collapsed, c.trials, expected)},
                 {"mirror_up", up},
                 {"mirror_down", down},
                 {"caught_moving", moving},
                 {"include_moving", c.include_moving}};
      break;
    }
    case InterfereMode::half_silvered:
      pattern = pattern_half_silvered(c.optics, positions);
      break;
  }
  out.files.emplace(out.files.begin(), "interfere.csv", to_csv(pattern));
  results["mode"] = c.mode == InterfereMode::unitary ? "unitary"
                    : c.mode == InterfereMode::collapse ? "collapse"
                                                        : "half-silvered";
  results["visibility_central"] = visibility(pattern, window);
  results["visibility_full"] = visibility(pattern, {0, positions.size()});
  results["central_window"] = json::array({window.begin, window.end});
  out.results = std::move(results);
  return out;
}

Output montecarlo(const RunConfig& c) {
  Output out;
  const Chamber chamber = c.chamber();
  const auto outcomes = collapse_trials(chamber, c.horizon, c.seed, c.trials);
  std::string csv = trial_csv_header() + '\n';
  std::size_t decayed = 0, collapsed = 0, up = 0, moving = 0;
  Vec3 mean_position;
  for (const auto& o : outcomes) {
    decayed += o.decayed;
    collapsed += o.collapsed();
    up += o.final_config == MirrorConfig::up;
    moving += o.final_config == MirrorConfig::moving;
    mean_position += observed_state(chamber, o, c.horizon).branches.front().packet.center;
    csv += to_csv_row(o) + '\n';
  }
  mean_position *= 1.0 / static_cast<double>(outcomes.size());
  out.files.emplace_back("montecarlo.csv", std::move(csv));
  const BranchNorms norms = sample_branch_norms(chamber.sample, c.horizon);
  out.results = {{"decayed", fraction_stats(decayed, c.trials, norms.decayed)},
                 {"collapsed", fraction_stats(collapsed, c.trials, norms.decayed * c.efficiency)},
                 {"mirror_up", up},
                 {"caught_moving", moving},
                 {"mean_mirror_position", vec_json(mean_position)},
                 {"unitary_weighted_position",
                  vec_json(norms.intact * chamber.switch_path.start + norms.decayed * chamber.switch_path.end)},
                 {"imperfect_shielding", c.imperfect_shielding}};
  return out;
}

Output density(const RunConfig& c) {
  Output out;
  const Chamber chamber = c.chamber();
  const Ensemble ensemble =
      c.ensemble ? build_ensemble(chamber, *c.ensemble, c.horizon, c.max_members)
                 : random_phase_ensemble(chamber, c.members, c.seed, c.horizon);
  const auto positions = screen_positions(c.optics);
  const IndexRange window = central_window(c.optics, positions.size());
  const ScreenPattern unitary = pattern_mixed(ensemble, c.optics, positions, PatternMode::unitary);
  const ScreenPattern collapsed = pattern_mixed(ensemble, c.optics, positions, PatternMode::collapsed);
  std::string csv = "position,intensity_unitary,intensity_collapsed\n";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    csv += csv_row({positions[i], unitary.intensities[i], collapsed.intensities[i]});
  }
  out.files.emplace_back("density.csv", std::move(csv));
  out.results = {{"members", ensemble.size()},
                 {"visibility_unitary", visibility(unitary, window)},
                 {"visibility_collapsed", visibility(collapsed, window)},
                 {"intact_expectation", vec_json(branch_expectation(ensemble, BranchKind::intact))},
                 {"decayed_expectation", vec_json(branch_expectation(ensemble, BranchKind::decayed))}};
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (f) f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) {
    throw std::filesystem::filesystem_error("cannot write output file", path,
                                            std::make_error_code(std::errc::io_error));
  }
}

}  // namespace

RunResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir) {
  Output out;
  switch (config.experiment) {
    case Experiment::decay_stats:
      out = decay_stats(config);
      break;
    case Experiment::neutron:
      out = neutron(config);
      break;
    case Experiment::packet_spread:
      out = packet_spread(config);
      break;
    case Experiment::overlap_scan:
      out = overlap_scan(config);
      break;
    case Experiment::interfere:
      out = interfere(config);
      break;
    case Experiment::montecarlo:
      out = montecarlo(config);
      break;
    case Experiment::density:
      out = density(config);
      break;
  }

  json summary;
  summary["version"] = kVersion;
  summary["experiment"] = to_string(config.experiment);
  summary["seed"] = config.seed;
  summary["config"] = json::parse(resolved_json(config));
  summary["results"] = std::move(out.results);

  const std::string base = [&] {
    std::string name = to_string(config.experiment);
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
  }();

  RunResult result;
  result.summary_json = summary.dump(2) + '\n';
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, contents] : out.files) {
    result.files.push_back(out_dir / name);
    write_file(result.files.back(), contents);
  }
  result.files.push_back(out_dir / (base + "_summary.json"));
  write_file(result.files.back(), result.summary_json);
  return result;
}

}  // namespace catsim
