#include "catsim/catsim.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "catsim/config.hpp"
#include "catsim/errors.hpp"
#include "catsim/experiments.hpp"
#include "catsim/overlap.hpp"

struct catsim_config {
  catsim::RunConfig config;
  std::string resolved;
  std::string experiment;
};

struct catsim_result {
  std::string summary;
  std::vector<std::string> files;
};

struct catsim_simulation {
  catsim::RunConfig config;
  catsim::Chamber chamber;
  std::vector<double> positions;
};

namespace {

thread_local std::string last_error;

catsim_status fail(catsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs f, translating C++ exceptions into status codes at the boundary.
template <class F>
catsim_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return CATSIM_OK;
  } catch (const catsim::ConfigError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) {
      if (!msg.empty()) msg += '\n';
      msg += d.field.empty() ? d.message : d.field + ": " + d.message;
    }
    return fail(CATSIM_ERR_CONFIG, msg);
  } catch (const catsim::DomainError& e) {
    return fail(CATSIM_ERR_ARGUMENT, e.what());
  } catch (const catsim::NumericalError& e) {
    return fail(CATSIM_ERR_NUMERIC, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(CATSIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CATSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CATSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CATSIM_ERR_INTERNAL, "unknown error");
  }
}

bool null_arg(const void* p) { return p == nullptr; }

}  // namespace

extern "C" {

const char* catsim_version(void) { return catsim::kVersion; }

const char* catsim_last_error(void) { return last_error.c_str(); }

catsim_status catsim_config_parse(const char* json_text, catsim_config** out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<catsim_config>();
    handle->config = catsim::validate_config(json_text ? json_text : "");
    handle->resolved = catsim::resolved_json(handle->config);
    handle->experiment = catsim::to_string(handle->config.experiment);
    *out = handle.release();
  });
}

void catsim_config_destroy(catsim_config* config) { delete config; }

const char* catsim_config_resolved_json(const catsim_config* config) {
  return config ? config->resolved.c_str() : "";
}

const char* catsim_config_experiment(const catsim_config* config) {
  return config ? config->experiment.c_str() : "";
}

catsim_status catsim_run(const catsim_config* config, const char* out_dir, catsim_result** out) {
  if (null_arg(config) || null_arg(out_dir) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const catsim::RunResult r = catsim::run_experiment(config->config, out_dir);
    auto handle = std::make_unique<catsim_result>();
    handle->summary = r.summary_json;
    for (const auto& f : r.files) handle->files.push_back(f.string());
    *out = handle.release();
  });
}

void catsim_result_destroy(catsim_result* result) { delete result; }

const char* catsim_result_summary_json(const catsim_result* result) {
  return result ? result->summary.c_str() : "";
}

size_t catsim_result_file_count(const catsim_result* result) { return result ? result->files.size() : 0; }

const char* catsim_result_file(const catsim_result* result, size_t index) {
  if (!result || index >= result->files.size()) return nullptr;
  return result->files[index].c_str();
}

catsim_status catsim_survival_single(double mean_life, double t, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *out = catsim::survival_single(catsim::DecayLaw(mean_life), t); });
}

catsim_status catsim_decayed_single(double mean_life, double t, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *out = catsim::decayed_single(catsim::DecayLaw(mean_life), t); });
}

catsim_status catsim_sample_branch_norms(double n_nuclei, double mean_life, double t, double* intact,
                                         double* decayed) {
  if (null_arg(intact) || null_arg(decayed)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] {
    const auto n = catsim::sample_branch_norms(catsim::Sample(n_nuclei, catsim::DecayLaw(mean_life)), t);
    *intact = n.intact;
    *decayed = n.decayed;
  });
}

catsim_status catsim_calibrate_mean_life(double n_nuclei, double horizon, double* mean_life) {
  if (null_arg(mean_life)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *mean_life = catsim::calibrate_mean_life(n_nuclei, horizon).mean_life(); });
}

catsim_status catsim_spread_width(double mass, double dk, double t, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] {
    if (!(mass > 0.0) || !(dk > 0.0)) throw catsim::DomainError("mass > 0 and dk > 0 required");
    *out = catsim::spread_width(mass, dk, t);
  });
}

catsim_status catsim_doubling_time(double mass, double sigma0, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *out = catsim::doubling_time(mass, sigma0); });
}

catsim_status catsim_ratio_overlap(double bound_extent, double spread_extent, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *out = catsim::ratio_overlap({bound_extent, spread_extent}); });
}

catsim_status catsim_gaussian_branch_overlap(double width1, double width2, double separation, double* out) {
  if (null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "out is null");
  return guarded([&] { *out = catsim::gaussian_branch_overlap(width1, width2, separation); });
}

catsim_status catsim_visibility(const double* intensities, size_t n, size_t begin, size_t end, double* out) {
  if (null_arg(intensities) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    catsim::ScreenPattern p;
    p.intensities.assign(intensities, intensities + n);
    p.positions.assign(n, 0.0);
    *out = catsim::visibility(p, {begin, end});
  });
}

catsim_status catsim_simulation_create(const catsim_config* config, catsim_simulation** out) {
  if (null_arg(config) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto sim = std::unique_ptr<catsim_simulation>(new catsim_simulation{
        config->config, config->config.chamber(), catsim::screen_positions(config->config.optics)});
    *out = sim.release();
  });
}

void catsim_simulation_destroy(catsim_simulation* sim) { delete sim; }

size_t catsim_simulation_screen_points(const catsim_simulation* sim) { return sim ? sim->positions.size() : 0; }

catsim_status catsim_simulation_positions(const catsim_simulation* sim, double* out, size_t n) {
  if (null_arg(sim) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  if (n != sim->positions.size()) return fail(CATSIM_ERR_ARGUMENT, "buffer size does not match screen points");
  std::copy(sim->positions.begin(), sim->positions.end(), out);
  return CATSIM_OK;
}

catsim_status catsim_simulation_branch_norms(const catsim_simulation* sim, double t, double* intact,
                                             double* decayed) {
  if (null_arg(sim) || null_arg(intact) || null_arg(decayed)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto state = catsim::unitary_evolve(catsim::prepare(sim->chamber), t);
    *intact = state.find(catsim::BranchKind::intact)->norm;
    const auto* d = state.find(catsim::BranchKind::decayed);
    *decayed = d ? d->norm : 0.0;
  });
}

catsim_status catsim_simulation_branch_overlap(const catsim_simulation* sim, double t, double* out) {
  if (null_arg(sim) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(t > 0.0)) throw catsim::DomainError("t > 0 required for two branches");
    const auto state = catsim::unitary_evolve(catsim::prepare(sim->chamber), t);
    *out = std::abs(catsim::overlap(state.find(catsim::BranchKind::intact)->packet,
                                    state.find(catsim::BranchKind::decayed)->packet, t));
  });
}

catsim_status catsim_simulation_collapsed_fraction(const catsim_simulation* sim, size_t trials, uint64_t seed,
                                                   double* out) {
  if (null_arg(sim) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  if (trials == 0) return fail(CATSIM_ERR_ARGUMENT, "trials >= 1 required");
  return guarded([&] {
    const auto outcomes = catsim::collapse_trials(sim->chamber, sim->config.horizon, seed, trials);
    std::size_t hits = 0;
    for (const auto& o : outcomes) hits += o.collapsed();
    *out = static_cast<double>(hits) / static_cast<double>(trials);
  });
}

catsim_status catsim_simulation_pattern(const catsim_simulation* sim, catsim_pattern_kind kind,
                                        double* intensities, size_t n) {
  if (null_arg(sim) || null_arg(intensities)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  if (n != sim->positions.size()) return fail(CATSIM_ERR_ARGUMENT, "buffer size does not match screen points");
  return guarded([&] {
    const auto& c = sim->config;
    catsim::ScreenPattern p;
    switch (kind) {
      case CATSIM_PATTERN_UNITARY:
        p = catsim::pattern_unitary(c.optics, catsim::unitary_evolve(catsim::prepare(sim->chamber), c.horizon).branches,
                                    sim->positions);
        break;
      case CATSIM_PATTERN_COLLAPSED:
        p = catsim::pattern_collapsed(c.optics, catsim::collapse_trials(sim->chamber, c.horizon, c.seed, c.trials),
                                      sim->positions, c.include_moving);
        break;
      case CATSIM_PATTERN_HALF_SILVERED:
        p = catsim::pattern_half_silvered(c.optics, sim->positions);
        break;
      case CATSIM_PATTERN_MIXED:
        p = catsim::pattern_mixed(c.ensemble ? catsim::build_ensemble(sim->chamber, *c.ensemble, c.horizon, c.max_members)
                                             : catsim::random_phase_ensemble(sim->chamber, c.members, c.seed, c.horizon),
                                  c.optics, sim->positions, catsim::PatternMode::unitary);
        break;
      default:
        throw catsim::DomainError("unknown pattern kind");
    }
    std::copy(p.intensities.begin(), p.intensities.end(), intensities);
  });
}

catsim_status catsim_simulation_central_visibility(const catsim_simulation* sim, const double* intensities,
                                                   size_t n, double* out) {
  if (null_arg(sim) || null_arg(intensities) || null_arg(out)) return fail(CATSIM_ERR_ARGUMENT, "null argument");
  const auto w = catsim::central_window(sim->config.optics, n);
  return catsim_visibility(intensities, n, w.begin, w.end, out);
}

}  // extern "C"
