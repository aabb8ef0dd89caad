#include "chiralcav/chiralcav.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "chiralcav/acceptance.hpp"
#include "chiralcav/analytics.hpp"
#include "chiralcav/config.hpp"
#include "chiralcav/detection.hpp"
#include "chiralcav/dynamics.hpp"
#include "chiralcav/error.hpp"
#include "chiralcav/harness.hpp"
#include "chiralcav/molecule.hpp"
#include "chiralcav/special.hpp"
#include "chiralcav/trajectory_io.hpp"
#include "json.hpp"

using namespace chiralcav;
using nlohmann::json;

struct cc_config {
  LoadedConfig loaded;
};

struct cc_trajectory {
  Trajectory trajectory;
};

namespace {

thread_local std::string last_message;
thread_local std::string last_json;

void clear_error() {
  last_message.clear();
  last_json.clear();
}

cc_status set_error(cc_status status, const std::string& message, json extra = json::object()) {
  last_message = message;
  json j = std::move(extra);
  j["error"] = cc_status_name(status);
  j["code"] = static_cast<int>(status);
  j["message"] = message;
  last_json = j.dump();
  return status;
}

template <typename F>
cc_status guarded(F&& body) {
  clear_error();
  try {
    body();
    return CC_OK;
  } catch (const ParseError& e) {
    return set_error(CC_ERR_PARSE, e.what(), {{"line", e.line()}, {"column", e.column()}});
  } catch (const IntegrationError& e) {
    return set_error(CC_ERR_INTEGRATION, e.what(), {{"time", e.time()}});
  } catch (const Error& e) {
    return set_error(static_cast<cc_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(CC_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CC_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  require(p != nullptr, ErrorCode::InvalidArgument, std::string(name) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Model to_model(cc_model m) {
  switch (m) {
    case CC_MODEL_FIRST: return Model::First;
    case CC_MODEL_DISSIPATIVE: return Model::Dissipative;
    case CC_MODEL_SECOND: return Model::Second;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model");
}

std::string hash_text(const Scenario& s) { return hex64(fnv1a(canonical_text(s))); }

std::vector<double> axis_values(const json& axis) {
  if (axis.contains("values")) return axis.at("values").get<std::vector<double>>();
  for (const char* kind : {"log", "linear"}) {
    if (!axis.contains(kind)) continue;
    const auto r = axis.at(kind).get<std::vector<double>>();
    require(r.size() == 3 && r[2] >= 1 && r[2] == std::floor(r[2]), ErrorCode::InvalidArgument,
            std::string(kind) + " range must be [first, last, count]");
    const auto n = static_cast<std::size_t>(r[2]);
    return std::string(kind) == "log" ? logspace(r[0], r[1], n) : linspace(r[0], r[1], n);
  }
  throw Error(ErrorCode::InvalidArgument, "axis needs values, log or linear");
}

json trajectory_deviation_json(const TrajectoryDeviation& d) {
  return {{"abs_c", d.abs_c}, {"arg_c", d.arg_c}, {"arg_c_rel", d.arg_c_rel}, {"sigma_z", d.sigma_z}};
}

}  // namespace

extern "C" {

const char* cc_version(void) { return CHIRALCAV_VERSION; }

const char* cc_last_error(void) { return last_message.c_str(); }

const char* cc_last_error_json(void) { return last_json.c_str(); }

const char* cc_status_name(cc_status status) {
  switch (status) {
    case CC_OK: return "ok";
    case CC_ERR_INTERNAL: return "internal";
    default:
      if (status >= CC_ERR_INVALID_ARGUMENT && status <= CC_ERR_IO)
        return chiralcav::to_string(static_cast<ErrorCode>(status));
      return "unknown";
  }
}

void cc_string_free(char* text) { std::free(text); }

cc_status cc_parse_quantity(const char* text, cc_dimension dimension, double* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    require(dimension >= CC_DIM_NONE && dimension <= CC_DIM_PER_SECOND, ErrorCode::InvalidArgument,
            "unknown dimension");
    *out = parse_quantity(text, static_cast<Dimension>(dimension));
  });
}

cc_status cc_config_default(cc_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cc_config{LoadedConfig{Scenario::propanediol(0), {}}};
  });
}

cc_status cc_config_load_file(const char* path, cc_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cc_config{load_config(path)};
  });
}

cc_status cc_config_load_string(const char* text, cc_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new cc_config{parse_config(text)};
  });
}

cc_status cc_config_clone(const cc_config* config, cc_config** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new cc_config(*config);
  });
}

void cc_config_free(cc_config* config) { delete config; }

cc_status cc_config_notices(const cc_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = dup(json(config->loaded.notices).dump());
  });
}

cc_status cc_config_canonical(const cc_config* config, char** text) {
  return guarded([&] {
    need(config, "config");
    need(text, "text");
    *text = dup(canonical_text(config->loaded.scenario));
  });
}

cc_status cc_config_hash(const cc_config* config, uint64_t* hash) {
  return guarded([&] {
    need(config, "config");
    need(hash, "hash");
    *hash = fnv1a(canonical_text(config->loaded.scenario));
  });
}

cc_status cc_config_set_seed(cc_config* config, uint64_t seed) {
  return guarded([&] {
    need(config, "config");
    config->loaded.scenario.seed = seed;
  });
}

cc_status cc_config_get_seed(const cc_config* config, uint64_t* seed) {
  return guarded([&] {
    need(config, "config");
    need(seed, "seed");
    *seed = config->loaded.scenario.seed;
  });
}

cc_status cc_config_set_model(cc_config* config, cc_model model) {
  return guarded([&] {
    need(config, "config");
    config->loaded.scenario.model = to_model(model);
  });
}

cc_status cc_config_get_model(const cc_config* config, cc_model* model) {
  return guarded([&] {
    need(config, "config");
    need(model, "model");
    *model = static_cast<cc_model>(config->loaded.scenario.model);
  });
}

cc_status cc_config_set_tolerance(cc_config* config, double rtol) {
  return guarded([&] {
    need(config, "config");
    require(std::isfinite(rtol) && rtol > 0 && rtol < 1, ErrorCode::InvalidArgument,
            "tolerance must lie in (0, 1)");
    auto& opts = config->loaded.scenario.integrator;
    opts.rtol = rtol;
    opts.atol = rtol / 100.0;
  });
}

cc_status cc_simulate(const cc_config* config, int sigma_z0, cc_trajectory** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    require(sigma_z0 == 0 || sigma_z0 == 1 || sigma_z0 == -1, ErrorCode::InvalidArgument,
            "sigma_z0 must be -1, 0 or +1");
    Scenario s = config->loaded.scenario;
    if (sigma_z0 != 0) s.sample.sigma_z0 = sigma_z0;
    *out = new cc_trajectory{integrate(s)};
  });
}

void cc_trajectory_free(cc_trajectory* trajectory) { delete trajectory; }

size_t cc_trajectory_size(const cc_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.samples.size() : 0;
}

cc_status cc_trajectory_sample(const cc_trajectory* trajectory, size_t index, cc_sample* out) {
  return guarded([&] {
    need(trajectory, "trajectory");
    need(out, "out");
    const auto& samples = trajectory->trajectory.samples;
    require(index < samples.size(), ErrorCode::InvalidArgument, "sample index out of range");
    const auto& x = samples[index];
    *out = cc_sample{x.t, x.c.real(), x.c.imag(), x.sigma.real(), x.sigma.imag(),
                     x.sigma_z, x.gbar, x.signal};
  });
}

cc_status cc_trajectory_bloch_deviation(const cc_trajectory* trajectory, double* out) {
  return guarded([&] {
    need(trajectory, "trajectory");
    need(out, "out");
    *out = trajectory->trajectory.bloch_deviation;
  });
}

cc_status cc_trajectory_counts(const cc_trajectory* trajectory, double* out) {
  return guarded([&] {
    need(trajectory, "trajectory");
    need(out, "out");
    *out = integrate_signal(trajectory->trajectory, trajectory->trajectory.window);
  });
}

cc_status cc_trajectory_csv(const cc_trajectory* trajectory, const char* config_hash, char** csv) {
  return guarded([&] {
    need(trajectory, "trajectory");
    need(csv, "csv");
    std::ostringstream o;
    write_trajectory_csv(o, trajectory->trajectory, config_hash ? config_hash : "");
    *csv = dup(o.str());
  });
}

cc_status cc_trajectory_write_csv(const cc_trajectory* trajectory, const char* config_hash,
                                  const char* path) {
  return guarded([&] {
    need(trajectory, "trajectory");
    need(path, "path");
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::Io, std::string("cannot open ") + path);
    write_trajectory_csv(f, trajectory->trajectory, config_hash ? config_hash : "");
    require(static_cast<bool>(f), ErrorCode::Io, std::string("write failed: ") + path);
  });
}

cc_status cc_detect(const cc_config* config, unsigned jobs, cc_detection* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const Scenario& s = config->loaded.scenario;
    const auto pair = evaluate_pair(s, s.model, nullptr, jobs);
    const auto& st = pair.statistics;
    *out = cc_detection{st.n_bar_L, st.n_bar_R, st.delta, st.snr, st.p_err,
                        pair.window.t0, pair.window.tf, pair.sigma_z_excursion};
  });
}

cc_status cc_montecarlo_run(const cc_config* config, uint64_t shots, uint64_t seed, cc_montecarlo* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto r = monte_carlo_error_rate(config->loaded.scenario, shots, seed);
    *out = cc_montecarlo{r.statistics.snr, r.p_err_analytic, r.rate, r.standard_error, r.shots, r.seed};
  });
}

void cc_mirror_default(cc_mirror* out) {
  if (!out) return;
  const MirrorReference ref;
  *out = cc_mirror{ref.f_ref, ref.d_ref, ref.Q_ref, ref.stroke, ref.step};
}

cc_status cc_design_cavity(double R_m, int q, double f_target, double mu_b, const cc_mirror* mirror,
                           cc_cavity_design* out) {
  return guarded([&] {
    need(out, "out");
    MirrorReference ref;
    if (mirror) {
      ref.f_ref = mirror->f_ref;
      ref.d_ref = mirror->d_ref;
      ref.Q_ref = mirror->Q_ref;
      ref.stroke = mirror->stroke;
      ref.step = mirror->step;
    }
    const auto d = design_cavity(R_m, q, f_target, mu_b, ref);
    *out = cc_cavity_design{d.geometry.R_m, d.geometry.q, d.geometry.d, d.f_q, d.w0, d.V,
                            d.field, d.g0, d.Qfac, d.kappa, d.tuning_range, d.tuning_precision,
                            figure_of_merit(d)};
  });
}

cc_status cc_esst(double phi, cc_chirality chirality, int initial_level, cc_esst_result* out) {
  return guarded([&] {
    need(out, "out");
    require(chirality == CC_LEFT || chirality == CC_RIGHT, ErrorCode::InvalidArgument,
            "unknown chirality");
    require(initial_level >= 1 && initial_level <= 3, ErrorCode::InvalidArgument,
            "initial level must be 1, 2 or 3");
    const Chirality c = chirality == CC_LEFT ? Chirality::Left : Chirality::Right;
    const auto r = apply_pulse_sequence(ThreeLevelState::basis(initial_level), phi, c);
    cc_esst_result res{};
    const ThreeLevelState* steps[] = {&r.after_first, &r.after_second, &r.final_state};
    for (int k = 0; k < 3; ++k)
      for (int l = 1; l <= 3; ++l) res.populations[k][l - 1] = std::norm((*steps[k])[l]);
    for (int l = 1; l <= 3; ++l) {
      res.re[l - 1] = r.final_state[l].real();
      res.im[l - 1] = r.final_state[l].imag();
    }
    constexpr double tol = 1e-9;
    if (std::abs(1.0 - res.populations[2][2]) < tol) res.sigma_z0 = 1;
    else if (std::abs(1.0 - res.populations[2][1]) < tol) res.sigma_z0 = -1;
    const Matrix3 u = esst_unitary(phi, c);
    const Matrix3 p = multiply(adjoint(u), u);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        res.unitarity_error = std::max(res.unitarity_error, std::abs(p[i][j] - (i == j ? 1.0 : 0.0)));
    *out = res;
  });
}

cc_status cc_analytics_json(const cc_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const Scenario& s = config->loaded.scenario;
    const auto in = DispersiveInputs::from(s);
    const double g0 = s.cavity.g0;
    const double kappa = s.cavity.kappa;
    const double gbar = 0.5 * g0;
    const auto diss = s.dissipation_params();
    const double k_m = s.molecule.omega32() / constants::speed_of_light;
    const auto bound = dipole_bound(diss.gamma, s.sample.N_m, s.L(), k_m);
    json j;
    j["config_hash"] = hash_text(s);
    j["dispersive_valid"] = in.dispersive_valid();
    j["phase"] = dispersive_phase(gbar, s.sample.N_m, kappa, s.drive.Delta_m, s.sample.sigma_z0);
    j["snr_analytic"] = snr_moving(in);
    j["snr_simplified"] = snr_simplified(in);
    j["p_err_analytic"] = error_probability(snr_moving(in));
    j["critical_nm_simplified"] = critical_nm_simplified(in);
    j["optimal_window"] = optimal_window();
    j["window_factor"] = window_factor(s.detection.M_Y);
    j["N_cr"] = s.N_cr();
    j["eta"] = s.eta();
    j["tau"] = s.tau();
    j["figure_of_merit"] = figure_of_merit(g0, s.cavity.w0, kappa);
    j["trap_time_unit"] = trap_time_unit(g0, kappa);
    j["critical_trap_time"] =
        s.drive.lambda > 0 && s.sample.N_m > 0
            ? json(critical_trap_time(g0, s.drive.lambda, kappa, s.sample.N_m))
            : json(nullptr);
    j["bounds"] = {{"gamma", diss.gamma}, {"V_max", bound.V_max}, {"Gamma", bound.Gamma},
                   {"L", s.L()}};
    json decay;
    for (const auto& [name, t] : {std::pair{"2->1", Transition::T21}, std::pair{"3->1", Transition::T31},
                                  std::pair{"3->2", Transition::T32}})
      decay[name] = free_space_decay_rate(s.molecule.omega(t), coupling_dipole(s.molecule, t));
    j["free_space_decay"] = decay;
    *out = dup(j.dump(2));
  });
}

cc_status cc_sweep(const cc_config* config, const char* spec_json, unsigned jobs, char** csv,
                   char** summary_json) {
  return guarded([&] {
    need(config, "config");
    need(spec_json, "spec_json");
    const json j = json::parse(spec_json);
    SweepSpec spec;
    spec.scenario = config->loaded.scenario;
    spec.model = spec.scenario.model;
    for (const auto& axis : j.at("axes")) spec.axes.push_back({axis.at("name").get<std::string>(), axis_values(axis)});
    const std::string kind = j.value("kind", "snr");
    require(kind == "snr" || kind == "critical", ErrorCode::InvalidArgument,
            "sweep kind must be snr or critical");
    spec.kind = kind == "snr" ? SweepKind::Snr : SweepKind::Critical;
    spec.target_snr = j.value("target_snr", 3.0);
    spec.validate();
    TrajectoryCache cache;
    const auto result = run_sweep(spec, jobs, &cache);
    if (csv) {
      std::ostringstream o;
      write_sweep_csv(o, result, j.value("timestamp", false));
      *csv = dup(o.str());
    }
    if (summary_json) *summary_json = dup(sweep_summary_json(result));
  });
}

cc_status cc_critical_nm(const cc_config* config, double target_snr, unsigned jobs, int* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const Scenario& s = config->loaded.scenario;
    *out = critical_nm(s, target_snr, s.model, nullptr, jobs).n_critical;
  });
}

cc_status cc_compare_json(const cc_config* config, const char* kind, char** out) {
  return guarded([&] {
    need(config, "config");
    need(kind, "kind");
    need(out, "out");
    const Scenario& s = config->loaded.scenario;
    json j;
    j["config_hash"] = hash_text(s);
    if (std::string(kind) == "order") {
      const auto r = order_comparison(s);
      j["kind"] = "order";
      j["deviation"] = trajectory_deviation_json(r.deviation);
      j["n_first"] = r.n_first;
      j["n_second"] = r.n_second;
      j["eta_cmp"] = r.eta_cmp;
      j["sigma_z_first_centre"] = r.sigma_z_first_centre;
      j["sigma_z_second_centre"] = r.sigma_z_second_centre;
    } else if (std::string(kind) == "dissipation") {
      const auto r = dissipation_check(s, s.dissipation_params());
      j["kind"] = "dissipation";
      j["deviation"] = trajectory_deviation_json(r.deviation);
      j["gamma"] = r.params.gamma;
      j["V_max"] = r.params.V_max;
      j["worst"] = r.worst;
      j["passed"] = r.passed;
      j["identical"] = r.identical;
    } else {
      throw Error(ErrorCode::InvalidArgument, "comparison must be order or dissipation");
    }
    *out = dup(j.dump(2));
  });
}

int cc_check_count(void) { return acceptance_criterion_count; }

cc_status cc_check(const int* ids, size_t count, unsigned jobs, cc_check_callback callback, void* user,
                   int* passed) {
  return guarded([&] {
    require(count == 0 || ids != nullptr, ErrorCode::InvalidArgument, "ids must not be null");
    std::vector<int> todo(ids, ids + count);
    int ok = 0;
    run_acceptance(todo, jobs, [&](const CriterionResult& r) {
      ok += r.passed ? 1 : 0;
      if (callback) callback(r.id, r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds, user);
    });
    if (passed) *passed = ok;
  });
}

}  // extern "C"
