// Command-line front end over the C interface.

#include <chiralcav/chiralcav.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string json_text;
};

void ok(cc_status status) {
  if (status != CC_OK) throw Failure{cc_last_error_json()};
}

[[noreturn]] void usage_error(const std::string& message) {
  throw Failure{json{{"error", "usage"}, {"code", 2}, {"message", message}}.dump()};
}

struct ConfigDeleter {
  void operator()(cc_config* c) const { cc_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cc_config, ConfigDeleter>;

struct TrajectoryDeleter {
  void operator()(cc_trajectory* t) const { cc_trajectory_free(t); }
};
using TrajectoryPtr = std::unique_ptr<cc_trajectory, TrajectoryDeleter>;

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { cc_string_free(text); }
  std::string str() const { return text ? text : ""; }
};

double quantity(const std::string& text, cc_dimension dimension) {
  double value = 0.0;
  ok(cc_parse_quantity(text.c_str(), dimension, &value));
  return value;
}

struct Common {
  std::string config;
  std::string out;
  unsigned jobs = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string model;
};

enum Flags : unsigned { kConfig = 1, kOut = 2, kJobs = 4, kSeed = 8, kTolerance = 16, kModel = 32 };

void add_common(CLI::App* sub, Common& c, unsigned flags) {
  if (flags & kConfig) sub->add_option("--config,config", c.config, "Run configuration (key-value or JSON)");
  if (flags & kOut) sub->add_option("--out,-o", c.out, "Output file or directory");
  if (flags & kJobs) sub->add_option("--jobs,-j", c.jobs, "Worker threads (0: available parallelism)");
  if (flags & kSeed) sub->add_option("--seed", c.seed, "Random seed (overrides the config)");
  if (flags & kTolerance)
    sub->add_option("--tolerance", c.tolerance, "Integrator relative tolerance (absolute = rtol/100)");
  if (flags & kModel)
    sub->add_option("--model", c.model, "Equations of motion (overrides the config)")
        ->check(CLI::IsMember({"first", "dissipative", "second"}));
}

ConfigPtr load(const Common& c) {
  cc_config* raw = nullptr;
  if (c.config.empty()) ok(cc_config_default(&raw));
  else ok(cc_config_load_file(c.config.c_str(), &raw));
  ConfigPtr config(raw);
  OwnedString notices;
  ok(cc_config_notices(config.get(), &notices.text));
  for (const auto& n : json::parse(notices.str())) std::cerr << json{{"notice", n}}.dump() << "\n";
  if (c.seed) ok(cc_config_set_seed(config.get(), *c.seed));
  if (c.tolerance) ok(cc_config_set_tolerance(config.get(), *c.tolerance));
  if (!c.model.empty()) {
    const cc_model m = c.model == "first" ? CC_MODEL_FIRST
                       : c.model == "dissipative" ? CC_MODEL_DISSIPATIVE
                                                  : CC_MODEL_SECOND;
    ok(cc_config_set_model(config.get(), m));
  }
  return config;
}

std::string config_hash(const cc_config* config) {
  std::uint64_t h = 0;
  ok(cc_config_hash(config, &h));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --out wins; a directory there, or CHIRALCAV_OUT_DIR, receives `default_name`.
// Empty result means standard output.
std::string output_path(const std::string& out, const std::string& default_name, bool use_env) {
  if (!out.empty()) return fs::is_directory(out) ? (fs::path(out) / default_name).string() : out;
  if (use_env) {
    if (const char* dir = std::getenv("CHIRALCAV_OUT_DIR"); dir && *dir) {
      fs::create_directories(dir);
      return (fs::path(dir) / default_name).string();
    }
  }
  return {};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{json{{"error", "io"}, {"code", CC_ERR_IO}, {"message", "cannot open " + path}}.dump()};
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

std::string fixed(double v, int digits) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage_error("not an integer list: " + text);
    }
  }
  return out;
}

// NAME=v1,v2,... | NAME=lin:first:last:count | NAME=log:first:last:count
json parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) usage_error("axis must be NAME=VALUES: " + text);
  json axis{{"name", text.substr(0, eq)}};
  std::string spec = text.substr(eq + 1);
  auto numbers = [&](const std::string& body, char sep) {
    std::vector<double> v;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, sep)) v.push_back(quantity(item, CC_DIM_NONE));
    return v;
  };
  for (const char* kind : {"lin:", "log:"}) {
    if (spec.rfind(kind, 0) == 0) {
      const auto r = numbers(spec.substr(4), ':');
      if (r.size() != 3) usage_error("range axis must be " + std::string(kind) + "first:last:count");
      axis[kind[1] == 'i' ? "linear" : "log"] = r;
      return axis;
    }
  }
  axis["values"] = numbers(spec, ',');
  return axis;
}

int run_design(const std::string& R_m, const std::string& qs, const std::string& target,
               const std::string& mu_b, const std::string& format, const Common& c) {
  cc_mirror mirror;
  cc_mirror_default(&mirror);
  const double R = quantity(R_m, CC_DIM_LENGTH);
  const double f = quantity(target, CC_DIM_FREQUENCY);
  const double mu = quantity(mu_b, CC_DIM_DIPOLE);
  const double two_pi = 6.283185307179586;
  std::ostringstream o;
  json rows = json::array();
  if (format == "csv")
    o << "q,d_mm,w0_mm,g0_2pi_Hz,Q_1e9,kappa_2pi_Hz,tuning_kHz,precision_Hz,figure_of_merit\n";
  else if (format == "text")
    o << "  q      d (mm)    w0 (mm)  g0/2pi (Hz)  Q (1e9)  kappa/2pi (Hz)  tuning (kHz)  precision (Hz)\n";
  for (int q : parse_int_list(qs)) {
    cc_cavity_design d;
    ok(cc_design_cavity(R, q, f, mu, &mirror, &d));
    const double g = d.g0 / two_pi, k = d.kappa / two_pi;
    if (format == "csv") {
      o << q << "," << fixed(d.d * 1e3, 6) << "," << fixed(d.w0 * 1e3, 4) << "," << fixed(g, 6) << ","
        << fixed(d.Q / 1e9, 6) << "," << fixed(k, 4) << "," << fixed(d.tuning_range / 1e3, 2) << ","
        << fixed(d.tuning_precision, 1) << "," << fixed(d.figure_of_merit, 6) << "\n";
    } else if (format == "text") {
      char line[256];
      std::snprintf(line, sizeof line, "%3d  %10.6f  %9.4f  %11.6f  %7.5f  %14.4f  %12.2f  %14.1f\n", q,
                    d.d * 1e3, d.w0 * 1e3, g, d.Q / 1e9, k, d.tuning_range / 1e3, d.tuning_precision);
      o << line;
    } else {
      rows.push_back({{"q", q}, {"R_m", d.R_m}, {"d", d.d}, {"f_q", d.f_q}, {"w0", d.w0}, {"V", d.V},
                      {"field", d.field}, {"g0", d.g0}, {"Q", d.Q}, {"kappa", d.kappa},
                      {"tuning_range", d.tuning_range}, {"tuning_precision", d.tuning_precision},
                      {"figure_of_merit", d.figure_of_merit}});
    }
  }
  if (format == "json") o << rows.dump(2) << "\n";
  emit(o.str(), output_path(c.out, "", false));
  return 0;
}

int run_esst(const std::string& phi_text, const std::string& chirality, int level, const Common& c) {
  const double phi = quantity(phi_text, CC_DIM_ANGLE);
  json out = json::array();
  for (const auto& [name, value] : {std::pair{"left", CC_LEFT}, std::pair{"right", CC_RIGHT}}) {
    if (chirality != "both" && chirality != name) continue;
    cc_esst_result r;
    ok(cc_esst(phi, value, level, &r));
    json amps = json::array();
    for (int l = 0; l < 3; ++l) amps.push_back({r.re[l], r.im[l]});
    json pops = json::array();
    for (const auto& step : r.populations) pops.push_back({step[0], step[1], step[2]});
    out.push_back({{"chirality", name}, {"phi", phi}, {"initial_level", level}, {"amplitudes", amps},
                   {"populations", pops}, {"sigma_z0", r.sigma_z0},
                   {"unitarity_error", r.unitarity_error}});
  }
  emit(out.dump(2), output_path(c.out, "", false));
  return 0;
}

int run_simulate(const std::string& hypothesis, const std::string& compare, const Common& c) {
  auto config = load(c);
  const std::string hash = config_hash(config.get());
  if (!compare.empty()) {
    OwnedString report;
    ok(cc_compare_json(config.get(), compare.c_str(), &report.text));
    emit(report.str(), output_path(c.out, "compare_" + compare + ".json", false));
    return 0;
  }
  std::vector<std::pair<std::string, int>> runs;
  if (hypothesis == "config") runs.push_back({"trajectory", 0});
  if (hypothesis == "left" || hypothesis == "both") runs.push_back({"trajectory_left", +1});
  if (hypothesis == "right" || hypothesis == "both") runs.push_back({"trajectory_right", -1});
  for (const auto& [name, sz] : runs) {
    std::string path = output_path(c.out, name + "_" + hash + ".csv", true);
    if (runs.size() > 1 && !path.empty() && !(c.out.empty() || fs::is_directory(c.out))) {
      const fs::path p(c.out);
      path = (p.parent_path() / (p.stem().string() + (sz > 0 ? "_left" : "_right") + p.extension().string())).string();
    }
    cc_trajectory* raw = nullptr;
    ok(cc_simulate(config.get(), sz, &raw));
    TrajectoryPtr traj(raw);
    if (path.empty()) {
      OwnedString csv;
      ok(cc_trajectory_csv(traj.get(), hash.c_str(), &csv.text));
      std::cout << csv.str();
    } else {
      ok(cc_trajectory_write_csv(traj.get(), hash.c_str(), path.c_str()));
      std::cerr << json{{"written", path}}.dump() << "\n";
    }
  }
  return 0;
}

int run_detect(const Common& c) {
  auto config = load(c);
  cc_detection d;
  ok(cc_detect(config.get(), c.jobs, &d));
  const json j{{"config_hash", config_hash(config.get())},
               {"n_bar_L", d.n_bar_L},
               {"n_bar_R", d.n_bar_R},
               {"delta", d.delta},
               {"snr", d.snr},
               {"p_err", d.p_err},
               {"t0", d.t0},
               {"tf", d.tf},
               {"sigma_z_excursion", d.sigma_z_excursion}};
  emit(j.dump(2), output_path(c.out, "", false));
  return 0;
}

int run_analytics(const Common& c) {
  auto config = load(c);
  OwnedString report;
  ok(cc_analytics_json(config.get(), &report.text));
  emit(report.str(), output_path(c.out, "", false));
  return 0;
}

int run_sweep(const std::vector<std::string>& axes, const std::string& kind, double target,
              bool timestamp, const Common& c) {
  if (axes.empty()) usage_error("sweep needs at least one --axis");
  auto config = load(c);
  json spec{{"axes", json::array()}, {"kind", kind}, {"target_snr", target}, {"timestamp", timestamp}};
  for (const auto& a : axes) spec["axes"].push_back(parse_axis(a));
  const std::string path = output_path(c.out, "sweep_" + config_hash(config.get()) + ".csv", true);
  OwnedString csv, summary;
  ok(cc_sweep(config.get(), spec.dump().c_str(), c.jobs, &csv.text, &summary.text));
  if (path.empty()) {
    std::cout << csv.str();
    return 0;
  }
  emit(csv.str(), path);
  std::cout << summary.str() << "\n";
  std::cerr << json{{"written", path}}.dump() << "\n";
  return 0;
}

int run_montecarlo(std::uint64_t shots, const Common& c) {
  auto config = load(c);
  std::uint64_t seed = 0;
  ok(cc_config_get_seed(config.get(), &seed));
  cc_montecarlo r;
  ok(cc_montecarlo_run(config.get(), shots, seed, &r));
  const json j{{"config_hash", config_hash(config.get())},
               {"snr", r.snr},
               {"p_err_analytic", r.p_err_analytic},
               {"p_err_empirical", r.p_err_empirical},
               {"stderr", r.standard_error},
               {"shots", r.shots},
               {"seed", r.seed}};
  emit(j.dump(2), output_path(c.out, "", false));
  return 0;
}

int run_check(const std::string& criteria, const Common& c) {
  const std::vector<int> ids = criteria.empty() ? std::vector<int>{} : parse_int_list(criteria);
  int passed = 0;
  auto print = [](int id, const char* name, int pass, const char* detail, double seconds, void*) {
    std::printf("[%s] %2d %s (%.2f s): %s\n", pass ? "PASS" : "FAIL", id, name, seconds, detail);
    std::fflush(stdout);
  };
  ok(cc_check(ids.data(), ids.size(), c.jobs, print, nullptr, &passed));
  const int total = ids.empty() ? cc_check_count() : static_cast<int>(ids.size());
  std::printf("%d/%d criteria passed\n", passed, total);
  return passed == total ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED enantiomer discrimination simulator", "chiralcav"};
  app.set_version_flag("--version", std::string(cc_version()));
  app.require_subcommand(1);

  Common common;

  auto* design = app.add_subcommand("design-cavity", "Fabry-Perot design for mode q at a target frequency");
  std::string R_m = "40 mm", qs = "0", target = "5.78109 GHz", mu_b = "1.9 D", format = "text";
  design->add_option("--R-m", R_m, "Mirror radius of curvature")->capture_default_str();
  design->add_option("--q", qs, "Longitudinal index, or a comma-separated list")->capture_default_str();
  design->add_option("--target", target, "Target mode frequency")->capture_default_str();
  design->add_option("--mu-b", mu_b, "b-axis dipole of the working transition")->capture_default_str();
  design->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  add_common(design, common, kOut);

  auto* esst = app.add_subcommand("esst", "Enantio-specific state transfer from one level");
  std::string phi = "-pi/2", chirality = "both";
  int level = 1;
  esst->add_option("--phi", phi, "Loop phase")->capture_default_str();
  esst->add_option("--chirality", chirality, "Enantiomer")
      ->check(CLI::IsMember({"left", "right", "both"}))
      ->capture_default_str();
  esst->add_option("--level", level, "Initial level")->check(CLI::Range(1, 3))->capture_default_str();
  add_common(esst, common, kOut);

  auto* simulate = app.add_subcommand("simulate", "Integrate a trajectory and write it as CSV");
  std::string hypothesis = "config", compare;
  simulate->add_option("--hypothesis", hypothesis, "Initial inversion: from the config, left (+1), right (-1) or both")
      ->check(CLI::IsMember({"config", "left", "right", "both"}))
      ->capture_default_str();
  simulate->add_option("--compare", compare, "Report a model comparison instead of a trajectory")
      ->check(CLI::IsMember({"order", "dissipation"}));
  add_common(simulate, common, kConfig | kOut | kSeed | kTolerance | kModel);

  auto* detect = app.add_subcommand("detect", "Homodyne counts, SNR and error probability of both hypotheses");
  add_common(detect, common, kConfig | kOut | kJobs | kSeed | kTolerance | kModel);

  auto* analytics = app.add_subcommand("analytics", "Closed-form report of the scenario as JSON");
  add_common(analytics, common, kConfig | kOut);

  auto* sweep = app.add_subcommand("sweep", "Parameter grid of SNR or critical molecule numbers");
  std::vector<std::string> axes;
  std::string kind = "snr";
  double target_snr = 3.0;
  bool timestamp = false;
  sweep->add_option("--axis", axes, "NAME=v1,v2,... | NAME=lin:a:b:n | NAME=log:a:b:n (N_m, lambda, v, Delta_m in Hz, M_Y)")
      ->take_all();
  sweep->add_option("--kind", kind, "Per-point quantity")
      ->check(CLI::IsMember({"snr", "critical"}))
      ->capture_default_str();
  sweep->add_option("--target-snr", target_snr, "SNR defining the critical molecule number")->capture_default_str();
  sweep->add_flag("--timestamp", timestamp, "Add a timestamp line to the CSV metadata");
  add_common(sweep, common, kConfig | kOut | kJobs | kSeed | kTolerance | kModel);

  auto* montecarlo = app.add_subcommand("montecarlo", "Empirical error rate from sampled homodyne shots");
  std::uint64_t shots = 1000000;
  montecarlo->add_option("--shots", shots, "Shots per hypothesis")->capture_default_str();
  add_common(montecarlo, common, kConfig | kOut | kSeed | kTolerance | kModel);

  auto* check = app.add_subcommand("check", "Run the acceptance criteria");
  std::string criteria;
  check->add_option("--criteria", criteria, "Comma-separated criterion ids (default: all)");
  add_common(check, common, kJobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"code", 2}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (*design) return run_design(R_m, qs, target, mu_b, format, common);
    if (*esst) return run_esst(phi, chirality, level, common);
    if (*simulate) return run_simulate(hypothesis, compare, common);
    if (*detect) return run_detect(common);
    if (*analytics) return run_analytics(common);
    if (*sweep) return run_sweep(axes, kind, target_snr, timestamp, common);
    if (*montecarlo) return run_montecarlo(shots, common);
    if (*check) return run_check(criteria, common);
  } catch (const Failure& f) {
    std::cerr << f.json_text << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"code", CC_ERR_INTERNAL}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}
