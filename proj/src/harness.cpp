#include "chiralcav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <exception>
#include <thread>

#include "json.hpp"

#include "chiralcav/config.hpp"
#include "chiralcav/error.hpp"

namespace chiralcav {

unsigned default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = default_jobs();
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t scenario_hash(const Scenario& scenario, Model model) {
  std::string key = canonical_text(scenario);
  key += "\nmodel=";
  key += to_string(model);
  return fnv1a(key);
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::shared_ptr<const Trajectory> TrajectoryCache::get(const Scenario& scenario, Model model) {
  const auto key = scenario_hash(scenario, model);
  {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto computed = std::make_shared<const Trajectory>(integrate(scenario, model));
  std::lock_guard lock(mutex_);
  return entries_.emplace(key, std::move(computed)).first->second;
}

std::size_t TrajectoryCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t TrajectoryCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

namespace {

std::shared_ptr<const Trajectory> run(const Scenario& scenario, Model model, TrajectoryCache* cache) {
  if (cache) return cache->get(scenario, model);
  return std::make_shared<const Trajectory>(integrate(scenario, model));
}

double excursion(const Trajectory& t) {
  double worst = 0.0;
  const double z0 = t.samples.front().sigma_z;
  for (const auto& s : t.samples) worst = std::max(worst, std::abs(s.sigma_z - z0));
  return worst;
}

std::string axis_text(const std::vector<SweepAxis>& axes) {
  std::string out;
  char buf[40];
  for (const auto& a : axes) {
    out += a.name + ":";
    for (double v : a.values) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out += buf;
    }
    out += ";";
  }
  return out;
}

}  // namespace

PairResult evaluate_pair(const Scenario& scenario, Model model, TrajectoryCache* cache, unsigned jobs) {
  Scenario hyp[2] = {scenario, scenario};
  hyp[0].sample.sigma_z0 = +1;
  hyp[1].sample.sigma_z0 = -1;
  std::shared_ptr<const Trajectory> out[2];
  parallel_for(2, jobs, [&](std::size_t i) { out[i] = run(hyp[i], model, cache); });

  PairResult r;
  r.window = scenario.window();
  r.left = out[0];
  r.right = out[1];
  const double n_left = integrate_signal(*r.left, r.window);
  const double n_right = integrate_signal(*r.right, r.window);
  r.statistics = shot_statistics(n_left, n_right, scenario.detection.N_lo, r.window);
  r.sigma_z_excursion = std::max(excursion(*r.left), excursion(*r.right));
  return r;
}

void apply_axis(Scenario& scenario, const std::string& name, double value) {
  if (name == "N_m") {
    scenario.sample.N_m = value;
  } else if (name == "lambda") {
    scenario.drive.lambda = value;
    scenario.drive.eta.reset();
  } else if (name == "v") {
    scenario.sample.v = value;
  } else if (name == "Delta_m") {
    scenario.drive.Delta_m = constants::angular(value);
    scenario.drive.eta.reset();
  } else if (name == "M_Y") {
    scenario.detection.M_Y = value;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown sweep axis '" + name + "' (N_m, lambda, v, Delta_m, M_Y)");
  }
}

std::vector<double> linspace(double first, double last, std::size_t count) {
  require(count >= 1, ErrorCode::InvalidArgument, "linspace needs at least one point");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? first : first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> logspace(double first, double last, std::size_t count) {
  require(first > 0.0 && last > 0.0, ErrorCode::InvalidArgument, "logspace needs positive ends");
  auto out = linspace(std::log10(first), std::log10(last), count);
  for (auto& v : out) v = std::pow(10.0, v);
  if (count >= 2) {
    out.front() = first;
    out.back() = last;
  }
  return out;
}

void SweepSpec::validate() const {
  require(!axes.empty(), ErrorCode::Validation, "sweep needs at least one axis");
  for (const auto& axis : axes) {
    require(!axis.values.empty(), ErrorCode::Validation, "sweep axis '" + axis.name + "' is empty");
    Scenario probe = scenario;
    for (double v : axis.values) {
      apply_axis(probe, axis.name, v);
      probe.validate();
    }
  }
  require(target_snr > 0.0, ErrorCode::Validation, "target SNR must be positive");
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument,
          "line fit needs two or more matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs, TrajectoryCache* cache) {
  spec.validate();
  SweepResult result;
  result.kind = spec.kind;
  result.model = spec.model;
  result.seed = spec.scenario.seed;
  result.version = CHIRALCAV_VERSION;
  for (const auto& a : spec.axes) result.axis_names.push_back(a.name);
  result.config_hash = hex64(fnv1a(canonical_text(spec.scenario) + "\n" + axis_text(spec.axes) +
                                   (spec.kind == SweepKind::Snr ? "snr" : "critical") +
                                   std::string(to_string(spec.model))));

  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.values.size();
  result.rows.resize(total);

  parallel_for(total, jobs, [&](std::size_t index) {
    auto& row = result.rows[index];
    Scenario scenario = spec.scenario;
    std::size_t rest = index;
    row.coords.resize(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& axis = spec.axes[k];
      const double value = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
      row.coords[k] = value;
    }
    for (std::size_t k = 0; k < spec.axes.size(); ++k) apply_axis(scenario, spec.axes[k].name, row.coords[k]);

    const auto start = std::chrono::steady_clock::now();
    try {
      if (spec.kind == SweepKind::Snr) {
        const auto pair = evaluate_pair(scenario, spec.model, cache);
        row.statistics = pair.statistics;
        row.sigma_z_excursion = pair.sigma_z_excursion;
      } else {
        row.critical_nm = critical_nm(scenario, spec.target_snr, spec.model, cache).n_critical;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, bool timestamp) {
  out << "# chiralcav " << result.version << " sweep\n";
  out << "# kind " << (result.kind == SweepKind::Snr ? "snr" : "critical") << "\n";
  out << "# model " << to_string(result.model) << "\n";
  out << "# config_hash " << result.config_hash << "\n";
  out << "# seed " << result.seed << "\n";
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# timestamp " << buf << "\n";
  }
  for (const auto& name : result.axis_names) out << name << ",";
  out << "n_bar_L,n_bar_R,snr,p_err,sigma_z_excursion,critical_nm,error,wall_time\n";
  char buf[64];
  for (const auto& row : result.rows) {
    for (double c : row.coords) {
      std::snprintf(buf, sizeof buf, "%.12g,", c);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,", row.statistics.n_bar_L, row.statistics.n_bar_R);
    out << buf;
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,", row.statistics.snr, row.statistics.p_err,
                  row.sigma_z_excursion);
    out << buf;
    if (row.critical_nm) out << *row.critical_nm;
    out << ",";
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << err << ",";
    std::snprintf(buf, sizeof buf, "%.6f\n", row.wall_time);
    out << buf;
  }
}

std::string sweep_summary_json(const SweepResult& result) {
  nlohmann::json j;
  j["version"] = result.version;
  j["config_hash"] = result.config_hash;
  j["seed"] = result.seed;
  j["model"] = std::string(to_string(result.model));
  j["kind"] = result.kind == SweepKind::Snr ? "snr" : "critical";
  j["axes"] = result.axis_names;
  j["points"] = result.rows.size();
  std::size_t failures = 0;
  for (const auto& r : result.rows) failures += r.error.empty() ? 0 : 1;
  j["failures"] = failures;
  if (result.kind == SweepKind::Snr) {
    double best = 0.0;
    for (const auto& r : result.rows) best = std::max(best, r.statistics.snr);
    j["max_snr"] = best;
    if (result.axis_names.size() == 1 && result.axis_names[0] == "N_m" && result.rows.size() >= 2) {
      std::vector<double> x, y;
      for (const auto& r : result.rows) {
        x.push_back(r.coords[0]);
        y.push_back(r.statistics.snr);
      }
      const auto fit = fit_line(x, y);
      j["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
      if (fit.slope > 0) j["crossing_nm_snr3"] = (3.0 - fit.intercept) / fit.slope;
    }
  } else {
    nlohmann::json crit = nlohmann::json::array();
    for (const auto& r : result.rows) {
      nlohmann::json cell;
      for (std::size_t k = 0; k < result.axis_names.size(); ++k) cell[result.axis_names[k]] = r.coords[k];
      if (r.critical_nm) cell["critical_nm"] = *r.critical_nm;
      else cell["critical_nm"] = nullptr;
      crit.push_back(cell);
    }
    j["critical"] = crit;
  }
  return j.dump(2);
}

SnrSweep snr_vs_nm(const Scenario& scenario, const std::vector<double>& nm_values, Model model,
                   unsigned jobs, TrajectoryCache* cache) {
  require(std::is_sorted(nm_values.begin(), nm_values.end()), ErrorCode::InvalidArgument,
          "N_m values must be sorted ascending");
  SweepSpec spec;
  spec.axes = {{"N_m", nm_values}};
  spec.scenario = scenario;
  spec.model = model;
  SnrSweep out;
  out.result = run_sweep(spec, jobs, cache);
  std::vector<double> x, y;
  for (const auto& row : out.result.rows) {
    if (!row.error.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "N_m=%.12g: ", row.coords[0]);
      throw Error(ErrorCode::Integration, buf + row.error);
    }
    x.push_back(row.coords[0]);
    y.push_back(row.statistics.snr);
  }
  if (x.size() >= 2) out.fit = fit_line(x, y);
  return out;
}

CriticalResult critical_nm(const Scenario& scenario, double target_snr, Model model,
                           TrajectoryCache* cache, unsigned jobs) {
  constexpr double upper_limit = 1e4;
  CriticalResult r;
  auto snr_at = [&](double n) {
    Scenario s = scenario;
    s.sample.N_m = n;
    ++r.evaluations;
    return evaluate_pair(s, model, cache, jobs).statistics.snr;
  };
  double lo = 0.0;
  double hi = 16.0;
  while (snr_at(hi) < target_snr) {
    if (hi >= upper_limit) {
      throw Error(ErrorCode::BracketNotFound,
                  "SNR stays below the target up to N_m = 1e4");
    }
    lo = hi;
    hi = std::min(2.0 * hi, upper_limit);
  }
  while (hi - lo >= 0.5) {
    const double mid = 0.5 * (lo + hi);
    if (snr_at(mid) >= target_snr) hi = mid;
    else lo = mid;
  }
  r.lower = lo;
  r.upper = hi;
  r.n_critical = static_cast<int>(std::ceil(hi));
  return r;
}

std::vector<MapCell> lambda_v_map(const std::vector<double>& lambdas, const std::vector<double>& vs,
                                  const Scenario& scenario, unsigned jobs) {
  require(!lambdas.empty() && !vs.empty(), ErrorCode::InvalidArgument, "map grids must be non-empty");
  for (double l : lambdas) require(l > 0, ErrorCode::InvalidArgument, "lambda grid must be positive");
  for (double v : vs) require(v > 0, ErrorCode::InvalidArgument, "v grid must be positive");
  SweepSpec spec;
  spec.axes = {{"v", vs}, {"lambda", lambdas}};
  spec.scenario = scenario;
  spec.kind = SweepKind::Critical;
  const auto result = run_sweep(spec, jobs);
  std::vector<MapCell> cells;
  for (const auto& row : result.rows)
    cells.push_back({row.coords[1], row.coords[0], row.critical_nm, row.error});
  return cells;
}

double map_monotonicity_violation(const std::vector<MapCell>& cells, std::size_t n_lambda) {
  require(n_lambda > 0 && cells.size() % n_lambda == 0, ErrorCode::InvalidArgument,
          "cells do not form full lambda rows");
  double worst = 0.0;
  for (std::size_t row = 0; row < cells.size() / n_lambda; ++row) {
    for (std::size_t i = 1; i < n_lambda; ++i) {
      const auto& a = cells[row * n_lambda + i - 1];
      const auto& b = cells[row * n_lambda + i];
      if (!a.n_critical || !b.n_critical) continue;
      worst = std::max(worst, (*b.n_critical - *a.n_critical) / static_cast<double>(*a.n_critical));
    }
  }
  return worst;
}

TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b) {
  require(a.samples.size() == b.samples.size(), ErrorCode::InvalidArgument,
          "trajectories are on different grids");
  TrajectoryDeviation d;
  double abs_scale = 0.0, arg_scale = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& x = a.samples[i];
    const auto& y = b.samples[i];
    abs_scale = std::max(abs_scale, std::abs(x.c));
    arg_scale = std::max(arg_scale, std::abs(std::arg(x.c)));
    d.abs_c = std::max(d.abs_c, std::abs(std::abs(x.c) - std::abs(y.c)));
    d.arg_c = std::max(d.arg_c, std::abs(std::arg(x.c) - std::arg(y.c)));
    d.sigma_z = std::max(d.sigma_z, std::abs(x.sigma_z - y.sigma_z));
  }
  if (abs_scale > 0) d.abs_c /= abs_scale;
  d.arg_c_rel = arg_scale > 0 ? d.arg_c / arg_scale : d.arg_c;
  return d;
}

OrderReport order_comparison(const Scenario& scenario) {
  require(scenario.sample.N_m <= 5e4, ErrorCode::InvalidArgument,
          "second-order comparison is limited to N_m <= 5e4");
  std::shared_ptr<const Trajectory> t[2];
  const Model models[2] = {Model::First, Model::Second};
  for (int i = 0; i < 2; ++i) t[i] = run(scenario, models[i], nullptr);
  OrderReport r;
  r.deviation = compare_trajectories(*t[0], *t[1]);
  const Window w = scenario.window();
  r.n_first = integrate_signal(*t[0], w);
  r.n_second = integrate_signal(*t[1], w);
  const double diff = std::abs(r.n_first - r.n_second);
  const double sum = std::abs(r.n_first + r.n_second);
  r.eta_cmp = diff == 0.0 ? 0.0 : diff / std::max(sum, 1e-300);

  const double centre = scenario.sample.trapped ? scenario.t_end() : scenario.centre_time();
  auto at_centre = [&](const Trajectory& traj) {
    const auto it = std::lower_bound(traj.samples.begin(), traj.samples.end(), centre - 1e-12,
                                     [](const TrajectorySample& s, double t) { return s.t < t; });
    return it == traj.samples.end() ? traj.samples.back().sigma_z : it->sigma_z;
  };
  r.sigma_z_first_centre = at_centre(*t[0]);
  r.sigma_z_second_centre = at_centre(*t[1]);
  return r;
}

DissipationReport dissipation_check(const Scenario& scenario, const DissipationParams& diss,
                                    double threshold) {
  Scenario s = scenario;
  s.dissipation = diss;
  const auto first = integrate(s, Model::First);
  const auto dissipative = integrate(s, Model::Dissipative);
  DissipationReport r;
  r.params = diss;
  r.deviation = compare_trajectories(first, dissipative);
  r.worst = std::max({r.deviation.abs_c, r.deviation.arg_c_rel, r.deviation.sigma_z});
  r.passed = r.worst < threshold;
  r.identical = first.samples.size() == dissipative.samples.size();
  for (std::size_t i = 0; r.identical && i < first.samples.size(); ++i) {
    const auto& a = first.samples[i];
    const auto& b = dissipative.samples[i];
    r.identical = std::memcmp(&a.c, &b.c, sizeof a.c) == 0 &&
                  std::memcmp(&a.sigma, &b.sigma, sizeof a.sigma) == 0 &&
                  std::memcmp(&a.sigma_z, &b.sigma_z, sizeof a.sigma_z) == 0;
  }
  return r;
}

}  // namespace chiralcav
