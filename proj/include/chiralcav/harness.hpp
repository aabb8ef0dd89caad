#pragma once

// Experiment orchestration: hypothesis pairs, SNR sweeps, critical molecule
// numbers, lambda-v maps, model comparisons. Grid cells run on a fixed worker
// pool; results are always returned in grid order.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chiralcav/detection.hpp"
#include "chiralcav/dynamics.hpp"
#include "chiralcav/scenario.hpp"

namespace chiralcav {

// Runs body(i) for i in [0, n) on `jobs` threads (0: hardware concurrency).
// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

unsigned default_jobs();

// Trajectories keyed by a hash of the canonical scenario text and model.
class TrajectoryCache {
 public:
  std::shared_ptr<const Trajectory> get(const Scenario& scenario, Model model);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<const Trajectory>> entries_;
  std::size_t hits_ = 0;
};

std::uint64_t scenario_hash(const Scenario& scenario, Model model);
std::string hex64(std::uint64_t value);

struct PairResult {
  ShotStatistics statistics;
  Window window;
  double sigma_z_excursion = 0.0;  // max |sigma_z(t) - sigma_z(0)| over both hypotheses
  std::shared_ptr<const Trajectory> left;
  std::shared_ptr<const Trajectory> right;
};

// Integrates the Left (sigma_z0 = +1) and Right (-1) hypotheses.
PairResult evaluate_pair(const Scenario& scenario, Model model, TrajectoryCache* cache = nullptr,
                         unsigned jobs = 1);

struct SweepAxis {
  std::string name;  // N_m, lambda, v, Delta_m (Hz), M_Y
  std::vector<double> values;
};

// Sets one named scenario parameter; Delta_m is given in Hz.
void apply_axis(Scenario& scenario, const std::string& name, double value);

std::vector<double> linspace(double first, double last, std::size_t count);
std::vector<double> logspace(double first, double last, std::size_t count);

enum class SweepKind { Snr, Critical };

struct SweepSpec {
  std::vector<SweepAxis> axes;
  Scenario scenario;
  Model model = Model::First;
  SweepKind kind = SweepKind::Snr;
  double target_snr = 3.0;

  void validate() const;
};

struct SweepRow {
  std::vector<double> coords;
  ShotStatistics statistics;
  double sigma_z_excursion = 0.0;
  std::optional<int> critical_nm;
  double wall_time = 0.0;  // s
  std::string error;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  std::vector<std::string> axis_names;
  SweepKind kind = SweepKind::Snr;
  Model model = Model::First;
  std::vector<SweepRow> rows;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
};

// Cartesian product of the axes, first axis slowest.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs, TrajectoryCache* cache = nullptr);

// CSV with '#' metadata; the wall_time column is the only run-dependent field
// unless `timestamp` is set.
void write_sweep_csv(std::ostream& out, const SweepResult& result, bool timestamp = false);
std::string sweep_summary_json(const SweepResult& result);

struct SnrSweep {
  SweepResult result;
  LinearFit fit;
};

SnrSweep snr_vs_nm(const Scenario& scenario, const std::vector<double>& nm_values,
                   Model model = Model::First, unsigned jobs = 1, TrajectoryCache* cache = nullptr);

struct CriticalResult {
  int n_critical = 0;
  double lower = 0.0;  // final bracket
  double upper = 0.0;
  int evaluations = 0;
};

// Smallest integer N_m reaching target_snr: geometric bracketing from N_m = 16
// up to 1e4, then bisection on real N_m to a bracket narrower than 0.5, then
// the upper end rounded up. Throws Error(BracketNotFound).
CriticalResult critical_nm(const Scenario& scenario, double target_snr = 3.0,
                           Model model = Model::First, TrajectoryCache* cache = nullptr,
                           unsigned jobs = 1);

struct MapCell {
  double lambda = 0.0;
  double v = 0.0;
  std::optional<int> n_critical;
  std::string error;
};

std::vector<MapCell> lambda_v_map(const std::vector<double>& lambdas, const std::vector<double>& vs,
                                  const Scenario& scenario, unsigned jobs = 1);

// Largest relative rise of N_cr along lambda within each v row (0 when
// monotone non-increasing).
double map_monotonicity_violation(const std::vector<MapCell>& cells, std::size_t n_lambda);

struct TrajectoryDeviation {
  double abs_c = 0.0;    // max | |c1| - |c2| | / max |c1|
  double arg_c = 0.0;    // max |arg c1 - arg c2|, rad
  double arg_c_rel = 0.0;  // arg deviation / max |arg c1|
  double sigma_z = 0.0;  // max |sigma_z1 - sigma_z2|
};

TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b);

struct OrderReport {
  TrajectoryDeviation deviation;
  double n_first = 0.0;
  double n_second = 0.0;
  double eta_cmp = 0.0;
  double sigma_z_first_centre = 0.0;  // at the centre crossing time
  double sigma_z_second_centre = 0.0;
};

OrderReport order_comparison(const Scenario& scenario);

struct DissipationReport {
  TrajectoryDeviation deviation;
  DissipationParams params;
  double worst = 0.0;  // max of the relative deviations
  bool passed = false;
  bool identical = false;  // bitwise-equal trajectories
};

DissipationReport dissipation_check(const Scenario& scenario, const DissipationParams& diss,
                                    double threshold = 1e-3);

}  // namespace chiralcav
