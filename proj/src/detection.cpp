#include "chiralcav/detection.hpp"

#include <cmath>

#include "chiralcav/error.hpp"
#include "chiralcav/special.hpp"

namespace chiralcav {

double instantaneous_signal(Complex c, double kappa, double phi_lo) {
  return std::sqrt(2.0 * kappa) * (std::polar(1.0, -phi_lo) * c).real();
}

double integrate_signal(const Trajectory& trajectory, const Window& window) {
  const auto& s = trajectory.samples;
  require(window.tf > window.t0, ErrorCode::WindowOutOfRange, "window needs tf > t0");
  require(s.size() >= 2, ErrorCode::WindowOutOfRange, "trajectory has fewer than two samples");
  const double slack = 1e-9 * (s.back().t - s.front().t);
  require(window.t0 >= s.front().t - slack && window.tf <= s.back().t + slack,
          ErrorCode::WindowOutOfRange, "detection window outside the trajectory span");
  const double t0 = std::max(window.t0, s.front().t);
  const double tf = std::min(window.tf, s.back().t);

  auto value_at = [&](std::size_t i, double t) {
    // Linear interpolation on segment [i, i+1].
    const auto& a = s[i];
    const auto& b = s[i + 1];
    const double w = (t - a.t) / (b.t - a.t);
    return a.signal + w * (b.signal - a.signal);
  };

  double total = 0.0;
  double t_prev = t0;
  double v_prev = 0.0;
  bool started = false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i + 1].t < t0) continue;
    if (!started) {
      v_prev = value_at(i, t0);
      started = true;
    }
    const double t_next = std::min(s[i + 1].t, tf);
    const double v_next = t_next == s[i + 1].t ? s[i + 1].signal : value_at(i, t_next);
    total += 0.5 * (v_prev + v_next) * (t_next - t_prev);
    t_prev = t_next;
    v_prev = v_next;
    if (t_next >= tf) break;
  }
  return total;
}

double noise_stddev(double N_lo, const Window& window) {
  require(N_lo > 0.0 && window.tf > window.t0, ErrorCode::InvalidArgument,
          "noise needs N_lo > 0 and tf > t0");
  return std::sqrt(N_lo * window.length());
}

double snr_from_counts(double n_left, double n_right, double N_lo, const Window& window) {
  return std::abs(n_left - n_right) * std::sqrt(N_lo) / (2.0 * noise_stddev(N_lo, window));
}

ShotStatistics shot_statistics(double n_left, double n_right, double N_lo, const Window& window) {
  ShotStatistics st;
  st.n_bar_L = n_left;
  st.n_bar_R = n_right;
  st.delta = noise_stddev(N_lo, window);
  st.snr = snr_from_counts(n_left, n_right, N_lo, window);
  st.p_err = error_probability(st.snr);
  return st;
}

double sample_shot(double n_bar_unit, double N_lo, const Window& window, Rng& rng) {
  std::normal_distribution<double> normal(n_bar_unit * std::sqrt(N_lo), noise_stddev(N_lo, window));
  return normal(rng);
}

Chirality decide(double n, Rng& rng, bool left_positive) {
  bool positive;
  if (n == 0.0) {
    positive = std::bernoulli_distribution(0.5)(rng);
  } else {
    positive = n > 0.0;
  }
  return positive == left_positive ? Chirality::Left : Chirality::Right;
}

MonteCarloResult monte_carlo_from_counts(double n_left, double n_right, double N_lo,
                                         const Window& window, std::uint64_t shots,
                                         std::uint64_t seed) {
  require(shots >= 1000, ErrorCode::InvalidArgument, "Monte-Carlo needs at least 1000 shots");
  MonteCarloResult r;
  r.statistics = shot_statistics(n_left, n_right, N_lo, window);
  r.p_err_analytic = r.statistics.p_err;
  r.shots = shots;
  r.seed = seed;

  Rng rng(seed);
  const bool left_positive = n_left >= n_right;
  const double scale = std::sqrt(N_lo);
  const double delta = r.statistics.delta;
  std::normal_distribution<double> noise(0.0, delta);
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (decide(n_left * scale + noise(rng), rng, left_positive) != Chirality::Left) ++errors;
    if (decide(n_right * scale + noise(rng), rng, left_positive) != Chirality::Right) ++errors;
  }
  const double total = 2.0 * static_cast<double>(shots);
  r.rate = static_cast<double>(errors) / total;
  r.standard_error = std::sqrt(std::max(r.rate * (1.0 - r.rate), 1.0 / total) / total);
  return r;
}

MonteCarloResult monte_carlo_error_rate(const Scenario& scenario, std::uint64_t shots,
                                        std::uint64_t seed) {
  Scenario left = scenario;
  left.sample.sigma_z0 = +1;
  Scenario right = scenario;
  right.sample.sigma_z0 = -1;
  const Window window = scenario.window();
  const double n_left = integrate_signal(integrate(left), window);
  const double n_right = integrate_signal(integrate(right), window);
  return monte_carlo_from_counts(n_left, n_right, scenario.detection.N_lo, window, shots, seed);
}

}  // namespace chiralcav
