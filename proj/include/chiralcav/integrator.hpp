#pragma once

// Adaptive Dormand-Prince 5(4) integrator with FSAL and the order-4 dense
// output, for real state vectors.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace chiralcav {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;      // 0: no limit beyond the span
  double initial_step = 0.0;  // 0: automatic
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

using RhsFunction = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

// Integrates y' = f(t, y) from `t_start` with state `y0` and reports the
// state at every time of `output_times` (ascending, within [t_start, t_end]).
// `observer(i, t, y)` is called once per output time in order.
// Throws IntegrationError when the step collapses or the state turns
// non-finite.
IntegrationStats integrate_dopri5(
    const RhsFunction& f, double t_start, double t_end, std::vector<double> y0,
    std::span<const double> output_times, const IntegratorOptions& options,
    const std::function<void(std::size_t, double, std::span<const double>)>& observer);

}  // namespace chiralcav
