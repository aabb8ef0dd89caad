#include "chiralcav/integrator.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <string>

#include "chiralcav/error.hpp"

namespace chiralcav {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

std::string time_text(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

}  // namespace

void IntegratorOptions::validate() const {
  require(rtol > 0.0 && atol > 0.0, ErrorCode::Validation, "integrator tolerances must be positive");
  require(max_step >= 0.0 && initial_step >= 0.0, ErrorCode::Validation,
          "integrator step limits must be non-negative");
  require(max_steps > 0, ErrorCode::Validation, "integrator step budget must be positive");
}

IntegrationStats integrate_dopri5(
    const RhsFunction& f, double t_start, double t_end, std::vector<double> y,
    std::span<const double> output_times, const IntegratorOptions& options,
    const std::function<void(std::size_t, double, std::span<const double>)>& observer) {
  options.validate();
  require(std::isfinite(t_start) && std::isfinite(t_end) && t_end >= t_start,
          ErrorCode::InvalidArgument, "integration span must be finite and ordered");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    require(output_times[i] >= t_start && output_times[i] <= t_end, ErrorCode::InvalidArgument,
            "output time outside the integration span");
    require(i == 0 || output_times[i] >= output_times[i - 1], ErrorCode::InvalidArgument,
            "output times must be ascending");
  }

  const std::size_t n = y.size();
  IntegrationStats stats;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n), out(n);
  auto eval = [&](double t, const std::vector<double>& state, std::vector<double>& dydt) {
    f(t, state, dydt);
    ++stats.evaluations;
  };

  std::size_t next = 0;
  auto emit_exact = [&](double t) {
    while (next < output_times.size() && output_times[next] == t) {
      observer(next, t, y);
      ++next;
    }
  };

  double t = t_start;
  emit_exact(t);
  if (t_end == t_start) return stats;

  const double span = t_end - t_start;
  const double max_step = options.max_step > 0.0 ? std::min(options.max_step, span) : span;
  eval(t, y, k1);

  double h = options.initial_step;
  if (h <= 0.0) {
    // Hairer's starting step heuristic.
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = options.atol + options.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, max_step);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, ytmp, k2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = options.atol + options.rtol * std::abs(y[i]);
      d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min({100.0 * h0, h1, max_step});
  }

  double err_prev = 1e-4;
  bool rejected_last = false;
  while (t < t_end) {
    if (stats.accepted + stats.rejected >= options.max_steps)
      throw IntegrationError(t, "step budget exhausted at t=" + time_text(t));
    if (t + h > t_end) h = t_end - t;
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationError(t, "step size underflow at t=" + time_text(t));

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = (t + h >= t_end) ? t_end : t + h;
    eval(t_new, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t_new, ynew, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / n);
    if (!finite || !std::isfinite(err)) {
      ++stats.rejected;
      h *= 0.1;
      rejected_last = true;
      continue;
    }

    if (err <= 1.0) {
      // Dense-output coefficients for the accepted step.
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        r1[i] = y[i];
        r2[i] = ydiff;
        r3[i] = bspl;
        r4[i] = ydiff - h * k7[i] - bspl;
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next < output_times.size() && output_times[next] <= t_new) {
        const double tq = output_times[next];
        if (tq == t_new) {
          observer(next, tq, ynew);
        } else {
          const double s = (tq - t) / h;
          const double s1 = 1.0 - s;
          for (std::size_t i = 0; i < n; ++i)
            out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
          observer(next, tq, out);
        }
        ++next;
      }
      t = t_new;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;

      // PI step control.
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, 10.0);
      if (rejected_last) fac = std::min(fac, 1.0);
      err_prev = std::max(err, 1e-4);
      h = std::min(h * fac, max_step);
      rejected_last = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      rejected_last = true;
    }
  }
  while (next < output_times.size()) {
    observer(next, output_times[next], y);
    ++next;
  }
  return stats;
}

}  // namespace chiralcav
