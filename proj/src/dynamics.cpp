#include "chiralcav/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "chiralcav/error.hpp"

namespace chiralcav {

namespace {

constexpr Complex I{0.0, 1.0};

void put(std::span<double> y, std::size_t& k, Complex v) {
  y[k++] = v.real();
  y[k++] = v.imag();
}

Complex take(std::span<const double> y, std::size_t& k) {
  const Complex v{y[k], y[k + 1]};
  k += 2;
  return v;
}

}  // namespace

std::array<double, SecondOrderState::size> SecondOrderState::pack() const {
  std::array<double, size> y{};
  std::size_t k = 0;
  put(y, k, c);
  put(y, k, s);
  y[k++] = z;
  put(y, k, zc);
  put(y, k, sdc);
  y[k++] = sds;
  put(y, k, zs);
  y[k++] = zz;
  put(y, k, cc);
  put(y, k, sc);
  y[k++] = cdc;
  put(y, k, ss);
  return y;
}

SecondOrderState SecondOrderState::unpack(std::span<const double> y) {
  require(y.size() >= size, ErrorCode::InvalidArgument, "second-order state needs 20 reals");
  SecondOrderState m;
  std::size_t k = 0;
  m.c = take(y, k);
  m.s = take(y, k);
  m.z = y[k++];
  m.zc = take(y, k);
  m.sdc = take(y, k);
  m.sds = y[k++];
  m.zs = take(y, k);
  m.zz = y[k++];
  m.cc = take(y, k);
  m.sc = take(y, k);
  m.cdc = y[k++];
  m.ss = take(y, k);
  return m;
}

SecondOrderState SecondOrderState::factorized(Complex c, Complex s, double z) {
  SecondOrderState m;
  m.c = c;
  m.s = s;
  m.z = z;
  m.zc = z * c;
  m.sdc = std::conj(s) * c;
  m.sds = std::norm(s);
  m.zs = z * s;
  m.zz = z * z;
  m.cc = c * c;
  m.sc = s * c;
  m.cdc = std::norm(c);
  m.ss = s * s;
  return m;
}

Rates Rates::from(const Scenario& scenario) {
  return {scenario.cavity.kappa, scenario.eta(), scenario.drive.Delta_m, scenario.drive.Delta_c,
          scenario.sample.N_m};
}

double coupling_profile(const SampleConfig& sample, double g0, double w0, double t) {
  const double y0 = sample.Ybar0.value_or(-4.0 * w0);
  if (sample.trapped && !sample.trap_entry) return 0.5 * g0;
  double y = y0 + sample.v * t;
  if (sample.trapped && y * y0 <= 0.0) y = 0.0;  // held at the centre
  return averaged_coupling(g0, y, w0);
}

double coupling_profile(const Scenario& scenario, double t) {
  return coupling_profile(scenario.sample, scenario.cavity.g0, scenario.cavity.w0, t);
}

MeanFieldState deriv_first_order(const MeanFieldState& s, double gbar, const Rates& r) {
  MeanFieldState d;
  d.c = -r.kappa * s.c - I * gbar * r.N_m * s.sigma + r.eta;
  d.sigma = -I * r.Delta_m * s.sigma + I * gbar * s.c * s.sigma_z;
  d.sigma_z = (2.0 * I * gbar * (std::conj(s.c) * s.sigma - s.c * std::conj(s.sigma))).real();
  return d;
}

MeanFieldState deriv_dissipative(const MeanFieldState& s, double gbar, const Rates& r,
                                 const DissipationParams& diss) {
  MeanFieldState d = deriv_first_order(s, gbar, r);
  if (r.Delta_c != 0.0) d.c -= I * r.Delta_c * s.c;
  if (diss.gamma != 0.0 || diss.V_max != 0.0) {
    const double others = r.N_m - 1.0;
    d.sigma += -diss.gamma * s.sigma + others * (I * diss.V_max + diss.gamma) * s.sigma_z * s.sigma;
    d.sigma_z += -2.0 * diss.gamma * (s.sigma_z + 1.0) - 4.0 * others * diss.gamma * std::norm(s.sigma);
  }
  return d;
}

SecondOrderState deriv_second_order(const SecondOrderState& m, double g, const Rates& r) {
  const double N = r.N_m;
  const double kappa = r.kappa;
  const double Dm = r.Delta_m;
  const double eta = r.eta;
  const auto cj = [](Complex v) { return std::conj(v); };
  const Complex c = m.c, s = m.s, zc = m.zc, sdc = m.sdc, zs = m.zs, cc = m.cc, sc = m.sc, ss = m.ss;
  const double z = m.z, sds = m.sds, zz = m.zz, cdc = m.cdc;

  SecondOrderState d;
  d.c = -(kappa + I * r.Delta_c) * c - I * g * N * s + eta;
  d.s = -I * Dm * s + I * g * zc;
  d.z = (2.0 * I * g * (cj(sdc) - sdc)).real();
  d.zc = -(kappa + I * r.Delta_c) * zc + I * g * s - I * g * (N - 1.0) * zs + eta * z +
         2.0 * I * g *
             (cj(sdc) * c + cj(c) * sc + cdc * s - 2.0 * cj(c) * s * c - cj(s) * cc - 2.0 * sdc * c +
              2.0 * cj(s) * c * c);
  d.sdc = -(kappa + I * r.Delta_c - I * Dm) * sdc - I * g * (0.5 * (z + 1.0) + (N - 1.0) * sds) +
          eta * cj(s) - I * g * (cj(c) * zc + cj(zc) * c + z * cdc - 2.0 * cj(c) * z * c);
  d.sds = (-I * g *
           (z * cj(sdc) + cj(zc) * s + zs * cj(c) - 2.0 * z * cj(c) * s - cj(s) * zc - cj(zs) * c -
            sdc * z + 2.0 * cj(s) * z * c))
              .real();
  d.zs = -I * Dm * zs + I * g * (2.0 * z * zc + zz * c - 2.0 * z * z * c) +
         2.0 * I * g *
             (cj(c) * ss + 2.0 * cj(sdc) * s - 2.0 * cj(c) * s * s - cj(s) * sc - sdc * s - sds * c +
              2.0 * cj(s) * c * s);
  // The closing term enters with +2 <sigma^dag><c><sigma_z>; with the opposite
  // sign the real moment <sigma_z sigma_z> acquires an imaginary part.
  d.zz = (4.0 * I * g *
          (cj(c) * zs + cj(sdc) * z + cj(zc) * s - 2.0 * cj(c) * s * z - cj(s) * zc - sdc * z -
           cj(zs) * c + 2.0 * cj(s) * c * z))
             .real();
  d.cc = -2.0 * (kappa + I * r.Delta_c) * cc - 2.0 * I * g * N * sc + 2.0 * eta * c;
  d.sc = -I * Dm * sc + I * g * (z * cc + 2.0 * zc * c - 2.0 * z * c * c) -
         (kappa + I * r.Delta_c) * sc - I * g * (N - 1.0) * ss + eta * s;
  d.cdc = -2.0 * kappa * cdc + (I * g * N * (sdc - cj(sdc))).real() + eta * 2.0 * c.real();
  d.ss = -2.0 * I * Dm * ss + 2.0 * I * g * (z * sc + zs * c + zc * s - 2.0 * z * c * s);
  return d;
}

Complex steady_state_dispersive(double gbar, const Rates& r, double sigma_z) {
  require(r.kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
  return r.eta / Complex(r.kappa, gbar * gbar * r.N_m * sigma_z / r.Delta_m);
}

std::vector<double> output_grid(const Scenario& scenario) {
  std::vector<double> grid;
  const auto& sample = scenario.sample;
  if (!sample.trapped || sample.trap_entry) {
    const double tau = scenario.tau();
    const double t_moving = sample.trapped ? scenario.centre_time() : scenario.t_end();
    const auto steps = static_cast<std::size_t>(std::ceil(t_moving / tau * scenario.samples_per_tau - 1e-9));
    for (std::size_t i = 0; i <= steps; ++i)
      grid.push_back(std::min(t_moving, static_cast<double>(i) * tau / scenario.samples_per_tau));
  }
  if (sample.trapped) {
    const double start = sample.trap_entry ? scenario.centre_time() : 0.0;
    const std::size_t n = std::max<std::size_t>(scenario.trapped_samples, 1);
    for (std::size_t i = grid.empty() ? 0 : 1; i <= n; ++i)
      grid.push_back(start + sample.trap_time * static_cast<double>(i) / static_cast<double>(n));
  }
  grid.back() = scenario.t_end();
  return grid;
}

Trajectory integrate(const Scenario& scenario) { return integrate(scenario, scenario.model); }

Trajectory integrate(const Scenario& scenario, Model model) {
  scenario.validate();
  const Rates rates = Rates::from(scenario);
  const DissipationParams diss = scenario.dissipation_params();
  const double c0 = rates.eta / rates.kappa;
  const double z0 = scenario.sample.sigma_z0;

  Trajectory traj;
  traj.model = model;
  traj.kappa = rates.kappa;
  traj.phi_lo = scenario.detection.phi_lo;
  traj.tau = scenario.sample.trapped && !scenario.sample.trap_entry ? 0.0 : scenario.tau();
  traj.window = scenario.window();

  const auto grid = output_grid(scenario);
  traj.samples.resize(grid.size());
  const Complex lo = std::polar(1.0, -traj.phi_lo);
  const double root2k = std::sqrt(2.0 * rates.kappa);

  IntegratorOptions options = scenario.integrator;
  if (options.max_step == 0.0 && (!scenario.sample.trapped || scenario.sample.trap_entry))
    options.max_step = scenario.tau() / 20.0;

  std::vector<double> y0;
  RhsFunction rhs;
  std::function<void(std::size_t, double, std::span<const double>)> observer;

  auto record = [&](std::size_t i, double t, Complex c, Complex s, double z, double photons) {
    auto& out = traj.samples[i];
    out.t = t;
    out.c = c;
    out.sigma = s;
    out.sigma_z = z;
    out.gbar = coupling_profile(scenario, t);
    out.signal = root2k * (lo * c).real();
    out.photons = photons;
  };

  if (model == Model::Second) {
    const auto init = SecondOrderState::factorized(c0, 0.0, z0).pack();
    y0.assign(init.begin(), init.end());
    rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
      const auto d = deriv_second_order(SecondOrderState::unpack(y), coupling_profile(scenario, t), rates)
                         .pack();
      std::copy(d.begin(), d.end(), dy.begin());
    };
    observer = [&](std::size_t i, double t, std::span<const double> y) {
      const auto m = SecondOrderState::unpack(y);
      record(i, t, m.c, m.s, m.z, m.cdc);
    };
  } else {
    y0 = {c0, 0.0, 0.0, 0.0, z0};
    const bool dissipative = model == Model::Dissipative;
    rhs = [&, dissipative](double t, std::span<const double> y, std::span<double> dy) {
      const MeanFieldState s{{y[0], y[1]}, {y[2], y[3]}, y[4]};
      const double g = coupling_profile(scenario, t);
      const auto d = dissipative ? deriv_dissipative(s, g, rates, diss) : deriv_first_order(s, g, rates);
      dy[0] = d.c.real();
      dy[1] = d.c.imag();
      dy[2] = d.sigma.real();
      dy[3] = d.sigma.imag();
      dy[4] = d.sigma_z;
    };
    observer = [&](std::size_t i, double t, std::span<const double> y) {
      const Complex c{y[0], y[1]};
      record(i, t, c, {y[2], y[3]}, y[4], std::norm(c));
    };
  }

  traj.stats = integrate_dopri5(rhs, 0.0, scenario.t_end(), std::move(y0), grid, options, observer);

  if (model == Model::First) {
    for (const auto& s : traj.samples)
      traj.bloch_deviation = std::max(
          traj.bloch_deviation, std::abs(s.sigma_z * s.sigma_z + 4.0 * std::norm(s.sigma) - 1.0));
  }
  return traj;
}

}  // namespace chiralcav
