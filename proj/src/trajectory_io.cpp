#include "chiralcav/trajectory_io.hpp"

#include <cmath>
#include <cstdio>

#include "chiralcav/constants.hpp"

namespace chiralcav {

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::string& config_hash) {
  out << "# chiralcav " << CHIRALCAV_VERSION << " trajectory, model " << to_string(trajectory.model)
      << "\n";
  if (!config_hash.empty()) out << "# config_hash " << config_hash << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "# kappa %.17g rad/s, phi_lo %.17g rad, tau %.17g s\n",
                trajectory.kappa, trajectory.phi_lo, trajectory.tau);
  out << buf;
  std::snprintf(buf, sizeof buf, "# window %.17g s .. %.17g s\n", trajectory.window.t0,
                trajectory.window.tf);
  out << buf;
  out << "# units: t s; c sqrt(photons); arg_c rad; sigma, sigma_z dimensionless; gbar rad/s; "
         "signal sqrt(Hz)\n";
  out << "t,re_c,im_c,abs_c,arg_c,re_sigma,im_sigma,sigma_z,gbar,signal\n";
  for (const auto& s : trajectory.samples) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  s.t, s.c.real(), s.c.imag(), std::abs(s.c), std::arg(s.c), s.sigma.real(),
                  s.sigma.imag(), s.sigma_z, s.gbar, s.signal);
    out << buf;
  }
}

}  // namespace chiralcav
