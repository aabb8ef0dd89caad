#pragma once

#include <ostream>
#include <string>

#include "chiralcav/dynamics.hpp"

namespace chiralcav {

// CSV with '#' header lines documenting units, then
// t,re_c,im_c,abs_c,arg_c,re_sigma,im_sigma,sigma_z,gbar,signal.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::string& config_hash = {});

}  // namespace chiralcav
