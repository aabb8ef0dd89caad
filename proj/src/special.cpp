#include "chiralcav/special.hpp"

#include <cmath>
#include <numbers>

#include "chiralcav/error.hpp"

namespace chiralcav {

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double error_probability(double snr) {
  require(snr >= 0.0, ErrorCode::InvalidArgument, "snr must be non-negative");
  return 0.5 * std::erfc(snr / std::numbers::sqrt2);
}

}  // namespace chiralcav
