#pragma once

// Error function shared by the detection statistics and the closed-form SNR.

namespace chiralcav {

double erf(double x);
double erfc(double x);

// Erfc(snr / sqrt 2) / 2: sign-decision error for two Gaussians separated by
// 2 snr standard deviations.
double error_probability(double snr);

}  // namespace chiralcav
