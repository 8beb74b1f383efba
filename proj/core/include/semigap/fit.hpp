#pragma once

#include <span>

namespace semigap {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares y ≈ intercept + slope x. Needs two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// values ≈ plateau + amplitude * rho^-exponent.
struct PowerLawFit {
  double plateau = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
  /// RMS residual of log(values - plateau) against the fitted line.
  double rms_residual = 0.0;
  bool valid = false;

  friend bool operator==(const PowerLawFit&, const PowerLawFit&) = default;
};

/// Fits log(values - plateau) = log(amplitude) - exponent log(rho) by least
/// squares, choosing the plateau in [0, min(values)) that minimizes the
/// residual (Brent search). Needs at least 3 points with positive values.
PowerLawFit fit_power_law(std::span<const double> rho, std::span<const double> values);

}  // namespace semigap
