#include "semigap/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "semigap/errors.hpp"

namespace semigap {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("fit_line: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw ContractViolation("fit_line: needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ContractViolation("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

PowerLawFit fit_power_law(std::span<const double> rho, std::span<const double> values) {
  if (rho.size() != values.size()) throw ContractViolation("fit_power_law: length mismatch");
  std::vector<double> log_rho;
  std::vector<double> v;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > 0.0 && values[i] > 0.0 && std::isfinite(values[i])) {
      log_rho.push_back(std::log(rho[i]));
      v.push_back(values[i]);
    }
  }
  PowerLawFit out;
  if (v.size() < 3) return out;
  const double floor_value = *std::min_element(v.begin(), v.end());

  std::vector<double> log_excess(v.size());
  auto fit_at = [&](double plateau) {
    for (std::size_t i = 0; i < v.size(); ++i) log_excess[i] = std::log(v[i] - plateau);
    return fit_line(log_rho, log_excess);
  };
  auto sum_squares = [&](double plateau) {
    const LineFit f = fit_at(plateau);
    return f.rms_residual * f.rms_residual;
  };

  const double upper = floor_value * (1.0 - 1e-9);
  std::uintmax_t iterations = 500;
  const auto [plateau, ss] = boost::math::tools::brent_find_minima(
      sum_squares, 0.0, upper, std::numeric_limits<double>::digits, iterations);
  double best = plateau;
  if (sum_squares(0.0) <= ss) best = 0.0;

  const LineFit f = fit_at(best);
  out.plateau = best;
  out.amplitude = std::exp(f.intercept);
  out.exponent = -f.slope;
  out.rms_residual = f.rms_residual;
  out.valid = std::isfinite(out.exponent) && std::isfinite(out.rms_residual);
  return out;
}

}  // namespace semigap
