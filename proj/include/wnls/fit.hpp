#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wnls {

/// Least-squares line through (log scale, log value).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log scale, log value)
};

inline FitResult fit_exponent(const std::vector<std::pair<double, double>>& scale_value) {
  if (scale_value.size() < 2) throw std::invalid_argument("fit_exponent: need at least 2 points");
  FitResult fit;
  fit.points.reserve(scale_value.size());
  for (auto [scale, value] : scale_value) {
    if (!(scale > 0.0) || !(value > 0.0))
      throw std::invalid_argument("fit_exponent: scales and values must be positive");
    fit.points.emplace_back(std::log(scale), std::log(value));
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: all scales coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A constant series is fit exactly by a flat line.
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace wnls
