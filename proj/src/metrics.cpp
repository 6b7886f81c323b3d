/*
 * Copyright 2026 The chainsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chainsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "chainsim/error.hpp"

namespace chainsim {

double eta_p2mp(double bytes, double n_dst, double measured_cycles, double bw_ideal) {
  if (!(measured_cycles > 0.0)) throw InvalidArgumentError("measured latency must be positive");
  if (!(bytes > 0.0) || !(n_dst > 0.0) || !(bw_ideal > 0.0)) {
    throw InvalidArgumentError("efficiency inputs must be positive");
  }
  return (n_dst * bytes / bw_ideal) / measured_cycles;
}

RegressionFit fit_linear(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InvalidArgumentError("linear fit needs at least two points");

  const double n = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
    syy += (y - mean_y) * (y - mean_y);
  }
  if (sxx == 0.0) throw InvalidArgumentError("linear fit needs at least two distinct x values");

  RegressionFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
      const double r = y - (fit.slope * x + fit.intercept);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace chainsim
