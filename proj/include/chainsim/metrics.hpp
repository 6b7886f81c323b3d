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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace chainsim {

inline constexpr double kIdealP2PBandwidth = 64.0;  // bytes per cycle

/// P2MP efficiency: serialized ideal P2P latency over measured latency. Ideal
/// replication reaches n_dst; plain repeated copies stay at or below 1.
/// Throws InvalidArgumentError unless every input is positive.
double eta_p2mp(double bytes, double n_dst, double measured_cycles,
                double bw_ideal = kIdealP2PBandwidth);

struct EfficiencyPoint {
  std::string mechanism;
  std::uint64_t bytes = 0;
  std::uint32_t n_dst = 0;
  std::uint64_t measured_cycles = 0;
  double eta = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. r^2 is 1 when y is constant.
/// Throws InvalidArgumentError with fewer than two distinct x values.
RegressionFit fit_linear(std::span<const std::pair<double, double>> points);

}  // namespace chainsim
