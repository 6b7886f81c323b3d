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
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chainsim/config.hpp"
#include "chainsim/metrics.hpp"
#include "chainsim/multicast.hpp"
#include "chainsim/simulator.hpp"

namespace chainsim {

/// 64-bit seeded stream: splitmix64-derived seeds feeding std::mt19937_64, whose
/// output sequence is fixed by the standard.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  /// Seed for an independent sub-stream, e.g. one per (group, trial).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// k distinct nodes other than `initiator`, by a seeded Fisher-Yates prefix.
std::vector<NodeId> sample_destinations(const MeshTopology& mesh, NodeId initiator, std::size_t k,
                                        SeededRng& rng);

enum class ExperimentKind { hops, efficiency, overhead };

ExperimentKind parse_experiment(const std::string& name);
std::string to_string(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::hops;
  int mesh_x = 8;
  int mesh_y = 8;
  std::uint32_t initiator = 0;
  std::vector<std::uint64_t> groups;  // n_dst values
  std::uint64_t repeats = 1;
  std::vector<std::uint64_t> sizes;   // bytes
  std::uint64_t seed = 1;
  TspMode tsp_mode = TspMode::heuristic;  // chain_tsp solver in the hops study
  SimParams params;
  std::filesystem::path output = ".";
  unsigned threads = 0;  // 0: hardware concurrency

  [[nodiscard]] MeshTopology mesh() const;
  /// Throws InvalidArgumentError on inconsistent values.
  void validate() const;
};

ExperimentConfig default_experiment_config(ExperimentKind kind);

/// Defaults for `kind`, overridden by the file. Unknown keys are rejected.
ExperimentConfig experiment_config_from(const ConfigFile& file, ExperimentKind kind);

/// Round-trippable key = value rendering of a config.
std::string format_experiment_config(const ExperimentConfig& cfg);

/// One row of the experiment CSV. Fields that do not apply stay empty.
struct CsvRow {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string trial;
  std::string mechanism;
  std::uint64_t n_dst = 0;
  std::optional<std::uint64_t> bytes;
  std::optional<double> total_hops;
  std::optional<double> avg_hops;
  std::optional<std::uint64_t> total_cycles;
  std::optional<double> eta;
};

inline constexpr const char* kCsvHeader =
    "experiment,seed,trial,mechanism,n_dst,bytes,total_hops,avg_hops,total_cycles,eta";

std::string format_csv(const std::vector<CsvRow>& rows);

struct GroupMean {
  std::uint64_t n_dst = 0;
  Mechanism mechanism = Mechanism::unicast;
  double mean_total_hops = 0.0;
  double mean_avg_hops = 0.0;
};

struct HopsResult {
  std::vector<CsvRow> rows;        // per trial, per mechanism
  std::vector<GroupMean> means;    // per group, per mechanism
  std::vector<CsvRow> summary_rows;
};

struct EfficiencyResult {
  std::vector<CsvRow> rows;
  std::vector<EfficiencyPoint> points;
};

struct OverheadResult {
  std::vector<CsvRow> rows;
  std::vector<std::pair<double, double>> samples;  // (n_dst, total cycles)
  RegressionFit fit;
};

inline constexpr Mechanism kHopMechanisms[] = {Mechanism::unicast, Mechanism::multicast,
                                               Mechanism::chain_naive, Mechanism::chain_greedy,
                                               Mechanism::chain_tsp};

HopsResult run_hops_experiment(const ExperimentConfig& cfg);
EfficiencyResult run_efficiency_experiment(const ExperimentConfig& cfg);
OverheadResult run_overhead_experiment(const ExperimentConfig& cfg);

/// Chain of lattice neighbours leading away from the initiator, one hop further per node.
std::vector<NodeId> staircase_chain(const MeshTopology& mesh, NodeId initiator, std::size_t n);

std::string format_hops_summary(const HopsResult& result);
std::string format_efficiency_summary(const EfficiencyResult& result);
std::string format_overhead_summary(const OverheadResult& result);

/// Runs the experiment, writes its CSV files plus a config echo under cfg.output,
/// and returns the summary table.
std::string run_experiment_to_files(const ExperimentConfig& cfg);

}  // namespace chainsim
