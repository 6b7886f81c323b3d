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

#include "chainsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "chainsim/error.hpp"

namespace chainsim {

std::uint64_t SeededRng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = next();
  while (r >= limit) r = next();
  return r % n;
}

std::vector<NodeId> sample_destinations(const MeshTopology& mesh, NodeId initiator, std::size_t k,
                                        SeededRng& rng) {
  std::vector<NodeId> pool;
  pool.reserve(mesh.node_count());
  for (std::uint32_t id = 0; id < mesh.node_count(); ++id) {
    if (id != initiator.value) pool.push_back(NodeId{id});
  }
  if (k > pool.size()) {
    std::ostringstream os;
    os << "cannot draw " << k << " destinations from " << pool.size() << " candidates on a "
       << mesh.to_string() << " mesh";
    throw InvalidArgumentError(os.str());
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "hops") return ExperimentKind::hops;
  if (name == "efficiency") return ExperimentKind::efficiency;
  if (name == "overhead") return ExperimentKind::overhead;
  throw InvalidArgumentError("unknown experiment '" + name + "' (expected hops, efficiency or overhead)");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::hops: return "hops";
    case ExperimentKind::efficiency: return "efficiency";
    case ExperimentKind::overhead: return "overhead";
  }
  return "unknown";
}

MeshTopology ExperimentConfig::mesh() const {
  return MeshTopology(mesh_x, mesh_y, params.link_bandwidth,
                      std::max<std::uint32_t>(params.hop_latency, 1));
}

void ExperimentConfig::validate() const {
  const MeshTopology m = mesh();
  if (initiator >= m.node_count()) throw InvalidArgumentError("initiator is outside the mesh");
  if (repeats < 1) throw InvalidArgumentError("repeats must be at least 1");
  if (groups.empty()) throw InvalidArgumentError("groups must list at least one n_dst");
  const std::uint64_t candidates = m.node_count() - 1;
  for (std::uint64_t g : groups) {
    if (g < 1) throw InvalidArgumentError("group n_dst must be at least 1");
    if (g > candidates) {
      std::ostringstream os;
      os << "group n_dst " << g << " exceeds the " << candidates << " non-initiator nodes of the "
         << m.to_string() << " mesh";
      throw InvalidArgumentError(os.str());
    }
  }
  if (experiment != ExperimentKind::hops) {
    if (sizes.empty()) throw InvalidArgumentError("sizes must list at least one transfer size");
    for (std::uint64_t s : sizes) {
      if (s == 0 || s > 0xFFFFFFFFULL) throw InvalidArgumentError("transfer sizes must be in 1..2^32-1");
    }
  }
  if (experiment == ExperimentKind::overhead) {
    const Coord c = node_to_coord(NodeId{initiator}, m);
    const std::uint64_t reach = static_cast<std::uint64_t>(std::max(c.x, mesh_x - 1 - c.x)) +
                                static_cast<std::uint64_t>(std::max(c.y, mesh_y - 1 - c.y));
    for (std::uint64_t g : groups) {
      if (g > reach) {
        std::ostringstream os;
        os << "overhead chain of " << g << " destinations does not fit the " << m.to_string()
           << " mesh from C" << initiator << " (max " << reach << ")";
        throw InvalidArgumentError(os.str());
      }
    }
  }
  params.validate();
}

ExperimentConfig default_experiment_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.seed = 20250101;
  switch (kind) {
    case ExperimentKind::hops:
      cfg.mesh_x = 8;
      cfg.mesh_y = 8;
      cfg.groups = {4, 8, 16, 24, 32, 40, 48, 63};
      cfg.repeats = 128;
      break;
    case ExperimentKind::efficiency:
      cfg.mesh_x = 4;
      cfg.mesh_y = 5;
      cfg.groups = {2, 4, 6, 8, 10, 12, 14, 16};
      cfg.sizes = {1024, 2048, 4096, 8192, 16384, 32768, 65536, 131072};
      break;
    case ExperimentKind::overhead:
      cfg.mesh_x = 8;
      cfg.mesh_y = 8;
      cfg.groups = {1, 2, 3, 4, 5, 6, 7, 8};
      cfg.sizes = {65536};
      break;
  }
  return cfg;
}

namespace {

std::string join(const std::vector<std::uint64_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

ExperimentConfig experiment_config_from(const ConfigFile& file, ExperimentKind kind) {
  std::vector<std::string> allowed = {"experiment", "mesh",  "initiator", "groups", "repeats",
                                      "sizes",      "seed",  "tsp_mode",  "output", "threads"};
  allowed.insert(allowed.end(), sim_param_keys().begin(), sim_param_keys().end());
  file.require_known(allowed);

  if (auto e = file.get("experiment"); e && parse_experiment(*e) != kind) {
    throw InvalidArgumentError("config describes the '" + *e + "' experiment, not '" + to_string(kind) + "'");
  }

  ExperimentConfig cfg = default_experiment_config(kind);
  if (auto v = file.get("mesh")) {
    const MeshTopology m = MeshTopology::parse(*v);
    cfg.mesh_x = m.x_dim();
    cfg.mesh_y = m.y_dim();
  }
  if (auto v = file.get("initiator")) cfg.initiator = static_cast<std::uint32_t>(parse_uint(*v, "initiator"));
  if (auto v = file.get("groups")) cfg.groups = parse_uint_list(*v, "groups");
  if (auto v = file.get("repeats")) cfg.repeats = parse_uint(*v, "repeats");
  if (auto v = file.get("sizes")) cfg.sizes = parse_size_list(*v);
  if (auto v = file.get("seed")) cfg.seed = parse_uint(*v, "seed");
  if (auto v = file.get("tsp_mode")) {
    if (*v == "exact") cfg.tsp_mode = TspMode::exact;
    else if (*v == "heuristic") cfg.tsp_mode = TspMode::heuristic;
    else throw InvalidArgumentError("tsp_mode must be exact or heuristic");
  }
  if (auto v = file.get("output")) cfg.output = *v;
  if (auto v = file.get("threads")) cfg.threads = static_cast<unsigned>(parse_uint(*v, "threads"));
  cfg.params = apply_sim_params(file, cfg.params);
  cfg.validate();
  return cfg;
}

std::string format_experiment_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment = " << to_string(cfg.experiment) << '\n'
     << "mesh = " << cfg.mesh_x << 'x' << cfg.mesh_y << '\n'
     << "initiator = " << cfg.initiator << '\n'
     << "groups = " << join(cfg.groups) << '\n'
     << "repeats = " << cfg.repeats << '\n';
  if (!cfg.sizes.empty()) os << "sizes = " << join(cfg.sizes) << '\n';
  os << "seed = " << cfg.seed << '\n'
     << "tsp_mode = " << (cfg.tsp_mode == TspMode::exact ? "exact" : "heuristic") << '\n'
     << format_sim_params(cfg.params);
  return os.str();
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return fmt_double(*v);
  } else {
    return std::to_string(*v);
  }
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, jobs). Results must be stored by index so output order
// never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t jobs, unsigned threads, Fn fn) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.seed << ',' << r.trial << ',' << r.mechanism << ',' << r.n_dst
       << ',' << opt(r.bytes) << ',' << opt(r.total_hops) << ',' << opt(r.avg_hops) << ','
       << opt(r.total_cycles) << ',' << opt(r.eta) << '\n';
  }
  return os.str();
}

HopsResult run_hops_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MeshTopology mesh = cfg.mesh();
  const NodeId initiator{cfg.initiator};
  constexpr std::size_t kMech = std::size(kHopMechanisms);

  const std::size_t trials = cfg.groups.size() * cfg.repeats;
  std::vector<std::array<HopReport, kMech>> reports(trials);

  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    const std::uint64_t n_dst = cfg.groups[i / cfg.repeats];
    const std::uint64_t trial = i % cfg.repeats;
    SeededRng rng(SeededRng::derive(cfg.seed, n_dst, trial));
    const DestinationSet task(initiator, sample_destinations(mesh, initiator, n_dst, rng), mesh);
    for (std::size_t m = 0; m < kMech; ++m) {
      reports[i][m] = hop_report(task, mesh, kHopMechanisms[m], cfg.tsp_mode);
    }
  });

  HopsResult result;
  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    std::array<double, kMech> sum_total{};
    std::array<double, kMech> sum_avg{};
    for (std::uint64_t t = 0; t < cfg.repeats; ++t) {
      const auto& trial = reports[g * cfg.repeats + t];
      for (std::size_t m = 0; m < kMech; ++m) {
        const HopReport& r = trial[m];
        result.rows.push_back(CsvRow{"hops", cfg.seed, std::to_string(t), to_string(r.mechanism),
                                     static_cast<std::uint64_t>(r.n_dst), std::nullopt,
                                     static_cast<double>(r.total_hops), r.avg_hops_per_dest(),
                                     std::nullopt, std::nullopt});
        sum_total[m] += static_cast<double>(r.total_hops);
        sum_avg[m] += r.avg_hops_per_dest();
      }
    }
    for (std::size_t m = 0; m < kMech; ++m) {
      const double reps = static_cast<double>(cfg.repeats);
      GroupMean mean{cfg.groups[g], kHopMechanisms[m], sum_total[m] / reps, sum_avg[m] / reps};
      result.means.push_back(mean);
      result.summary_rows.push_back(CsvRow{"hops", cfg.seed, "mean", to_string(mean.mechanism),
                                           mean.n_dst, std::nullopt, mean.mean_total_hops,
                                           mean.mean_avg_hops, std::nullopt, std::nullopt});
    }
  }
  return result;
}

EfficiencyResult run_efficiency_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MeshTopology mesh = cfg.mesh();
  const NodeId initiator{cfg.initiator};
  constexpr TransferMechanism kMechs[] = {TransferMechanism::unicast, TransferMechanism::multicast,
                                          TransferMechanism::chainwrite};

  // One destination set (and chain order) per n_dst, shared by every size and mechanism.
  struct Group {
    std::vector<NodeId> dests;
    ChainOrder order;
    long unicast_hops = 0;
    long tree_hops = 0;
    long chain_hops = 0;
  };
  std::vector<Group> groups(cfg.groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t g) {
    SeededRng rng(SeededRng::derive(cfg.seed, cfg.groups[g], 0));
    Group& grp = groups[g];
    grp.dests = sample_destinations(mesh, initiator, cfg.groups[g], rng);
    const DestinationSet task(initiator, grp.dests, mesh);
    grp.order = tsp_order(task, mesh,
                          task.size() <= kExactTspThreshold ? TspMode::exact : TspMode::heuristic);
    grp.unicast_hops = unicast_hops(task, mesh);
    grp.tree_hops = multicast_tree(task, mesh).total_hops();
    grp.chain_hops = chain_hops(grp.order, initiator, mesh);
  });

  const std::size_t per_group = cfg.sizes.size() * std::size(kMechs);
  const std::size_t jobs = groups.size() * per_group;
  std::vector<Cycle> cycles(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t i) {
    const Group& grp = groups[i / per_group];
    const std::uint64_t bytes = cfg.sizes[(i % per_group) / std::size(kMechs)];
    const TransferMechanism mech = kMechs[i % std::size(kMechs)];
    TransferTask task{initiator, grp.dests, static_cast<std::uint32_t>(bytes), mech, grp.order};
    cycles[i] = simulate(task, mesh, cfg.params).total_cycles;
  });

  EfficiencyResult result;
  for (std::size_t i = 0; i < jobs; ++i) {
    const std::size_t g = i / per_group;
    const Group& grp = groups[g];
    const std::uint64_t n = cfg.groups[g];
    const std::uint64_t bytes = cfg.sizes[(i % per_group) / std::size(kMechs)];
    const TransferMechanism mech = kMechs[i % std::size(kMechs)];
    const long hops = mech == TransferMechanism::unicast     ? grp.unicast_hops
                      : mech == TransferMechanism::multicast ? grp.tree_hops
                                                             : grp.chain_hops;
    const double eta = eta_p2mp(static_cast<double>(bytes), static_cast<double>(n),
                                static_cast<double>(cycles[i]), kIdealP2PBandwidth);
    result.points.push_back(EfficiencyPoint{to_string(mech), bytes, static_cast<std::uint32_t>(n), cycles[i], eta});
    result.rows.push_back(CsvRow{"efficiency", cfg.seed, std::to_string(i), to_string(mech), n, bytes,
                                 static_cast<double>(hops),
                                 static_cast<double>(hops) / static_cast<double>(n), cycles[i], eta});
  }
  return result;
}

std::vector<NodeId> staircase_chain(const MeshTopology& mesh, NodeId initiator, std::size_t n) {
  Coord c = node_to_coord(initiator, mesh);
  // Head toward the far side in each dimension so every step moves one hop further out.
  const int dx = mesh.x_dim() - 1 - c.x >= c.x ? 1 : -1;
  const int dy = mesh.y_dim() - 1 - c.y >= c.y ? 1 : -1;
  auto can = [&](Coord next) { return mesh.contains(next); };

  std::vector<NodeId> chain;
  chain.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Coord step_x{c.x + dx, c.y};
    const Coord step_y{c.x, c.y + dy};
    const bool prefer_x = i % 2 == 0;
    if (prefer_x && can(step_x)) c = step_x;
    else if (can(step_y)) c = step_y;
    else if (can(step_x)) c = step_x;
    else throw InvalidArgumentError("staircase chain ran off the mesh");
    chain.push_back(coord_to_node(c, mesh));
  }
  return chain;
}

OverheadResult run_overhead_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MeshTopology mesh = cfg.mesh();
  const NodeId initiator{cfg.initiator};
  const std::uint64_t bytes = cfg.sizes.front();

  std::vector<Cycle> cycles(cfg.groups.size());
  std::vector<std::vector<NodeId>> chains(cfg.groups.size());
  parallel_for(cfg.groups.size(), cfg.threads, [&](std::size_t g) {
    chains[g] = staircase_chain(mesh, initiator, cfg.groups[g]);
    TransferTask task{initiator, chains[g], static_cast<std::uint32_t>(bytes),
                      TransferMechanism::chainwrite, ChainOrder{chains[g]}};
    cycles[g] = run_chainwrite(task, mesh, cfg.params).total_cycles;
  });

  OverheadResult result;
  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    const std::uint64_t n = cfg.groups[g];
    const long hops = chain_hops(ChainOrder{chains[g]}, initiator, mesh);
    const double eta = eta_p2mp(static_cast<double>(bytes), static_cast<double>(n),
                                static_cast<double>(cycles[g]), kIdealP2PBandwidth);
    result.rows.push_back(CsvRow{"overhead", cfg.seed, std::to_string(g), "chainwrite", n, bytes,
                                 static_cast<double>(hops),
                                 static_cast<double>(hops) / static_cast<double>(n), cycles[g], eta});
    result.samples.emplace_back(static_cast<double>(n), static_cast<double>(cycles[g]));
  }
  result.fit = fit_linear(result.samples);
  return result;
}

std::string format_hops_summary(const HopsResult& result) {
  std::ostringstream os;
  os << "average hops per destination (group means)\n";
  os << std::setw(6) << "n_dst";
  for (Mechanism m : kHopMechanisms) os << std::setw(14) << to_string(m);
  os << '\n' << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i < result.means.size(); i += std::size(kHopMechanisms)) {
    os << std::setw(6) << result.means[i].n_dst;
    for (std::size_t m = 0; m < std::size(kHopMechanisms); ++m) {
      os << std::setw(14) << result.means[i + m].mean_avg_hops;
    }
    os << '\n';
  }
  return os.str();
}

std::string format_efficiency_summary(const EfficiencyResult& result) {
  std::ostringstream os;
  os << "P2MP efficiency (eta)\n"
     << std::setw(6) << "n_dst" << std::setw(10) << "bytes" << std::setw(12) << "unicast"
     << std::setw(12) << "multicast" << std::setw(12) << "chainwrite" << '\n'
     << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i + 2 < result.points.size(); i += 3) {
    os << std::setw(6) << result.points[i].n_dst << std::setw(10) << result.points[i].bytes
       << std::setw(12) << result.points[i].eta << std::setw(12) << result.points[i + 1].eta
       << std::setw(12) << result.points[i + 2].eta << '\n';
  }
  return os.str();
}

std::string format_overhead_summary(const OverheadResult& result) {
  std::ostringstream os;
  os << "chainwrite latency vs destinations\n" << std::setw(6) << "n_dst" << std::setw(14) << "cycles" << '\n';
  for (const auto& [n, c] : result.samples) {
    os << std::setw(6) << static_cast<long>(n) << std::setw(14) << static_cast<long>(c) << '\n';
  }
  os << std::fixed << std::setprecision(4) << "slope = " << result.fit.slope
     << " cycles/destination, intercept = " << result.fit.intercept
     << " cycles, r^2 = " << std::setprecision(6) << result.fit.r_squared << '\n';
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot write " + path.string());
  out << content;
  if (!out) throw InvalidArgumentError("failed writing " + path.string());
}

}  // namespace

std::string run_experiment_to_files(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw InvalidArgumentError("cannot create output directory " + cfg.output.string());

  const std::string name = to_string(cfg.experiment);
  write_file(cfg.output / (name + "_config.txt"), format_experiment_config(cfg));
  switch (cfg.experiment) {
    case ExperimentKind::hops: {
      const HopsResult r = run_hops_experiment(cfg);
      write_file(cfg.output / "hops.csv", format_csv(r.rows));
      write_file(cfg.output / "hops_summary.csv", format_csv(r.summary_rows));
      return format_hops_summary(r);
    }
    case ExperimentKind::efficiency: {
      const EfficiencyResult r = run_efficiency_experiment(cfg);
      write_file(cfg.output / "efficiency.csv", format_csv(r.rows));
      return format_efficiency_summary(r);
    }
    case ExperimentKind::overhead: {
      const OverheadResult r = run_overhead_experiment(cfg);
      write_file(cfg.output / "overhead.csv", format_csv(r.rows));
      std::ostringstream fit;
      fit << "seed,slope,intercept,r_squared\n"
          << cfg.seed << ',' << fmt_double(r.fit.slope) << ',' << fmt_double(r.fit.intercept) << ','
          << fmt_double(r.fit.r_squared) << '\n';
      write_file(cfg.output / "overhead_fit.csv", fit.str());
      return format_overhead_summary(r);
    }
  }
  return {};
}

}  // namespace chainsim
