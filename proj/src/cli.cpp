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

#include "chainsim/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "chainsim/codec.hpp"
#include "chainsim/config.hpp"
#include "chainsim/error.hpp"
#include "chainsim/experiments.hpp"
#include "chainsim/metrics.hpp"
#include "chainsim/multicast.hpp"
#include "chainsim/scheduling.hpp"
#include "chainsim/simulator.hpp"

namespace chainsim {

namespace {

std::vector<NodeId> to_nodes(const std::vector<std::uint32_t>& ids) {
  std::vector<NodeId> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(NodeId{id});
  return out;
}

void print_order(std::ostream& out, NodeId initiator, const ChainOrder& order) {
  out << initiator;
  for (NodeId n : order.visit) out << " -> " << n;
  out << '\n';
}

struct RouteArgs {
  std::string mesh;
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
};

int cmd_route(const RouteArgs& a, std::ostream& out) {
  const MeshTopology mesh = MeshTopology::parse(a.mesh);
  const NodeId src{a.src};
  const NodeId dst{a.dst};
  const RoutePath path = xy_route(src, dst, mesh);
  out << "route " << src << node_to_coord(src, mesh) << " -> " << dst << node_to_coord(dst, mesh) << '\n';
  out << "path:";
  if (path.empty()) {
    out << " (empty)";
  } else {
    for (NodeId n : path_nodes(src, path)) out << ' ' << n << node_to_coord(n, mesh);
  }
  out << "\nhops: " << path.hops() << '\n';
  return kExitOk;
}

struct ScheduleArgs {
  std::string mesh;
  std::uint32_t initiator = 0;
  std::vector<std::uint32_t> dests;
  std::string strategy = "tsp-heuristic";
  std::string greedy_start = "min-id";
};

int cmd_schedule(const ScheduleArgs& a, std::ostream& out) {
  const MeshTopology mesh = MeshTopology::parse(a.mesh);
  const DestinationSet task(NodeId{a.initiator}, to_nodes(a.dests), mesh);
  const Strategy strategy = parse_strategy(a.strategy);

  ChainOrder order;
  if (strategy == Strategy::greedy) {
    if (a.greedy_start != "min-id" && a.greedy_start != "closest") {
      throw InvalidArgumentError("--greedy-start must be min-id or closest");
    }
    const GreedyTrace trace = greedy_trace(
        task, mesh, a.greedy_start == "closest" ? GreedyStart::closest : GreedyStart::min_id);
    order = trace.order;
    out << "strategy: greedy\norder: ";
    print_order(out, task.initiator(), order);
    for (const auto& step : trace.steps) {
      out << "  " << step.node << " hops=" << step.hops << (step.fallback ? " fallback" : "") << '\n';
    }
  } else {
    order = schedule(task, mesh, strategy);
    out << "strategy: " << to_string(strategy) << "\norder: ";
    print_order(out, task.initiator(), order);
  }
  const long hops = chain_hops(order, task.initiator(), mesh);
  out << "total hops: " << hops << '\n'
      << "avg hops/destination: " << std::fixed << std::setprecision(4)
      << static_cast<double>(hops) / static_cast<double>(task.size()) << '\n';
  return kExitOk;
}

struct CodecArgs {
  std::string file;
  std::uint32_t target = 0;
  std::string out_file;
  std::string mesh = "8x8";
  std::uint32_t initiator = 0;
  std::vector<std::uint32_t> dests;
  std::string strategy = "naive";
  std::int64_t node = -1;
  std::uint32_t bytes = 65536;
  unsigned link_width = 512;
  std::uint32_t task_id = 0;
  std::uint32_t base = 0;
  std::vector<std::int32_t> strides;
  std::vector<std::uint32_t> bounds;
};

int cmd_codec_dump(const CodecArgs& a, std::ostream& out) {
  CfgPacket packet;
  if (!a.file.empty()) {
    std::ifstream in(a.file, std::ios::binary);
    if (!in) throw InvalidArgumentError("cannot read " + a.file);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    packet = packet_from_bytes(bytes, NodeId{a.target});
  } else {
    if (a.dests.empty()) throw InvalidArgumentError("codec-dump needs --file or --dests");
    const MeshTopology mesh = MeshTopology::parse(a.mesh);
    const DestinationSet task(NodeId{a.initiator}, to_nodes(a.dests), mesh);
    const ChainOrder order = schedule(task, mesh, parse_strategy(a.strategy));
    AccessPattern pattern{a.base, a.strides, a.bounds};
    if (a.strides.empty() && a.bounds.empty()) {
      pattern = AccessPattern::contiguous(a.base, a.bytes, mesh.link_bandwidth());
    }
    const auto chain = build_chain_configs(task, order, a.bytes, pattern, a.task_id);
    const NodeId node = a.node < 0 ? order.visit.front() : NodeId{static_cast<std::uint32_t>(a.node)};
    auto it = std::find_if(chain.begin(), chain.end(), [&](const ChainNodeConfig& c) { return c.node == node; });
    if (it == chain.end()) {
      std::ostringstream os;
      os << node << " is not part of the chain";
      throw InvalidArgumentError(os.str());
    }
    packet = encode_cfg(*it, a.link_width);
  }
  out << "target: " << packet.target << '\n' << dump_packet(packet);
  if (!a.out_file.empty()) {
    const auto bytes = to_bytes(packet);
    std::ofstream file(a.out_file, std::ios::binary);
    if (!file) throw InvalidArgumentError("cannot write " + a.out_file);
    file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out << "wrote " << bytes.size() << " bytes to " << a.out_file << '\n';
  }
  return kExitOk;
}

std::optional<ConfigFile> load_config(const std::string& flag) {
  if (!flag.empty()) return ConfigFile::load(flag);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return ConfigFile::load(env);
  }
  return std::nullopt;
}

struct SimulateArgs {
  std::string config;
  std::string mesh;
  std::string mechanism = "chainwrite";
  std::string size = "64K";
  std::uint32_t initiator = 0;
  std::vector<std::uint32_t> dests;
  std::string strategy = "tsp-heuristic";
  bool trace = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto file = load_config(a.config);
  SimParams params;
  std::string mesh_text = "8x8";
  if (file) {
    std::vector<std::string> allowed = {"mesh", "experiment", "initiator", "groups", "repeats",
                                        "sizes", "seed", "tsp_mode", "output", "threads"};
    allowed.insert(allowed.end(), sim_param_keys().begin(), sim_param_keys().end());
    file->require_known(allowed);
    params = apply_sim_params(*file);
    if (auto m = file->get("mesh")) mesh_text = *m;
  }
  if (!a.mesh.empty()) mesh_text = a.mesh;
  const MeshTopology parsed = MeshTopology::parse(mesh_text);
  const MeshTopology mesh(parsed.x_dim(), parsed.y_dim(), params.link_bandwidth,
                          std::max<std::uint32_t>(params.hop_latency, 1));

  const std::uint64_t size = parse_size(a.size);
  if (size == 0 || size > 0xFFFFFFFFULL) throw InvalidArgumentError("--size must be in 1..2^32-1 bytes");

  TransferTask task{NodeId{a.initiator}, to_nodes(a.dests), static_cast<std::uint32_t>(size),
                    parse_transfer_mechanism(a.mechanism), std::nullopt};
  if (task.mechanism == TransferMechanism::chainwrite && !task.destinations.empty()) {
    const DestinationSet dests(task.initiator, task.destinations, mesh);
    task.order = schedule(dests, mesh, parse_strategy(a.strategy));
  }

  const LatencyReport report = simulate(task, mesh, params, SimOptions{a.trace});
  out << "mechanism: " << to_string(report.mechanism) << '\n' << "mesh: " << mesh.to_string() << '\n';
  if (task.order) {
    out << "order: ";
    print_order(out, task.initiator, *task.order);
  }
  out << "bytes: " << task.bytes << '\n'
      << "total cycles: " << report.total_cycles << '\n'
      << "phases: cfg=" << report.phases.cfg << " grant=" << report.phases.grant
      << " data=" << report.phases.data << " finish=" << report.phases.finish << '\n';
  for (const auto& d : report.per_dest_delivery) {
    out << "  " << d.node << " delivered at " << d.completed << " (" << d.bytes_received << " B)\n";
  }
  if (!task.destinations.empty()) {
    out << "eta: " << std::fixed << std::setprecision(4)
        << eta_p2mp(static_cast<double>(task.bytes), static_cast<double>(task.destinations.size()),
                    static_cast<double>(report.total_cycles), kIdealP2PBandwidth)
        << '\n';
  }
  if (a.trace) {
    out << "trace:\n";
    for (const auto& t : report.trace) {
      out << std::setw(8) << t.cycle << ' ' << std::setw(5) << t.node << ' ' << t.event << '\n';
    }
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::string out_dir;
  unsigned threads = 0;
  bool threads_set = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  const ExperimentKind kind = parse_experiment(a.name);
  const auto file = load_config(a.config);
  ExperimentConfig cfg = file ? experiment_config_from(*file, kind) : default_experiment_config(kind);
  if (!a.out_dir.empty()) cfg.output = a.out_dir;
  if (a.threads_set) cfg.threads = a.threads;
  cfg.validate();
  out << "experiment: " << to_string(kind) << " (seed " << cfg.seed << ", mesh " << cfg.mesh_x << 'x'
      << cfg.mesh_y << ")\n";
  out << run_experiment_to_files(cfg);
  out << "output: " << cfg.output.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chain-ordered multicast simulator for 2D-mesh networks-on-chip", "chainsim"};
  app.require_subcommand(1);

  RouteArgs route;
  auto* route_cmd = app.add_subcommand("route", "Print the XY route between two nodes");
  route_cmd->add_option("--mesh", route.mesh, "Mesh dimensions XxY")->required();
  route_cmd->add_option("--src", route.src, "Source node id")->required();
  route_cmd->add_option("--dst", route.dst, "Destination node id")->required();

  ScheduleArgs sched;
  auto* sched_cmd = app.add_subcommand("schedule", "Order chain destinations");
  sched_cmd->add_option("--mesh", sched.mesh, "Mesh dimensions XxY")->required();
  sched_cmd->add_option("--initiator", sched.initiator, "Initiator node id");
  sched_cmd->add_option("--dests", sched.dests, "Comma-separated destination ids")->required()->delimiter(',');
  sched_cmd->add_option("--strategy", sched.strategy, "naive|greedy|tsp-exact|tsp-heuristic");
  sched_cmd->add_option("--greedy-start", sched.greedy_start, "min-id|closest");

  CodecArgs codec;
  auto* codec_cmd = app.add_subcommand("codec-dump", "Encode a chain cfg, or decode a binary image, and print its fields");
  codec_cmd->add_option("--file", codec.file, "Binary cfg image to decode");
  codec_cmd->add_option("--target", codec.target, "Receiving node of the image");
  codec_cmd->add_option("--out", codec.out_file, "Write the encoded image here");
  codec_cmd->add_option("--mesh", codec.mesh, "Mesh dimensions XxY");
  codec_cmd->add_option("--initiator", codec.initiator, "Initiator node id");
  codec_cmd->add_option("--dests", codec.dests, "Comma-separated destination ids")->delimiter(',');
  codec_cmd->add_option("--strategy", codec.strategy, "Chain ordering strategy");
  codec_cmd->add_option("--node", codec.node, "Chain node whose cfg to encode (default: first follower)");
  codec_cmd->add_option("--bytes", codec.bytes, "Transfer size in bytes");
  codec_cmd->add_option("--link-width", codec.link_width, "Link width in bits");
  codec_cmd->add_option("--task-id", codec.task_id, "24-bit task id");
  codec_cmd->add_option("--base", codec.base, "Access pattern base offset");
  codec_cmd->add_option("--strides", codec.strides, "Access pattern strides")->delimiter(',');
  codec_cmd->add_option("--bounds", codec.bounds, "Access pattern bounds")->delimiter(',');

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate one transfer");
  sim_cmd->add_option("--config", sim.config, "Config file (mesh and timing parameters)");
  sim_cmd->add_option("--mesh", sim.mesh, "Mesh dimensions XxY (overrides the config)");
  sim_cmd->add_option("--mechanism", sim.mechanism, "unicast|multicast|chainwrite");
  sim_cmd->add_option("--size", sim.size, "Transfer size, e.g. 64 or 64K");
  sim_cmd->add_option("--initiator", sim.initiator, "Initiator node id");
  sim_cmd->add_option("--dests", sim.dests, "Comma-separated destination ids")->delimiter(',');
  sim_cmd->add_option("--strategy", sim.strategy, "Chain ordering strategy");
  sim_cmd->add_flag("--trace", sim.trace, "Print every simulation event");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a scripted study and write CSV files");
  exp_cmd->add_option("--name", exp.name, "hops|efficiency|overhead")->required();
  exp_cmd->add_option("--config", exp.config, "Config file");
  exp_cmd->add_option("--out", exp.out_dir, "Output directory");
  auto* threads_opt = exp_cmd->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "chainsim: " << e.what() << '\n';
    return kExitUsage;
  }
  exp.threads_set = threads_opt->count() > 0;

  try {
    if (*route_cmd) return cmd_route(route, out);
    if (*sched_cmd) return cmd_schedule(sched, out);
    if (*codec_cmd) return cmd_codec_dump(codec, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*exp_cmd) return cmd_experiment(exp, out);
  } catch (const Error& e) {
    err << "chainsim: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "chainsim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace chainsim
