// Copyright 2026 The lumharch Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// `lumharch` command line. Exit codes: 0 ok, 1 usage, 2 input validation,
// 3 infeasible, 4 solver limit reached.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lumharch/experiment.hpp"
#include "lumharch/hierarchy.hpp"
#include "lumharch/lp_format.hpp"
#include "lumharch/model.hpp"
#include "lumharch/network.hpp"
#include "lumharch/solver.hpp"

namespace lumharch {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitInfeasible = 3, kExitLimit = 4 };

namespace detail {

struct CliArgs {
  std::string topology;
  std::vector<std::string> splitters;
  std::optional<std::size_t> wavelengths;
  std::string source;
  std::vector<std::string> dest;
  std::string mode = "lh";
  bool no_connectivity = false;
  std::uint64_t node_limit = 1'000'000;
  std::optional<std::int64_t> time_limit_ms;
  std::string write_solution;
  std::string structures;
  std::string solution;
  std::string out;
  std::size_t size = 2;
  std::size_t count = 100;
  std::uint64_t seed = 1;
  bool distinct_sources = false;
  std::vector<std::string> modes{"lh", "lt"};
  std::vector<std::string> sessions;
  bool timing = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

inline Mode parse_mode(const std::string& s) {
  auto m = mode_from_name(s);
  if (!m) throw InputError("unknown mode '" + s + "' (expected lh or lt)");
  return *m;
}

inline Network cli_network(const CliArgs& a) {
  Network net = load_topology(a.topology).with_splitters(a.splitters);
  if (a.wavelengths) net = net.with_wavelengths(*a.wavelengths);
  return net;
}

inline MulticastSession cli_session(const Network& net, const CliArgs& a) {
  if (a.source.empty() || a.dest.empty()) throw InputError("--source and --dest are required");
  return make_session(net, a.source, a.dest);
}

inline SolveOptions cli_solve_options(const CliArgs& a) {
  SolveOptions o;
  o.node_limit = a.node_limit;
  if (a.time_limit_ms) o.time_limit = std::chrono::milliseconds(*a.time_limit_ms);
  return o;
}

// "s:d1,d2" -> session.
inline MulticastSession parse_session_spec(const Network& net, const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("session '" + spec + "' must look like SRC:D1,D2");
  std::vector<std::string> dests;
  std::stringstream rest(spec.substr(colon + 1));
  for (std::string d; std::getline(rest, d, ',');)
    if (!d.empty()) dests.push_back(d);
  return make_session(net, spec.substr(0, colon), dests);
}

inline void print_cps(std::ostream& out, const Network& net, const LightStructureSet& set) {
  std::vector<std::string> names;
  for (const auto& ls : set.structures)
    for (NodeId v : cps_nodes(net, ls)) names.push_back(std::string(net.name(v)) + "@" + std::to_string(ls.wavelength));
  out << "cps: ";
  if (names.empty()) out << "none";
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? " " : "") << names[i];
  out << '\n';
}

inline void print_result(std::ostream& out, const Network& net, const SessionResult& r) {
  out << "mode: " << to_string(r.model.mode) << '\n';
  out << "status: " << to_string(r.report.status) << '\n';
  if (r.structures) {
    out << "objective: " << r.report.objective << '\n';
    out << "cost: " << r.cost() << '\n';
    out << "wavelengths: " << r.wavelengths() << '\n';
    print_cps(out, net, *r.structures);
  }
  out << "nodes_explored: " << r.report.nodes_explored << '\n';
  out << "lp_iterations: " << r.report.lp_iterations << '\n';
  if (r.structures) {
    out << dump(net, *r.structures);
    if (!r.validation.ok()) out << r.validation;
  }
}

inline int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::LimitReached: return kExitLimit;
  }
  return kExitLimit;
}

inline int cmd_solve(const CliArgs& a, std::ostream& out) {
  const Network net = cli_network(a);
  const auto ms = cli_session(net, a);
  const auto r = solve_session(net, ms, parse_mode(a.mode), cli_solve_options(a), !a.no_connectivity);
  print_result(out, net, r);
  if (!a.write_solution.empty() && r.report.assignment)
    write_file(a.write_solution, format_solution(r.model, *r.report.assignment));
  return status_exit(r.report.status);
}

inline int cmd_compare(const CliArgs& a, std::ostream& out) {
  const Network net = cli_network(a);
  const auto ms = cli_session(net, a);
  const auto opts = cli_solve_options(a);
  const auto lh = solve_session(net, ms, Mode::LH, opts, !a.no_connectivity);
  const auto lt = solve_session(net, ms, Mode::LT, opts, !a.no_connectivity);
  print_result(out, net, lh);
  out << '\n';
  print_result(out, net, lt);
  if (lh.optimal() && lt.optimal()) {
    out << "\ncost_delta: " << lt.cost() - lh.cost() << '\n';
    out << "wavelength_delta: " << lt.wavelengths() - lh.wavelengths() << '\n';
    out << "cost_saving_percent: " << std::fixed << std::setprecision(2)
        << 100.0 * static_cast<double>(lt.cost() - lh.cost()) / static_cast<double>(lt.cost()) << std::defaultfloat
        << '\n';
  }
  return std::max(status_exit(lh.report.status), status_exit(lt.report.status));
}

inline int cmd_batch(const CliArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.topology = a.topology;
  cfg.splitters = a.splitters;
  cfg.group_size = a.size;
  cfg.session_count = a.count;
  cfg.seed = a.seed;
  cfg.distinct_sources = a.distinct_sources;
  cfg.wavelengths = a.wavelengths;
  cfg.modes.clear();
  for (const auto& m : a.modes) cfg.modes.push_back(parse_mode(m));
  cfg.solve = cli_solve_options(a);
  cfg.record_timing = a.timing;
  if (!a.sessions.empty()) {
    Network net = cli_network(a);
    for (const auto& s : a.sessions) cfg.sessions.push_back(parse_session_spec(net, s));
  }
  const auto res = run_experiment(cfg);
  const auto csv = format_csv(res, cfg.record_timing);
  if (a.out.empty()) {
    out << csv;
    err << format_metrics(res.metrics);
  } else {
    write_file(a.out, csv);
    out << format_metrics(res.metrics);
  }
  return kExitOk;
}

inline int cmd_validate(const CliArgs& a, std::ostream& out) {
  const Network net = cli_network(a);
  const auto ms = cli_session(net, a);
  const auto set = parse_dump(net, ms, read_file(a.structures));
  const auto report = a.no_connectivity ? check_structure_rules(net, set) : validate(net, set);
  if (report.ok()) {
    out << "ok\ncost: " << cost(net, set) << "\nwavelengths: " << set.structures.size() << '\n';
    print_cps(out, net, set);
    return kExitOk;
  }
  out << report;
  return kExitInput;
}

inline int cmd_emit_lp(const CliArgs& a, std::ostream& out) {
  const Network net = cli_network(a);
  const auto ms = cli_session(net, a);
  const auto text = emit_lp(build_model(net, ms, parse_mode(a.mode), !a.no_connectivity));
  if (a.out.empty())
    out << text;
  else
    write_file(a.out, text);
  return kExitOk;
}

inline int cmd_import_sol(const CliArgs& a, std::ostream& out) {
  const Network net = cli_network(a);
  const auto ms = cli_session(net, a);
  const auto model = build_model(net, ms, parse_mode(a.mode), !a.no_connectivity);
  const auto assignment = import_solution(model, read_file(a.solution));
  const auto feas = check_feasible(model, assignment);
  const auto value = objective_value(model, assignment);
  const auto parts = split_objective(model, value);
  out << "objective: " << value << "\ncost: " << parts.cost << "\nwavelengths: " << parts.wavelengths << '\n';
  if (!feas.ok()) {
    out << "infeasible: " << feas.violations.size() << " violated constraints\n";
    for (const auto& v : feas.violations) out << "  " << v.name << " (lhs " << v.lhs << ", rhs " << v.rhs << ")\n";
    return kExitInput;
  }
  const auto set = extract_structures(model, assignment, net, ms);
  out << dump(net, set);
  return kExitOk;
}

}  // namespace detail

/// Runs the command line; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Cost-optimal light-hierarchy / light-tree multicast routing in sparse-splitting WDM networks",
               "lumharch"};
  app.require_subcommand(1);
  detail::CliArgs a;

  auto network_opts = [&a](CLI::App* c) {
    c->add_option("--topology", a.topology, "fig3, fig5, nsf, cost239 or a network file")->required();
    c->add_option("--splitters", a.splitters, "nodes to turn into MC (splitter) nodes")->delimiter(',');
    c->add_option("--wavelengths", a.wavelengths, "override the wavelength count")->check(CLI::PositiveNumber);
  };
  auto session_opts = [&a](CLI::App* c) {
    c->add_option("--source", a.source, "source node")->required();
    c->add_option("--dest", a.dest, "destination nodes, comma separated")->delimiter(',')->required();
  };
  auto model_opts = [&a](CLI::App* c) {
    c->add_option("--mode", a.mode, "lh or lt")->capture_default_str();
    c->add_flag("--no-connectivity", a.no_connectivity, "drop the commodity-flow constraints");
  };
  auto limit_opts = [&a](CLI::App* c) {
    c->add_option("--node-limit", a.node_limit, "branch-and-bound node limit")->capture_default_str();
    c->add_option("--time-limit-ms", a.time_limit_ms, "wall-clock limit per solve")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "solve one session");
  network_opts(solve);
  session_opts(solve);
  model_opts(solve);
  limit_opts(solve);
  solve->add_option("--write-solution", a.write_solution, "write the assignment as 'name value' lines");

  auto* compare = app.add_subcommand("compare", "solve one session as LH and as LT");
  network_opts(compare);
  session_opts(compare);
  compare->add_flag("--no-connectivity", a.no_connectivity, "drop the commodity-flow constraints");
  limit_opts(compare);

  auto* batch = app.add_subcommand("batch", "random-session experiment, CSV per session");
  network_opts(batch);
  limit_opts(batch);
  batch->add_option("--size", a.size, "destinations per session")->capture_default_str();
  batch->add_option("--count", a.count, "number of sessions")->capture_default_str();
  batch->add_option("--seed", a.seed, "generator seed")->capture_default_str();
  batch->add_flag("--distinct-sources", a.distinct_sources, "never reuse a node as a session source");
  batch->add_option("--modes", a.modes, "modes to run")->delimiter(',')->capture_default_str();
  batch->add_option("--session", a.sessions, "fixed session SRC:D1,D2 (repeatable; replaces generation)");
  batch->add_option("--csv,--out", a.out, "CSV path (default stdout, metrics then go to stderr)");
  batch->add_flag("--timing", a.timing, "fill the ms column");

  auto* val = app.add_subcommand("validate", "check a structure dump against the hierarchy rules");
  network_opts(val);
  session_opts(val);
  val->add_option("--structures", a.structures, "dump file, one 'λk: ...' line per structure")->required();
  val->add_flag("--no-connectivity", a.no_connectivity, "skip reachability and flow checks");

  auto* emit = app.add_subcommand("emit-lp", "write the ILP in LP format");
  network_opts(emit);
  session_opts(emit);
  model_opts(emit);
  emit->add_option("--out", a.out, "output path (default stdout)");

  auto* imp = app.add_subcommand("import-sol", "check an external solution against the ILP");
  network_opts(imp);
  session_opts(imp);
  model_opts(imp);
  imp->add_option("--solution", a.solution, "'name value' lines")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return detail::cmd_solve(a, out);
    if (*compare) return detail::cmd_compare(a, out);
    if (*batch) return detail::cmd_batch(a, out, err);
    if (*val) return detail::cmd_validate(a, out);
    if (*emit) return detail::cmd_emit_lp(a, out);
    if (*imp) return detail::cmd_import_sol(a, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace lumharch
