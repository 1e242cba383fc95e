// pimecc: experiment runner and netlist utilities.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pimecc/errors.hpp"
#include "pimecc/experiments.hpp"
#include "pimecc/hamming.hpp"
#include "pimecc/netlist.hpp"
#include "pimecc/pipeline.hpp"
#include "pimecc/workloads.hpp"

namespace {

using namespace pimecc;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> rows;
  std::optional<std::size_t> R;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::vector<double> p;
  std::vector<std::string> schemes;
  std::vector<std::size_t> r_values;
  std::vector<std::string> technologies;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "base RNG seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials");
  cmd->add_option("--out", o.out, "output prefix (<out>.csv, <out>.json)");
  cmd->add_option("--rows", o.rows, "rows per trial");
  cmd->add_option("--R", o.R, "pipeline parameter R");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--p", o.p, "error probability grid")->delimiter(',');
  cmd->add_option("--schemes", o.schemes, "none, detection, hamming, dmr, tmr, hybrid(a), hybrid(iso)")->delimiter(',');
  cmd->add_option("--R-values", o.r_values, "R values for rsweep")->delimiter(',');
  cmd->add_option("--technologies", o.technologies, "technology names for energy")->delimiter(',');
}

ExperimentConfig resolve(ExperimentKind kind, const Overrides& o) {
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  if (!o.config.empty()) {
    c = load_config(o.config);
    if (c.kind != kind) {
      throw ConfigError("config describes '" + std::string(to_string(c.kind)) + "', not '" +
                        std::string(to_string(kind)) + "'");
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.rows) c.rows = *o.rows;
  if (o.R) c.R = *o.R;
  if (o.threads) c.threads = *o.threads;
  if (o.out) c.out = *o.out;
  if (!o.p.empty()) c.p_grid = o.p;
  if (!o.schemes.empty()) c.schemes = o.schemes;
  if (!o.r_values.empty()) c.r_values = o.r_values;
  if (!o.technologies.empty()) c.technologies = o.technologies;
  c.validate();
  return c;
}

int run_kind(ExperimentKind kind, const Overrides& o) {
  const ExperimentConfig c = resolve(kind, o);
  const Table t = run_experiment(c);
  write_outputs(t, c.out);
  std::cout << "wrote " << c.out << ".csv (" << t.rows.size() << " rows) and " << c.out << ".json\n";
  return 0;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t depth_of(const NorNetlist& n) {
  std::vector<std::size_t> level(n.signal_count(), 0);
  std::size_t d = 0;
  for (std::size_t g = 0; g < n.gate_count(); ++g) {
    const NorGate& gate = n.gates()[g];
    const std::size_t l = 1 + std::max(level[gate.in1], level[gate.in2]);
    level[n.gate_signal(g)] = l;
    d = std::max(d, l);
  }
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pimecc: fault-tolerant processing-in-memory simulator"};
  app.require_subcommand(1);

  Overrides cov, rsw, fft, nrg;
  add_overrides(app.add_subcommand("coverage", "uncorrected-error rate vs gate error probability"), cov);
  add_overrides(app.add_subcommand("rsweep", "latency and area overhead across R"), rsw);
  add_overrides(app.add_subcommand("fft-accuracy", "FFT SQNR under faults"), fft);
  add_overrides(app.add_subcommand("energy", "energy breakdown per scheme and technology"), nrg);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "run the experiment a config file describes");
  std::optional<std::string> run_out;
  run_cmd->add_option("config", run_config, "JSON config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "output prefix, overriding the config");

  std::string netlist_path;
  auto* validate = app.add_subcommand("validate-netlist", "parse a netlist and report its shape");
  validate->add_option("netlist", netlist_path, "netlist file")->required();

  std::string gen_kind = "random", gen_out;
  std::size_t gen_gates = 64, gen_inputs = 8;
  unsigned gen_bits = 8, gen_points = 16, gen_total = 8, gen_frac = 7;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "emit a generated netlist");
  generate->add_option("kind", gen_kind, "random | adder | multiplier | fft")
      ->check(CLI::IsMember({"random", "adder", "multiplier", "fft"}));
  generate->add_option("--gates", gen_gates);
  generate->add_option("--inputs", gen_inputs);
  generate->add_option("--bits", gen_bits);
  generate->add_option("--points", gen_points);
  generate->add_option("--total-bits", gen_total);
  generate->add_option("--fraction-bits", gen_frac);
  generate->add_option("--seed", gen_seed);
  generate->add_option("--out", gen_out, "file (default: stdout)");

  std::string plan_netlist, plan_mode = "detection", plan_out;
  std::size_t plan_R = 16, plan_k = 4, plan_rows = 1;
  auto* plan_cmd = app.add_subcommand("plan", "print the cycle-by-cycle schedule of a netlist");
  plan_cmd->add_option("netlist", plan_netlist, "netlist file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--mode", plan_mode)->check(CLI::IsMember({"baseline", "detection", "correction"}));
  plan_cmd->add_option("--R", plan_R);
  plan_cmd->add_option("--code-k", plan_k);
  plan_cmd->add_option("--rows", plan_rows);
  plan_cmd->add_option("--out", plan_out, "file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("coverage")) return run_kind(ExperimentKind::Coverage, cov);
    if (app.got_subcommand("rsweep")) return run_kind(ExperimentKind::RSweep, rsw);
    if (app.got_subcommand("fft-accuracy")) return run_kind(ExperimentKind::FftAccuracy, fft);
    if (app.got_subcommand("energy")) return run_kind(ExperimentKind::Energy, nrg);
    if (app.got_subcommand("run")) {
      ExperimentConfig c = load_config(run_config);
      if (run_out) c.out = *run_out;
      const Table t = run_experiment(c);
      write_outputs(t, c.out);
      std::cout << "wrote " << c.out << ".csv (" << t.rows.size() << " rows) and " << c.out << ".json\n";
      return 0;
    }
    if (app.got_subcommand("validate-netlist")) {
      const NorNetlist n = parse_netlist(slurp(netlist_path));
      std::cout << "ok: " << n.input_count() << " inputs, " << n.gate_count() << " gates, "
                << n.outputs().size() << " outputs, depth " << depth_of(n) << "\n";
      return 0;
    }
    if (app.got_subcommand("generate")) {
      NorNetlist n;
      if (gen_kind == "random") n = gen_random(gen_gates, gen_inputs, gen_seed);
      else if (gen_kind == "adder") n = gen_adder(gen_bits);
      else if (gen_kind == "multiplier") n = gen_multiplier(gen_bits);
      else n = gen_fft(gen_points, FixedPointFormat{gen_total, gen_frac});
      const std::string text = print_netlist(n);
      if (gen_out.empty()) std::cout << text;
      else write_file_atomic(gen_out, text);
      return 0;
    }
    if (app.got_subcommand("plan")) {
      const NorNetlist n = parse_netlist(slurp(plan_netlist));
      const PipelineMode mode = plan_mode == "baseline"    ? PipelineMode::Baseline
                                : plan_mode == "detection" ? PipelineMode::Detection
                                                           : PipelineMode::Correction;
      std::optional<HammingCode> code;
      if (mode == PipelineMode::Correction) code = HammingCode::build(plan_k);
      PipelineOptions opt;
      opt.R = plan_R;
      const Plan p = plan(n, mode, code, {plan_rows, 0}, opt);
      const auto problems = validate_schedule(p.schedule, p.layout);
      for (const auto& msg : problems) std::cerr << "invalid: " << msg << "\n";
      const std::string text = dump_schedule(p.schedule);
      if (plan_out.empty()) std::cout << text;
      else write_file_atomic(plan_out, text);
      std::cerr << p.schedule.latency() << " cycles, " << p.schedule.ops.size() << " ops, "
                << p.layout.total_columns << " columns\n";
      return problems.empty() ? 0 : 1;
    }
  } catch (const NetlistError& e) {
    std::cerr << "netlist error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
