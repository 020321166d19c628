// holonomy_sim: single-gate runs, parameter sweeps and the invariant selftest.
//
// Exit codes: 0 ok, 1 selftest failure, 2 invalid arguments or config,
// 3 tolerance violation (unitarity), 4 unwritable output.

#include "hqc/experiments.hpp"
#include "hqc/holonomy.hpp"
#include "hqc/io.hpp"
#include "hqc/plot.hpp"
#include "hqc/selftest.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace hqc;

namespace {

constexpr int kExitSelftest = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitOutput = 4;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOLONOMY_SIM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid HOLONOMY_SIM_THREADS='" << env << "'\n";
  }
  return default_thread_count();
}

json complex_matrix(const DynOperator& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct GateArgs {
  std::string kind = "phase";
  double a = kDefaultA;
  double T = 100.0;
  std::string control;
  int steps = 0;
  std::string out;
};

int cmd_gate(const GateArgs& args) {
  GateSpec spec;
  PulseTrain train;
  StepPolicy policy;
  try {
    spec.kind = gate_kind_from_string(args.kind);
    if (spec.kind == GateKind::PhysicalFour) throw ConfigError("gate: kind must be phase, xgate or cphase");
    spec.schedule = Schedule(args.a, args.T);
    if (!args.control.empty()) {
      const json j = args.control.front() == '{' ? parse_json_text(args.control, "--control")
                                                 : load_json_file(args.control);
      train = pulse_train_from_json(j);
    }
    if (args.steps > 0) policy.substeps_per_segment = args.steps;
    policy.validate();
    train.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  PropagationResult prop;
  HolonomyResult h;
  try {
    const auto segments = generate_segments(train, spec.schedule.T);
    const auto kicks = kicks_for(train, spec.schedule.T);
    prop = propagate_lab(spec, segments, kicks, policy);
    h = evaluate(spec, prop);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const DynOperator measured = logical_block(spec.kind, prop.U);
  json phases = json::array();
  for (Eigen::Index i = 0; i < measured.rows(); ++i) phases.push_back(std::arg(measured(i, i)));
  const json result{{"revision", kFormatRevision},
                    {"gate", to_json(spec)},
                    {"control", to_json(train)},
                    {"policy", to_json(policy)},
                    {"gamma_measured", h.gamma_measured},
                    {"gamma_ideal", h.gamma_ideal},
                    {"overlap", h.overlap_abs},
                    {"f", h.f},
                    {"phase_defined", h.phase_defined},
                    {"steps", prop.steps_taken},
                    {"unitarity_defect", prop.unitarity_defect},
                    {"gate_matrix",
                     {{"ideal", complex_matrix(gate_matrix(spec.kind, h.gamma_ideal))},
                      {"from_measured_phase", complex_matrix(gate_matrix(spec.kind, h.gamma_measured))},
                      {"propagator_block", complex_matrix(measured)},
                      {"propagator_block_diagonal_phases", phases}}}};

  if (args.out.empty()) {
    std::cout << result.dump(2) << "\n";
  } else {
    try {
      write_text(args.out, result.dump(2) + "\n");
    } catch (const OutputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitOutput;
    }
    std::cout << to_string(spec.kind) << " gate a=" << args.a << " T=" << args.T << ": gamma_measured=" << h.gamma_measured
              << " gamma_ideal=" << h.gamma_ideal << " overlap=" << h.overlap_abs << " f=" << h.f << "\n";
  }
  if (!(prop.unitarity_defect <= kUnitarityTol)) {
    std::cerr << "error: unitarity defect " << prop.unitarity_defect << " exceeds " << kUnitarityTol << "\n";
    return kExitTolerance;
  }
  return 0;
}

struct SweepArgs {
  std::string experiment;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool plot = false;
  int threads = 0;
};

int cmd_sweep(const SweepArgs& args) {
  Experiment experiment;
  ExperimentConfig cfg;
  try {
    experiment = experiment_from_string(args.experiment);
    cfg = args.config.empty() ? default_config(experiment) : config_from_json(load_json_file(args.config), experiment);
    if (args.seed) cfg.master_seed = *args.seed;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const int threads = resolve_threads(args.threads);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows;
  std::vector<KickEquivalenceReport> kicks;
  try {
    switch (experiment) {
      case Experiment::Runtime: rows = sweep_runtime(cfg, threads); break;
      case Experiment::MeanControl: rows = sweep_mean_control(cfg, threads); break;
      case Experiment::DtZeroEnergy: rows = sweep_dt_zero_energy(cfg, threads); break;
      case Experiment::KickEquivalence:
        kicks = compare_positive_vs_zero_energy(cfg, threads);
        rows = kick_rows(cfg, kicks);
        break;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTolerance;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string stem(to_string(experiment));
  const fs::path dir(args.out_dir);
  std::vector<std::string> outputs;
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto csv = (dir / (stem + ".csv")).string();
    write_csv(rows, csv);
    outputs.push_back(csv);
    const auto bundle = (dir / (stem + ".json")).string();
    write_text(bundle, result_bundle(experiment, cfg, rows, kicks).dump(2) + "\n");
    outputs.push_back(bundle);
    if (args.plot) {
      PlotOptions opt;
      opt.title = "quality factor, " + stem;
      opt.x_label = std::string(to_string(cfg.sweep_variable));
      opt.log_x = experiment == Experiment::Runtime || experiment == Experiment::KickEquivalence;
      const auto svg = (dir / (stem + ".svg")).string();
      write_text(svg, svg_line_chart(rows, opt));
      outputs.push_back(svg);
    }
    long total_steps = 0;
    json per_row = json::array();
    for (const auto& r : rows) {
      total_steps += r.steps;
      per_row.push_back(r.steps);
    }
    const auto manifest_path = (dir / (stem + ".manifest.json")).string();
    outputs.push_back(manifest_path);
    const json manifest{{"revision", kFormatRevision},
                        {"experiment", stem},
                        {"config", to_json(cfg)},
                        {"rng", kRngAlgorithm},
                        {"threads", threads},
                        {"started_at", utc_timestamp()},
                        {"wall_time_seconds", wall},
                        {"steps_total", total_steps},
                        {"steps_per_row", per_row},
                        {"outputs", outputs}};
    write_text(manifest_path, manifest.dump(2) + "\n");
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOutput;
  }

  std::cout << stem << ": " << rows.size() << " rows in " << wall << " s (" << threads << " threads)\n";
  for (const auto& r : rows) {
    std::cout << "  x=" << format_number(r.x) << "  f=" << format_number(r.f_mean)
              << (r.resonant ? "  [resonant n=" + std::to_string(r.nearest_n) + "]" : "") << "\n";
  }
  for (const auto& k : kicks) {
    std::cout << "  interval=" << k.interval << " kicks=" << k.kick_count << " |U+ - U-|max=" << k.max_unitary_difference
              << " net areas " << k.net_area_positive << " vs " << k.net_area_alternating << "\n";
  }
  for (const auto& o : outputs) std::cout << "wrote " << o << "\n";
  return 0;
}

int cmd_selftest(const std::string& mutate) {
  SelftestOptions opt;
  if (mutate == "h1-sign") {
    opt.flip_h1_sign = true;
  } else if (!mutate.empty()) {
    std::cerr << "error: unknown mutation '" << mutate << "'\n";
    return kExitInvalid;
  }
  const auto results = run_selftest(opt);
  std::cout << format_selftest(results);
  for (const auto& r : results)
    if (!r.passed) return kExitSelftest;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomic gate simulator with control-accelerated adiabaticity"};
  app.require_subcommand(1);

  GateArgs gate;
  auto* gate_cmd = app.add_subcommand("gate", "Propagate one gate and report its Berry phase and quality factor");
  gate_cmd->add_option("--kind", gate.kind, "phase | xgate | cphase")->check(CLI::IsMember({"phase", "xgate", "cphase"}));
  gate_cmd->add_option("--a", gate.a, "schedule amplitude a")->check(CLI::NonNegativeNumber);
  gate_cmd->add_option("--T", gate.T, "cycle period T")->check(CLI::PositiveNumber);
  gate_cmd->add_option("--control", gate.control, "pulse train: JSON file or inline JSON object");
  gate_cmd->add_option("--steps", gate.steps, "substeps per control segment (>= 20)");
  gate_cmd->add_option("--out", gate.out, "write the JSON result here instead of stdout");

  SweepArgs sweep;
  std::uint64_t seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write CSV, JSON bundle and manifest");
  sweep_cmd->add_option("--experiment", sweep.experiment, "runtime | mean-control | dt-zero-energy | kick-equivalence")
      ->required()
      ->check(CLI::IsMember({"runtime", "mean-control", "dt-zero-energy", "kick-equivalence"}));
  sweep_cmd->add_option("--config", sweep.config, "JSON config overlaying the experiment defaults");
  auto* seed_opt = sweep_cmd->add_option("--seed", seed, "master seed");
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "output directory");
  sweep_cmd->add_flag("--plot", sweep.plot, "also write an SVG line chart");
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads (default: $HOLONOMY_SIM_THREADS or all cores)");

  std::string mutate;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
  selftest_cmd->add_option("--mutate", mutate, "inject a known fault (h1-sign) to check the suite detects it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (*gate_cmd) return cmd_gate(gate);
  if (*sweep_cmd) {
    if (*seed_opt) sweep.seed = seed;
    return cmd_sweep(sweep);
  }
  if (*selftest_cmd) return cmd_selftest(mutate);
  return kExitInvalid;
}
