#pragma once

// Parameter sweeps over runtime, mean control strength and pulse length,
// with seeded noise realizations evaluated in parallel and assembled in
// grid order.

#include "hqc/control.hpp"
#include "hqc/hamiltonians.hpp"
#include "hqc/holonomy.hpp"
#include "hqc/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hqc {

enum class Experiment { Runtime, MeanControl, DtZeroEnergy, KickEquivalence };
enum class SweepVariable { T, MeanControl, Dt };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Runtime: return "runtime";
    case Experiment::MeanControl: return "mean-control";
    case Experiment::DtZeroEnergy: return "dt-zero-energy";
    case Experiment::KickEquivalence: return "kick-equivalence";
  }
  return "?";
}

inline Experiment experiment_from_string(std::string_view s) {
  for (auto e : {Experiment::Runtime, Experiment::MeanControl, Experiment::DtZeroEnergy, Experiment::KickEquivalence}) {
    if (s == to_string(e)) return e;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

inline std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::T: return "T";
    case SweepVariable::MeanControl: return "mean_control";
    case SweepVariable::Dt: return "dt";
  }
  return "?";
}

inline SweepVariable sweep_variable_from_string(std::string_view s) {
  for (auto v : {SweepVariable::T, SweepVariable::MeanControl, SweepVariable::Dt}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown sweep_variable '" + std::string(s) + "'");
}

inline SweepVariable sweep_variable_for(Experiment e) {
  switch (e) {
    case Experiment::Runtime: return SweepVariable::T;
    case Experiment::MeanControl: return SweepVariable::MeanControl;
    case Experiment::DtZeroEnergy:
    case Experiment::KickEquivalence: return SweepVariable::Dt;
  }
  return SweepVariable::T;
}

struct ExperimentConfig {
  GateSpec gate;
  PulseTrain control;
  SweepVariable sweep_variable = SweepVariable::T;
  std::vector<double> grid;
  int realizations = 1;
  std::uint64_t master_seed = 0;
  StepPolicy policy;
  double resonance_tol = 1e-6;

  void validate() const {
    gate.validate();
    control.validate();
    policy.validate();
    if (grid.empty()) throw std::invalid_argument("ExperimentConfig: grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i])) throw std::invalid_argument("ExperimentConfig: grid value not finite");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("ExperimentConfig: grid must be ascending");
    }
    if (realizations < 1) throw std::invalid_argument("ExperimentConfig: realizations must be >= 1");
  }
};

struct SweepRow {
  double x = 0.0;
  double f_mean = 0.0;
  double f_min = 0.0;
  double f_max = 0.0;
  double gamma_measured_mean = 0.0;  // circular mean over realizations
  double gamma_ideal = 0.0;
  double overlap_mean = 0.0;
  bool resonant = false;
  long nearest_n = 0;
  std::uint64_t seed_base = 0;
  // recorded alongside the CSV columns (JSON bundle only)
  double measured_mean_control = 0.0;
  long steps = 0;
  int realizations = 1;
};

struct KickEquivalenceReport {
  double interval = 0.0;
  std::size_t kick_count = 0;
  double max_unitary_difference = 0.0;
  double net_area_positive = 0.0;
  double net_area_alternating = 0.0;
  double f_positive = 0.0;
  double f_alternating = 0.0;
  double unitarity_defect = 0.0;
};

/// Grid helpers.
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("logspace: bounds must be positive");
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : e) v = std::exp(v);
  e.front() = lo;
  e.back() = hi;
  return e;
}

/// Resonant (J dt = 2 pi n) and anti-resonant (J dt = (2n+1) pi) pulse lengths.
inline std::vector<double> resonance_points(double J, int n_max) {
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(2.0 * n * kPi / J);
    out.push_back((2.0 * n + 1.0) * kPi / J);
  }
  return out;
}

/// Sorted union; values closer than tol collapse to the first one.
inline std::vector<double> merge_grid(std::vector<double> grid, const std::vector<double>& extra, double tol = 1e-12) {
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  for (double v : grid)
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  return out;
}

inline constexpr double kDefaultA = 0.7605;
inline constexpr double kDefaultZeroEnergyJ = 100.0 * kPi;

inline ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.gate.kind = GateKind::Phase;
  cfg.master_seed = 20150519;
  cfg.sweep_variable = sweep_variable_for(e);
  switch (e) {
    case Experiment::Runtime:
      cfg.gate.schedule = Schedule(kDefaultA, 100.0);
      cfg.control = PulseTrain{};
      cfg.grid = logspace(1.0, 100.0, 40);
      break;
    case Experiment::MeanControl:
      cfg.gate.schedule = Schedule(kDefaultA, 1.0);
      cfg.control = PulseTrain{ControlKind::PositiveSquare, 0.0, 0.005, 0.5, 0};
      cfg.grid = linspace(0.0, 200.0, 40);
      cfg.realizations = 10;
      break;
    case Experiment::DtZeroEnergy: {
      const double T = 10.0;
      cfg.gate.schedule = Schedule(kDefaultA, T);
      cfg.control = PulseTrain{ControlKind::ZeroEnergyAlternating, kDefaultZeroEnergyJ, T / 2000.0, 0.0, 0};
      cfg.grid = merge_grid(linspace(T / 2000.0, T / 20.0, 60), resonance_points(kDefaultZeroEnergyJ, 2));
      cfg.realizations = 1;
      break;
    }
    case Experiment::KickEquivalence:
      cfg.gate.schedule = Schedule(kDefaultA, 10.0);
      cfg.control = PulseTrain{ControlKind::DeltaKickPositive, 0.0, 0.1, 0.0, 0};
      cfg.grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
      break;
  }
  return cfg;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown (first one wins) after all workers join.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
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

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace detail {

struct RunOutcome {
  HolonomyResult h;
  double mean_control = 0.0;
  long steps = 0;
  double unitarity_defect = 0.0;
};

inline RunOutcome run_once(const GateSpec& gate, const PulseTrain& train, const StepPolicy& policy) {
  const double T = gate.schedule.T;
  const auto segments = generate_segments(train, T);
  const auto kicks = kicks_for(train, T);
  const auto prop = propagate_lab(gate, segments, kicks, policy);
  RunOutcome out;
  out.h = evaluate(gate, prop);
  out.mean_control = mean_control(segments, kicks);
  out.steps = prop.steps_taken;
  out.unitarity_defect = prop.unitarity_defect;
  if (!(prop.unitarity_defect <= kUnitarityTol)) {
    std::ostringstream msg;
    msg << "unitarity defect " << prop.unitarity_defect << " exceeds " << kUnitarityTol;
    throw std::runtime_error(msg.str());
  }
  return out;
}

inline bool is_random(const PulseTrain& t) {
  return t.kind != ControlKind::NoControl && t.p > 0.0 && (is_kick_kind(t.kind) || t.J > 0.0);
}

/// One grid point: the gate and pulse train to run, before seeding.
struct GridTask {
  GateSpec gate;
  PulseTrain train;
};

template <class MakeTask>
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int threads, MakeTask&& make_task) {
  cfg.validate();
  const std::size_t n_grid = cfg.grid.size();
  std::vector<GridTask> tasks;
  tasks.reserve(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) tasks.push_back(make_task(cfg.grid[j]));

  std::vector<int> reps(n_grid);
  std::vector<std::size_t> offset(n_grid + 1, 0);
  for (std::size_t j = 0; j < n_grid; ++j) {
    reps[j] = is_random(tasks[j].train) ? cfg.realizations : 1;
    offset[j + 1] = offset[j] + static_cast<std::size_t>(reps[j]);
  }

  std::vector<RunOutcome> outcomes(offset.back());
  parallel_for(outcomes.size(), threads, [&](std::size_t item) {
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), item) - offset.begin()) - 1;
    const std::size_t k = item - offset[j];
    PulseTrain train = tasks[j].train;
    train.seed = derive_seed(cfg.master_seed, j, k);
    outcomes[item] = run_once(tasks[j].gate, train, cfg.policy);
  });

  std::vector<SweepRow> rows;
  rows.reserve(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) {
    SweepRow row;
    row.x = cfg.grid[j];
    row.seed_base = derive_seed(cfg.master_seed, j, 0);
    row.realizations = reps[j];
    row.f_min = 1.0;
    row.f_max = 0.0;
    Complex phasor{0.0, 0.0};
    for (std::size_t i = offset[j]; i < offset[j + 1]; ++i) {
      const auto& o = outcomes[i];
      row.f_mean += o.h.f;
      row.f_min = std::min(row.f_min, o.h.f);
      row.f_max = std::max(row.f_max, o.h.f);
      row.overlap_mean += o.h.overlap_abs;
      row.measured_mean_control += o.mean_control;
      row.steps += o.steps;
      phasor += std::polar(1.0, o.h.gamma_measured);
      row.gamma_ideal = o.h.gamma_ideal;
    }
    const double n = static_cast<double>(reps[j]);
    row.f_mean /= n;
    row.overlap_mean /= n;
    row.measured_mean_control /= n;
    row.gamma_measured_mean = reps[j] == 1 ? outcomes[offset[j]].h.gamma_measured : std::arg(phasor);
    // the mean of identical values can round one ulp outside [min, max]
    row.f_mean = std::clamp(row.f_mean, row.f_min, row.f_max);
    const auto& train = tasks[j].train;
    if (train.J > 0.0 && (train.kind == ControlKind::PositiveSquare || train.kind == ControlKind::ZeroEnergyAlternating)) {
      const auto res = resonance_condition(train.J, train.dt, cfg.resonance_tol);
      row.resonant = res.is_resonant;
      row.nearest_n = res.nearest_n;
    }
    rows.push_back(row);
  }
  return rows;
}

inline void require_kind(const ExperimentConfig& cfg, std::initializer_list<ControlKind> kinds, const char* who) {
  for (auto k : kinds)
    if (cfg.control.kind == k) return;
  throw std::invalid_argument(std::string(who) + ": control kind '" + std::string(to_string(cfg.control.kind)) +
                              "' not supported");
}

inline bool commensurate(double T, double dt) {
  const double ratio = T / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace detail

/// f against total runtime T, without control.
inline std::vector<SweepRow> sweep_runtime(const ExperimentConfig& cfg, int threads = 1) {
  detail::require_kind(cfg, {ControlKind::NoControl}, "sweep_runtime");
  return detail::run_sweep(cfg, threads, [&](double T) {
    GateSpec gate = cfg.gate;
    gate.schedule = Schedule(cfg.gate.schedule.a, T);
    return detail::GridTask{gate, cfg.control};
  });
}

/// f against the target time-averaged control at fixed T. The pulse
/// amplitude is twice the target (50% duty); the measured mean is recorded.
inline std::vector<SweepRow> sweep_mean_control(const ExperimentConfig& cfg, int threads = 1) {
  detail::require_kind(cfg, {ControlKind::PositiveSquare}, "sweep_mean_control");
  if (!detail::commensurate(cfg.gate.schedule.T, cfg.control.dt)) {
    throw std::invalid_argument("sweep_mean_control: dt does not divide T");
  }
  for (double m : cfg.grid)
    if (m < 0.0) throw std::invalid_argument("sweep_mean_control: mean control must be >= 0");
  return detail::run_sweep(cfg, threads, [&](double target) {
    PulseTrain train = cfg.control;
    train.J = 2.0 * target;
    return detail::GridTask{cfg.gate, train};
  });
}

/// f against pulse length dt for the sign-alternating (zero net area) control.
inline std::vector<SweepRow> sweep_dt_zero_energy(const ExperimentConfig& cfg, int threads = 1) {
  detail::require_kind(cfg, {ControlKind::ZeroEnergyAlternating}, "sweep_dt_zero_energy");
  for (double dt : cfg.grid) {
    if (!(dt > 0.0 && dt < cfg.gate.schedule.T)) throw std::invalid_argument("sweep_dt_zero_energy: dt outside (0, T)");
  }
  return detail::run_sweep(cfg, threads, [&](double dt) {
    PulseTrain train = cfg.control;
    train.dt = dt;
    return detail::GridTask{cfg.gate, train};
  });
}

/// Positive and sign-alternating pi-kicks at identical instants.
inline KickEquivalenceReport compare_positive_vs_zero_energy(const GateSpec& gate, double interval, std::uint64_t seed,
                                                             double jitter, const StepPolicy& policy) {
  const double T = gate.schedule.T;
  KickEquivalenceReport rep;
  rep.interval = interval;
  const auto segments = generate_segments(PulseTrain{}, T);
  KickSchedule positive;
  if (interval < T) positive = make_kicks(ControlKind::DeltaKickPositive, T, interval, seed, jitter);
  KickSchedule alternating = positive;
  for (std::size_t i = 0; i < alternating.signs.size(); ++i) alternating.signs[i] = i % 2 == 0 ? 1 : -1;

  const auto up = propagate_lab(gate, segments, positive, policy);
  const auto ua = propagate_lab(gate, segments, alternating, policy);
  rep.kick_count = positive.size();
  rep.max_unitary_difference = max_abs(up.U - ua.U);
  rep.net_area_positive = net_area({}, positive);
  rep.net_area_alternating = net_area({}, alternating);
  rep.f_positive = evaluate(gate, up).f;
  rep.f_alternating = evaluate(gate, ua).f;
  rep.unitarity_defect = std::max(up.unitarity_defect, ua.unitarity_defect);
  return rep;
}

/// Kick-equivalence over a grid of kick intervals; one report per grid point.
inline std::vector<KickEquivalenceReport> compare_positive_vs_zero_energy(const ExperimentConfig& cfg, int threads = 1) {
  cfg.validate();
  detail::require_kind(cfg, {ControlKind::DeltaKickPositive, ControlKind::DeltaKickAlternating},
                       "compare_positive_vs_zero_energy");
  std::vector<KickEquivalenceReport> reports(cfg.grid.size());
  parallel_for(reports.size(), threads, [&](std::size_t j) {
    reports[j] = compare_positive_vs_zero_energy(cfg.gate, cfg.grid[j], derive_seed(cfg.master_seed, j, 0),
                                                 cfg.control.p / 2.0, cfg.policy);
  });
  return reports;
}

/// Rows for the CSV view of a kick-equivalence run (x = kick interval,
/// f of the positive-kick run).
inline std::vector<SweepRow> kick_rows(const ExperimentConfig& cfg, const std::vector<KickEquivalenceReport>& reports) {
  std::vector<SweepRow> rows;
  const double gamma_ideal = berry_closed_form(cfg.gate.schedule.a);
  for (std::size_t j = 0; j < reports.size(); ++j) {
    SweepRow row;
    row.x = reports[j].interval;
    row.f_mean = row.f_min = row.f_max = reports[j].f_positive;
    row.gamma_ideal = gamma_ideal;
    row.seed_base = derive_seed(cfg.master_seed, j, 0);
    rows.push_back(row);
  }
  return rows;
}

// CSV output: grid order, 12 significant digits, LF line endings.

inline constexpr std::string_view kCsvHeader =
    "x,f_mean,f_min,f_max,gamma_measured_mean,gamma_ideal,overlap_mean,resonant,nearest_n,seed_base";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_string(const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.x) + ',' + format_number(r.f_mean) + ',' + format_number(r.f_min) + ',' +
           format_number(r.f_max) + ',' + format_number(r.gamma_measured_mean) + ',' + format_number(r.gamma_ideal) +
           ',' + format_number(r.overlap_mean) + ',' + (r.resonant ? "1" : "0") + ',' + std::to_string(r.nearest_n) +
           ',' + std::to_string(r.seed_base) + '\n';
  }
  return out;
}

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw OutputError("failed writing '" + path + "'");
}

inline void write_csv(const std::vector<SweepRow>& rows, const std::string& path) { write_text(path, csv_string(rows)); }

}  // namespace hqc
