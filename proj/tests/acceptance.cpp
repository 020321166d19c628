// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "hqc/experiments.hpp"
#include "hqc/holonomy.hpp"
#include "hqc/propagation.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

using namespace hqc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int threads() { return std::max(1, default_thread_count()); }

double variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size());
}

double slope(const std::vector<SweepRow>& rows) {
  double mx = 0, my = 0;
  for (const auto& r : rows) {
    mx += r.x;
    my += r.f_mean;
  }
  mx /= rows.size();
  my /= rows.size();
  double sxy = 0, sxx = 0;
  for (const auto& r : rows) {
    sxy += (r.x - mx) * (r.f_mean - my);
    sxx += (r.x - mx) * (r.x - mx);
  }
  return sxy / sxx;
}

const SweepRow& row_at(const std::vector<SweepRow>& rows, double x) {
  const SweepRow* best = &rows.front();
  for (const auto& r : rows)
    if (std::abs(r.x - x) < std::abs(best->x - x)) best = &r;
  return *best;
}

std::vector<SweepRow> g_mean_control_rows;

Outcome berry_phase() {
  Outcome o;
  const double g1 = berry_closed_form(1.2024), g2 = berry_closed_form(0.7605);
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double a = 0.01 * i;
    worst = std::max(worst, std::abs(berry_numeric(Schedule(a, 1.0), 4000) - berry_closed_form(a)));
  }
  o.detail << "gamma(1.2024)=" << g1 << " gamma(0.7605)=" << g2 << " max|numeric-closed|=" << worst;
  o.require(std::abs(g1 - kPi) <= 1e-3, "gamma(1.2024) = pi");
  o.require(std::abs(g2 - kPi / 2) <= 1e-3, "gamma(0.7605) = pi/2");
  o.require(worst <= 1e-8, "numeric vs closed form");
  return o;
}

Outcome adiabatic_limit() {
  Outcome o;
  const auto cfg = default_config(Experiment::Runtime);
  const auto rows = sweep_runtime(cfg, threads());
  const double f1 = rows.front().f_mean, f100 = rows.back().f_mean;
  o.detail << rows.size() << " points, f(T=1)=" << f1 << " f(T=100)=" << f100;
  o.require(rows.size() == 40, "40 grid points");
  o.require(f100 >= 0.99, "f(100) >= 0.99");
  o.require(f100 - f1 > 0.3, "f(100) - f(1) > 0.3");
  return o;
}

Outcome control_speedup() {
  Outcome o;
  const auto cfg = default_config(Experiment::MeanControl);
  g_mean_control_rows = sweep_mean_control(cfg, threads());
  const auto& rows = g_mean_control_rows;
  double best = 0.0;
  for (const auto& r : rows) best = std::max(best, r.f_mean);
  const double s = slope(rows);
  o.detail << "T=1, f(0)=" << rows.front().f_mean << " max f=" << best << " f(" << rows.back().x
           << ")=" << rows.back().f_mean << " slope=" << s;
  o.require(best >= 0.95, "max f >= 0.95");
  o.require(s > 0.0, "positive trend");
  return o;
}

Outcome zero_energy_resonances() {
  Outcome o;
  auto cfg = default_config(Experiment::DtZeroEnergy);
  const double J = cfg.control.J;
  const auto rows0 = sweep_dt_zero_energy(cfg, threads());
  for (int n : {1, 2}) {
    const auto& res = row_at(rows0, 2 * kPi * n / J);
    const auto& anti = row_at(rows0, (2 * n + 1) * kPi / J);
    o.detail << "n=" << n << ": f_res=" << res.f_mean << " f_anti=" << anti.f_mean << "; ";
    o.require(res.resonant && res.nearest_n == n, "resonance flagged for n=" + std::to_string(n));
    o.require(res.f_mean > anti.f_mean, "resonant beats anti-resonant for n=" + std::to_string(n));
  }
  cfg.control.p = 0.5;
  cfg.realizations = 10;
  const auto rows5 = sweep_dt_zero_energy(cfg, threads());
  std::vector<double> f0, f5;
  for (const auto& r : rows0) f0.push_back(r.f_mean);
  for (const auto& r : rows5) f5.push_back(r.f_mean);
  const double v0 = variance(f0), v5 = variance(f5);
  o.detail << "var_dt f: p=0 " << v0 << ", p=0.5 " << v5;
  o.require(v5 < v0, "p=0.5 variance below p=0 variance");
  return o;
}

Outcome kick_equivalence() {
  Outcome o;
  const auto cfg = default_config(Experiment::KickEquivalence);
  const auto reports = compare_positive_vs_zero_energy(cfg, threads());
  double worst = 0.0;
  for (const auto& r : reports) {
    worst = std::max(worst, r.max_unitary_difference);
    o.require(std::abs(r.net_area_positive - kPi * r.kick_count) <= 1e-9 * r.kick_count, "positive area m pi");
    // sign-alternating: zero for an even kick count, one kick otherwise
    o.require(std::abs(r.net_area_alternating - kPi * (r.kick_count % 2)) <= 1e-12, "alternating area");
  }
  o.detail << reports.size() << " intervals, kicks " << reports.back().kick_count << ".." << reports.front().kick_count
           << ", max|U+ - U-|=" << worst << ", net areas m*pi vs " << reports.front().net_area_alternating;
  o.require(worst <= 1e-10, "unitaries agree to 1e-10");
  return o;
}

Outcome invariants() {
  Outcome o;
  UniformStream rng(2015);
  double unitary = 0.0, dark = 0.0, spectrum = 0.0, commutator = 0.0, dfs = 0.0;

  for (GateKind kind : {GateKind::Phase, GateKind::XGate, GateKind::CPhase}) {
    const GateSpec spec{kind, Schedule(kind == GateKind::CPhase ? 1.2024 : 0.7605, 10.0), {}};
    for (int i = 0; i < 100; ++i) {
      const double t = rng.next() * spec.schedule.T;
      const DynOperator h = build_logical(spec, t);
      for (const auto& d : dark_states(spec, t)) dark = std::max(dark, (h * d).norm());
      if (kind != GateKind::CPhase) {
        const auto ev = spectral_gap(Operator4(h));
        const double expected[4] = {-1, 0, 0, 1};
        for (int k = 0; k < 4; ++k) spectrum = std::max(spectrum, std::abs(ev[k] - expected[k]));
      }
    }
  }

  const Operator16 z = physical::total_z();
  for (double j12 : {0.25, 1.0, 2.0, 4.0})
    for (double j13 : {0.25, 1.0, 2.0, 4.0})
      for (int k = 0; k < 24; ++k) {
        const double phi = 2 * kPi * k / 24;
        const Couplings c{j12, j13};
        const Operator16 h = build_physical(GateSpec{GateKind::PhysicalFour, Schedule(0.5, 1.0), c}, phi);
        commutator = std::max(commutator, max_abs(h * z - z * h));
        dfs = std::max(dfs, max_abs(project_dfs(h).block - physical_scale(c) * h1_at(physical_theta(c), phi)));
      }

  const std::vector<PulseTrain> trains{PulseTrain{},
                                       {ControlKind::PositiveSquare, 200.0, 0.005, 0.5, 3},
                                       {ControlKind::ZeroEnergyAlternating, 100 * kPi, 0.02, 0.5, 4},
                                       {ControlKind::DeltaKickPositive, 0.0, 0.1, 0.5, 5},
                                       {ControlKind::DeltaKickAlternating, 0.0, 0.1, 0.5, 6}};
  int runs = 0;
  for (GateKind kind : {GateKind::Phase, GateKind::XGate, GateKind::CPhase, GateKind::PhysicalFour})
    for (const auto& train : trains) {
      const GateSpec spec{kind, Schedule(0.7605, 2.0), {1.0, 1.0}};
      const auto prop = propagate_lab(spec, generate_segments(train, 2.0), kicks_for(train, 2.0), StepPolicy{});
      unitary = std::max(unitary, prop.unitarity_defect);
      ++runs;
    }

  o.detail << "unitarity " << unitary << " over " << runs << " runs, dark " << dark << ", spectrum " << spectrum
           << ", [H,Z] " << commutator << ", DFS " << dfs;
  o.require(unitary <= 1e-9, "unitarity");
  o.require(dark <= 1e-12, "dark-state annihilation");
  o.require(spectrum <= 1e-10, "H1/H2 spectrum");
  o.require(commutator <= 1e-13, "[H, Z] = 0");
  o.require(dfs <= 1e-11, "DFS projection");
  return o;
}

Outcome frame_equivalence() {
  Outcome o;
  auto overlaps = [](const Schedule& s, const std::vector<ControlSegment>& segs) {
    const GateSpec spec{GateKind::Phase, s, {}};
    const auto lab = propagate_lab(spec, segs, {}, StepPolicy{});
    const auto adi = propagate_adiabatic(s, segs, StepPolicy{});
    return std::pair{evaluate(spec, lab).overlap_abs, evaluate(spec, adi).overlap_abs};
  };
  const auto [l1, a1] = overlaps(Schedule(kDefaultA, 10.0), generate_segments(PulseTrain{}, 10.0));
  const auto [l2, a2] = overlaps(Schedule(kDefaultA, 1.0),
                                 generate_segments({ControlKind::PositiveSquare, 200.0, 0.005, 0.0, 0}, 1.0));
  o.detail << "T=10 none: lab " << l1 << " adiabatic " << a1 << "; T=1 J=200: lab " << l2 << " adiabatic " << a2;
  o.require(std::abs(l1 - a1) <= 1e-4, "T=10 no control");
  o.require(std::abs(l2 - a2) <= 1e-4, "T=1 PositiveSquare J=200");
  return o;
}

Outcome reproducibility() {
  Outcome o;
  const auto cfg = default_config(Experiment::MeanControl);
  const std::string first = csv_string(g_mean_control_rows.empty() ? sweep_mean_control(cfg, threads())
                                                                   : g_mean_control_rows);
  const std::string serial = csv_string(sweep_mean_control(cfg, 1));
  const std::string parallel = csv_string(sweep_mean_control(cfg, 4));
  o.detail << "mean-control CSV " << first.size() << " bytes, runs with 1 and 4 threads";
  o.require(first == serial, "rerun identical");
  o.require(serial == parallel, "thread count independent");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form Berry phase", berry_phase},
      {"adiabatic limit without control", adiabatic_limit},
      {"control-induced speedup", control_speedup},
      {"zero-energy resonances", zero_energy_resonances},
      {"exact kick equivalence", kick_equivalence},
      {"invariant suites", invariants},
      {"frame equivalence", frame_equivalence},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
