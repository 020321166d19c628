#pragma once

// Time-ordered propagation under [1 + c(t)] H(t).
//
// Lab frame: midpoint-sampled piecewise-constant exponentials, with step
// boundaries forced onto every control-segment edge and kick instant.
// Adiabatic frame: the same stepping applied to the phase-gate Hamiltonian
// written in its instantaneous eigenbasis, where the control enters only
// through C(t).

#include "hqc/control.hpp"
#include "hqc/hamiltonians.hpp"
#include "hqc/qcore.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hqc {

struct StepPolicy {
  int substeps_per_segment = 20;
  double max_step = 0.01;
  /// Upper bound on |1 + c| * step, so strong pulses are resolved.
  double max_phase = 0.05;

  void validate() const {
    if (substeps_per_segment < 20) throw std::invalid_argument("StepPolicy: substeps_per_segment must be >= 20");
    if (!(max_step > 0.0)) throw std::invalid_argument("StepPolicy: max_step must be positive");
    if (!(max_phase > 0.0)) throw std::invalid_argument("StepPolicy: max_phase must be positive");
  }

  StepPolicy refined(int factor = 2) const {
    StepPolicy p = *this;
    p.substeps_per_segment *= factor;
    p.max_step /= factor;
    p.max_phase /= factor;
    return p;
  }

  /// Number of equal steps for a piece of given length and control value.
  long steps_for(double length, double c) const {
    const double by_step = std::ceil(length / max_step);
    const double by_phase = std::ceil(std::abs(1.0 + c) * length / max_phase);
    return std::max<long>(substeps_per_segment, static_cast<long>(std::max(by_step, by_phase)));
  }
};

enum class Frame { Lab, Adiabatic };

struct PropagationResult {
  DynOperator U;
  long steps_taken = 0;
  double unitarity_defect = 0.0;
  Frame frame = Frame::Lab;
};

/// Largest unitarity defect tolerated in a PropagationResult.
inline constexpr double kUnitarityTol = 1e-8;

namespace detail {

/// A stretch [t0, t1] with constant control value, followed optionally by a kick at t1.
struct Piece {
  double t0 = 0.0;
  double t1 = 0.0;
  double c = 0.0;
  int kick_sign = 0;
};

inline std::vector<Piece> split_pieces(const std::vector<ControlSegment>& segments, const KickSchedule& kicks) {
  std::vector<Piece> pieces;
  std::size_t next_kick = 0;
  for (const auto& seg : segments) {
    double start = seg.t_start;
    while (next_kick < kicks.size() && kicks.times[next_kick] <= seg.t_end) {
      const double tau = kicks.times[next_kick];
      if (tau < seg.t_start) throw std::invalid_argument("kick schedule is not ascending");
      if (tau > start) {
        pieces.push_back({start, tau, seg.value, kicks.signs[next_kick]});
      } else if (!pieces.empty()) {
        // kick on a segment edge: attach to the piece that ends there
        if (pieces.back().kick_sign != 0) throw std::invalid_argument("two kicks at the same instant");
        pieces.back().kick_sign = kicks.signs[next_kick];
      } else {
        throw std::invalid_argument("kick at t = 0 is not supported");
      }
      start = tau;
      ++next_kick;
    }
    if (seg.t_end > start) pieces.push_back({start, seg.t_end, seg.value, 0});
  }
  if (next_kick != kicks.size()) throw std::invalid_argument("kick instants lie outside the control interval");
  return pieces;
}

}  // namespace detail

/// Generic lab-frame propagation for a Hamiltonian callable h(t) -> Operator<N>.
template <int N, class HamiltonianFn>
PropagationResult propagate(HamiltonianFn&& h, const std::vector<ControlSegment>& segments,
                            const KickSchedule& kicks, const StepPolicy& policy) {
  policy.validate();
  Operator<N> u = Operator<N>::Identity();
  PropagationResult res;
  res.frame = Frame::Lab;
  if (segments.empty()) {
    if (!kicks.empty()) throw std::invalid_argument("kicks given for an empty interval");
    res.U = u;
    return res;
  }
  check_tiling(segments, segments.back().t_end);

  for (const auto& piece : detail::split_pieces(segments, kicks)) {
    const double len = piece.t1 - piece.t0;
    const long n = policy.steps_for(len, piece.c);
    const double step = len / static_cast<double>(n);
    const double scale = (1.0 + piece.c) * step;
    for (long k = 0; k < n; ++k) {
      const double tm = piece.t0 + (static_cast<double>(k) + 0.5) * step;
      u = matexp_hermitian(h(tm), scale) * u;
    }
    res.steps_taken += n;
    if (piece.kick_sign != 0) {
      u = matexp_hermitian(h(piece.t1), piece.kick_sign * kicks.area) * u;
      ++res.steps_taken;
    }
  }
  res.unitarity_defect = unitarity_defect(u);
  res.U = u;
  return res;
}

/// Lab-frame propagation of a gate's Hamiltonian under control.
inline PropagationResult propagate_lab(const GateSpec& spec, const std::vector<ControlSegment>& segments,
                                       const KickSchedule& kicks, const StepPolicy& policy) {
  spec.validate();
  const Schedule& s = spec.schedule;
  if (!segments.empty()) check_tiling(segments, s.T);
  switch (spec.kind) {
    case GateKind::Phase:
      return propagate<4>([&](double t) { return build_h1(s, t); }, segments, kicks, policy);
    case GateKind::XGate:
      return propagate<4>([&](double t) { return build_h2(s, t); }, segments, kicks, policy);
    case GateKind::CPhase:
      return propagate<16>([&](double t) { return build_h3(s, t); }, segments, kicks, policy);
    case GateKind::PhysicalFour:
      return propagate<16>([&](double t) { return build_physical(spec, s.phi(t)); }, segments, kicks, policy);
  }
  throw std::logic_error("propagate_lab: unreachable");
}

/// Instantaneous eigenbasis of the phase-gate Hamiltonian as columns
/// (D0, D1, B+, B-). Bright states carry the phases i and -i:
///   B+- = +-i (|2> +- |v>) / sqrt(2),  |v> = sin(theta)|1> + cos(theta) e^{-i phi}|3>,
/// which puts the frame Hamiltonian into the D1<->B coupling pattern e^{-+iC}.
inline Operator4 adiabatic_basis(double theta, double phi) {
  using namespace logical;
  const State4 v = std::sin(theta) * ket(k1) + std::cos(theta) * std::polar(1.0, -phi) * ket(k3);
  Operator4 basis;
  basis.col(0) = ket(k0);
  basis.col(1) = std::cos(theta) * ket(k1) - std::polar(1.0, -phi) * std::sin(theta) * ket(k3);
  basis.col(2) = kI * (ket(k2) + v) / std::sqrt(2.0);
  basis.col(3) = -kI * (ket(k2) - v) / std::sqrt(2.0);
  return basis;
}

inline Operator4 adiabatic_basis(const Schedule& s, double t) { return adiabatic_basis(s.theta(t), s.phi(t)); }

/// Phase-gate Hamiltonian in the adiabatic representation, rows/columns
/// (D0, D1, B+, B-), entries -i <E_m|dE_n/dt> e^{i C (E_m - E_n)}.
inline Operator4 build_adiabatic_h(const Schedule& s, double t, double C) {
  const double th = s.theta(t);
  const double thd = s.theta_dot(t);
  const double phd = s.phi_dot();
  const double sin2 = std::sin(th) * std::sin(th);
  const double cos2 = std::cos(th) * std::cos(th);
  const Complex x = Complex(thd, 0.5 * phd * std::sin(2.0 * th)) / std::sqrt(2.0);
  const Complex bb = -0.5 * phd * cos2;

  Operator4 h = Operator4::Zero();
  h(1, 1) = -phd * sin2;
  h(1, 2) = x * std::polar(1.0, -C);
  h(2, 1) = std::conj(h(1, 2));
  h(1, 3) = x * std::polar(1.0, C);
  h(3, 1) = std::conj(h(1, 3));
  h(2, 2) = bb;
  h(3, 3) = bb;
  h(2, 3) = bb * std::polar(1.0, 2.0 * C);
  h(3, 2) = std::conj(h(2, 3));
  return h;
}

/// Phase-gate propagation in the adiabatic frame. Each step uses C at the
/// step midpoint, taken as the mean of C at the two step boundaries.
/// The returned U acts on amplitudes in the (D0, D1, B+, B-) basis.
inline PropagationResult propagate_adiabatic(const Schedule& s, const std::vector<ControlSegment>& segments,
                                             const StepPolicy& policy) {
  policy.validate();
  PropagationResult res;
  res.frame = Frame::Adiabatic;
  Operator4 u = Operator4::Identity();
  if (segments.empty()) {
    res.U = u;
    return res;
  }
  s.validate();
  check_tiling(segments, s.T);

  double c_left = 0.0;
  for (const auto& seg : segments) {
    const double len = seg.length();
    const long n = policy.steps_for(len, seg.value);
    const double step = len / static_cast<double>(n);
    const double rate = 1.0 + seg.value;
    const double c_start = c_left;
    for (long k = 0; k < n; ++k) {
      const double c_right = c_start + rate * step * static_cast<double>(k + 1);
      const double tm = seg.t_start + (static_cast<double>(k) + 0.5) * step;
      u = matexp_hermitian(build_adiabatic_h(s, tm, 0.5 * (c_left + c_right)), step) * u;
      c_left = c_right;
    }
    c_left = c_start + rate * len;
    res.steps_taken += n;
  }
  res.unitarity_defect = unitarity_defect(u);
  res.U = u;
  return res;
}

}  // namespace hqc
