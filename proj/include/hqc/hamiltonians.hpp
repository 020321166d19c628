#pragma once

// Time-dependent Hamiltonians of the holonomic gates, their dark states,
// and the physical four-qubit Hamiltonian with its projection onto the
// decoherence-free subspace (DFS).
//
// Conventions:
//  * logical basis order (|0>, |1>, |2>, |3>); |0>,|1> carry the qubit,
//    |2>,|3> are ancillas.
//  * two logical qubits: row-major 4 (x) 4, |i,j> -> index 4*i + j.
//  * physical kets |q1 q2 q3 q4>: q1 is the most significant bit.

#include "hqc/qcore.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hqc {

enum class GateKind { Phase, XGate, CPhase, PhysicalFour };

inline std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Phase: return "phase";
    case GateKind::XGate: return "xgate";
    case GateKind::CPhase: return "cphase";
    case GateKind::PhysicalFour: return "physical";
  }
  return "?";
}

inline GateKind gate_kind_from_string(std::string_view s) {
  if (s == "phase") return GateKind::Phase;
  if (s == "xgate") return GateKind::XGate;
  if (s == "cphase") return GateKind::CPhase;
  if (s == "physical") return GateKind::PhysicalFour;
  throw std::invalid_argument("unknown gate kind '" + std::string(s) + "'");
}

/// Cyclic schedule theta(t) = a sin(2 pi t / T), phi(t) = 2 pi t / T.
struct Schedule {
  double a = 0.0;
  double T = 1.0;

  Schedule() = default;
  Schedule(double amplitude, double period) : a(amplitude), T(period) { validate(); }

  void validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("Schedule: T must be positive and finite");
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("Schedule: a must be non-negative and finite");
  }

  void check_time(double t) const {
    // one ulp-scale slack so that t = T computed as a sum of steps is accepted
    const double slack = 1e-12 * T;
    if (!(t >= -slack && t <= T + slack)) {
      throw std::domain_error("Schedule: time " + std::to_string(t) + " outside [0, T]");
    }
  }

  double theta(double t) const {
    check_time(t);
    return a * std::sin(2.0 * kPi * t / T);
  }
  double phi(double t) const {
    check_time(t);
    return 2.0 * kPi * t / T;
  }
  double theta_dot(double t) const {
    check_time(t);
    return a * (2.0 * kPi / T) * std::cos(2.0 * kPi * t / T);
  }
  double phi_dot() const { return 2.0 * kPi / T; }
};

struct Couplings {
  double J12 = 1.0;
  double J13 = 1.0;
};

struct GateSpec {
  GateKind kind = GateKind::Phase;
  Schedule schedule;
  Couplings couplings;  // PhysicalFour only

  void validate() const {
    schedule.validate();
    if (kind == GateKind::PhysicalFour &&
        !(couplings.J12 * couplings.J12 + couplings.J13 * couplings.J13 > 0.0)) {
      throw std::invalid_argument("GateSpec: PhysicalFour needs J12^2 + J13^2 > 0");
    }
  }

  int dim() const { return kind == GateKind::Phase || kind == GateKind::XGate ? 4 : 16; }
};

namespace logical {
inline constexpr int k0 = 0;
inline constexpr int k1 = 1;
inline constexpr int k2 = 2;
inline constexpr int k3 = 3;

inline constexpr int pair(int i, int j) { return 4 * i + j; }

inline State4 ket(int i) {
  State4 v = State4::Zero();
  v(i) = 1.0;
  return v;
}
inline State4 plus() { return (ket(k0) + ket(k1)) / std::sqrt(2.0); }
inline State4 minus() { return (ket(k0) - ket(k1)) / std::sqrt(2.0); }

inline State16 ket(int i, int j) {
  State16 v = State16::Zero();
  v(pair(i, j)) = 1.0;
  return v;
}
}  // namespace logical

namespace detail {

// sin(theta) (|b><2| + |2><b|) + cos(theta) (e^{-i phi} |3><2| + e^{i phi} |2><3|)
// with |b> the bright partner (|1> for the phase gate, |-> for the X gate).
inline Operator4 lambda_hamiltonian(const State4& partner, double theta, double phi) {
  const State4 two = logical::ket(logical::k2);
  const State4 three = logical::ket(logical::k3);
  Operator4 h = std::sin(theta) * (partner * two.adjoint() + two * partner.adjoint());
  h += std::cos(theta) * (std::polar(1.0, -phi) * three * two.adjoint() +
                          std::polar(1.0, phi) * two * three.adjoint());
  return h;
}

}  // namespace detail

/// Phase-gate Hamiltonian in the logical DFS basis at explicit angles.
inline Operator4 h1_at(double theta, double phi) {
  return detail::lambda_hamiltonian(logical::ket(logical::k1), theta, phi);
}

inline Operator4 build_h1(const Schedule& s, double t) { return h1_at(s.theta(t), s.phi(t)); }

/// X-gate Hamiltonian: same structure with |1> replaced by |->.
inline Operator4 build_h2(const Schedule& s, double t) {
  return detail::lambda_hamiltonian(logical::minus(), s.theta(t), s.phi(t));
}

/// C-Phase Hamiltonian on two logical qubits; acts only on
/// span{|1,1>, |2,1>, |3,1>}.
inline Operator16 build_h3(const Schedule& s, double t) {
  using logical::pair;
  const double th = s.theta(t);
  const double ph = s.phi(t);
  const int b = pair(1, 1), c = pair(2, 1), d = pair(3, 1);
  Operator16 h = Operator16::Zero();
  h(b, c) = h(c, b) = std::sin(th);
  h(d, c) = std::cos(th) * std::polar(1.0, -ph);
  h(c, d) = std::cos(th) * std::polar(1.0, ph);
  return h;
}

namespace physical {

inline constexpr int kQubits = 4;

/// Computational index of |q1 q2 q3 q4>; q1 is the most significant bit.
inline constexpr int index(int q1, int q2, int q3, int q4) { return (q1 << 3) | (q2 << 2) | (q3 << 1) | q4; }

/// XY exchange (sx sx + sy sy)/2 between qubits l, m (1-based).
inline Operator16 r_x(int l, int m) {
  using pauli::on_site;
  return 0.5 * (on_site<kQubits>(pauli::x(), l - 1) * on_site<kQubits>(pauli::x(), m - 1) +
                on_site<kQubits>(pauli::y(), l - 1) * on_site<kQubits>(pauli::y(), m - 1));
}

/// Dzyaloshinskii-Moriya term (sx sy - sy sx)/2 between qubits l, m (1-based).
inline Operator16 r_y(int l, int m) {
  using pauli::on_site;
  return 0.5 * (on_site<kQubits>(pauli::x(), l - 1) * on_site<kQubits>(pauli::y(), m - 1) -
                on_site<kQubits>(pauli::y(), l - 1) * on_site<kQubits>(pauli::x(), m - 1));
}

/// Collective Z = sum_i sz_i.
inline Operator16 total_z() {
  Operator16 z = Operator16::Zero();
  for (int q = 0; q < kQubits; ++q) z += pauli::on_site<kQubits>(pauli::z(), q);
  return z;
}

}  // namespace physical

/// H = J13 R13^x + J12 [cos(phi) R12^x - sin(phi) R12^y] on four physical qubits.
inline Operator16 build_physical(const GateSpec& spec, double varphi) {
  if (spec.kind != GateKind::PhysicalFour) {
    throw std::invalid_argument("build_physical: spec kind must be PhysicalFour");
  }
  spec.validate();
  const auto& j = spec.couplings;
  return j.J13 * physical::r_x(1, 3) +
         j.J12 * (std::cos(varphi) * physical::r_x(1, 2) - std::sin(varphi) * physical::r_y(1, 2));
}

/// Effective logical angle and energy scale of the physical Hamiltonian.
inline double physical_theta(const Couplings& c) { return std::atan2(c.J13, c.J12); }
inline double physical_scale(const Couplings& c) { return std::hypot(c.J12, c.J13); }

/// Logical labels |0>..|3> as computational indices of the 16-dim space.
struct DfsBasis {
  std::array<int, 4> index{};

  static DfsBasis standard() {
    using physical::index;
    // |0>=|0001>, |1>=|0010>, |2>=|1000>, |3>=|0100>
    return DfsBasis{{index(0, 0, 0, 1), index(0, 0, 1, 0), index(1, 0, 0, 0), index(0, 1, 0, 0)}};
  }

  bool contains(int k) const {
    for (int i : index)
      if (i == k) return true;
    return false;
  }
};

struct DfsProjection {
  Operator4 block;
  /// max |<x|H|b_j>| over computational states x outside the DFS span.
  double leakage = 0.0;
};

inline DfsProjection project_dfs(const Operator16& h, const DfsBasis& basis = DfsBasis::standard()) {
  DfsProjection out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.block(r, c) = h(basis.index[r], basis.index[c]);
  for (int x = 0; x < 16; ++x) {
    if (basis.contains(x)) continue;
    for (int b : basis.index) out.leakage = std::max(out.leakage, std::abs(h(x, b)));
  }
  return out;
}

/// Analytic dark states, normalized, for the logical gate kinds.
/// The last entry is the state that carries the Berry phase.
inline std::vector<DynState> dark_states(const GateSpec& spec, double t) {
  using namespace logical;
  const double th = spec.schedule.theta(t);
  const double ph = spec.schedule.phi(t);
  const Complex tail = -std::polar(1.0, -ph) * std::sin(th);
  switch (spec.kind) {
    case GateKind::Phase:
      return {ket(k0), State4(std::cos(th) * ket(k1) + tail * ket(k3))};
    case GateKind::XGate:
      return {plus(), State4(std::cos(th) * minus() + tail * ket(k3))};
    case GateKind::CPhase:
      return {ket(0, 0), ket(0, 1), ket(1, 0), State16(std::cos(th) * ket(1, 1) + tail * ket(3, 1))};
    case GateKind::PhysicalFour:
      break;
  }
  throw std::invalid_argument("dark_states: defined only for logical gate kinds");
}

/// The dark state whose Berry phase defines the gate.
inline DynState geometric_dark_state(const GateSpec& spec, double t) { return dark_states(spec, t).back(); }

/// Logical Hamiltonian of a gate kind at time t (dynamic size).
inline DynOperator build_logical(const GateSpec& spec, double t) {
  switch (spec.kind) {
    case GateKind::Phase: return build_h1(spec.schedule, t);
    case GateKind::XGate: return build_h2(spec.schedule, t);
    case GateKind::CPhase: return build_h3(spec.schedule, t);
    case GateKind::PhysicalFour: return build_physical(spec, spec.schedule.phi(t));
  }
  throw std::logic_error("build_logical: unreachable");
}

}  // namespace hqc
