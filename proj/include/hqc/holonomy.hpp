#pragma once

// Berry phases, gate matrices and the gate quality factor
//   f = (1 - |dgamma| / pi) * |<D(0)|U(T)|D(0)>|.

#include "hqc/hamiltonians.hpp"
#include "hqc/propagation.hpp"
#include "hqc/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hqc {

namespace detail {

/// 16-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
struct GaussLegendre16 {
  static constexpr int kN = 16;
  std::array<double, kN> nodes{};
  std::array<double, kN> weights{};

  GaussLegendre16() {
    for (int i = 0; i < kN; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (kN + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kN; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kN * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  static const GaussLegendre16& get() {
    static const GaussLegendre16 rule;
    return rule;
  }
};

}  // namespace detail

inline constexpr double kBesselMaxArg = 50.0;

/// J0(x) = (1/pi) int_0^pi cos(x sin tau) dtau by composite 16-point
/// Gauss-Legendre. Four panels (64 nodes) for |x| <= 6, more for larger |x|
/// so each panel spans a bounded number of oscillations.
inline double bessel_j0(double x) {
  if (!(std::abs(x) <= kBesselMaxArg)) {
    std::ostringstream msg;
    msg << "bessel_j0: |x| = " << std::abs(x) << " exceeds " << kBesselMaxArg;
    throw std::domain_error(msg.str());
  }
  const auto& gl = detail::GaussLegendre16::get();
  const int panels = std::abs(x) <= 6.0 ? 4 : 4 + static_cast<int>(std::ceil(std::abs(x) / 2.0));
  const double width = kPi / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (int i = 0; i < gl.kN; ++i) {
      const double tau = mid + 0.5 * width * gl.nodes[i];
      sum += gl.weights[i] * std::cos(x * std::sin(tau));
    }
  }
  return sum * 0.5 * width / kPi;
}

/// gamma_1 = pi [1 - J0(2a)].
inline double berry_closed_form(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("berry_closed_form: a must be >= 0");
  return kPi * (1.0 - bessel_j0(2.0 * a));
}

/// int_0^T sin^2(theta(s)) dphi/ds ds by the midpoint rule, which converges
/// geometrically for this smooth periodic integrand.
inline double berry_numeric(const Schedule& s, int n_points) {
  if (n_points < 100) throw std::invalid_argument("berry_numeric: n_points must be >= 100");
  s.validate();
  const double h = s.T / n_points;
  double sum = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const double th = s.theta((k + 0.5) * h);
    sum += std::sin(th) * std::sin(th);
  }
  return sum * h * s.phi_dot();
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct PhaseMeasurement {
  double gamma = 0.0;  // principal arg of <d|U|d>
  double overlap_abs = 0.0;
  bool defined = true;  // false when the overlap is too small to carry a phase
};

inline constexpr double kMinOverlap = 1e-12;

template <class A, class B>
PhaseMeasurement extract_phase(const Eigen::MatrixBase<A>& U, const Eigen::MatrixBase<B>& d) {
  if (U.rows() != d.size() || U.cols() != d.size()) throw std::invalid_argument("extract_phase: dimension mismatch");
  if (std::abs(d.norm() - 1.0) > 1e-9) throw std::invalid_argument("extract_phase: state is not normalized");
  const Complex amp = d.dot(U * d);
  PhaseMeasurement m;
  m.overlap_abs = std::abs(amp);
  m.defined = m.overlap_abs >= kMinOverlap;
  m.gamma = m.defined ? std::arg(amp) : 0.0;
  return m;
}

/// (1 - |wrap(gamma_measured - gamma_ideal)| / pi) * overlap_abs, in [0, 1].
inline double quality_factor(double gamma_ideal, double gamma_measured, double overlap_abs) {
  if (!std::isfinite(gamma_ideal) || !std::isfinite(gamma_measured) || !std::isfinite(overlap_abs)) {
    throw std::invalid_argument("quality_factor: non-finite input");
  }
  const double dgamma = wrap_angle(gamma_measured - gamma_ideal);
  const double f = (1.0 - std::abs(dgamma) / kPi) * overlap_abs;
  return std::clamp(f, 0.0, 1.0);
}

struct HolonomyResult {
  double gamma_ideal = 0.0;
  double gamma_measured = 0.0;
  double overlap_abs = 0.0;
  double f = 0.0;
  bool phase_defined = true;
};

/// Score a propagation against the closed-form Berry phase of its gate.
inline HolonomyResult evaluate(const GateSpec& spec, const PropagationResult& prop) {
  HolonomyResult r;
  r.gamma_ideal = berry_closed_form(spec.schedule.a);
  PhaseMeasurement m;
  if (prop.frame == Frame::Adiabatic) {
    // D1 is the second adiabatic basis vector
    m = extract_phase(prop.U, State4::Unit(1));
  } else {
    m = extract_phase(prop.U, geometric_dark_state(spec, 0.0));
  }
  r.gamma_measured = m.gamma;
  r.overlap_abs = m.overlap_abs;
  r.phase_defined = m.defined;
  r.f = quality_factor(r.gamma_ideal, r.gamma_measured, r.overlap_abs);
  return r;
}

/// Ideal logical gate for Berry phase gamma:
///   Phase  -> diag(1, e^{i gamma})
///   XGate  -> e^{i gamma/2} [[cos gamma/2, -i sin gamma/2], [-i sin gamma/2, cos gamma/2]]
///   CPhase -> diag(1, 1, 1, e^{i gamma})
inline DynOperator gate_matrix(GateKind kind, double gamma) {
  switch (kind) {
    case GateKind::Phase: {
      DynOperator g = DynOperator::Identity(2, 2);
      g(1, 1) = std::polar(1.0, gamma);
      return g;
    }
    case GateKind::XGate: {
      const Complex global = std::polar(1.0, gamma / 2.0);
      const double c = std::cos(gamma / 2.0), s = std::sin(gamma / 2.0);
      DynOperator g(2, 2);
      g << c, -kI * s, -kI * s, c;
      return global * g;
    }
    case GateKind::CPhase: {
      DynOperator g = DynOperator::Identity(4, 4);
      g(3, 3) = std::polar(1.0, gamma);
      return g;
    }
    case GateKind::PhysicalFour:
      break;
  }
  throw std::invalid_argument("gate_matrix: no logical gate for PhysicalFour");
}

/// Computational-subspace indices of the logical gate inside the propagator.
inline std::vector<int> logical_indices(GateKind kind) {
  switch (kind) {
    case GateKind::Phase:
    case GateKind::XGate: return {logical::k0, logical::k1};
    case GateKind::CPhase: return {logical::pair(0, 0), logical::pair(0, 1), logical::pair(1, 0), logical::pair(1, 1)};
    case GateKind::PhysicalFour: break;
  }
  throw std::invalid_argument("logical_indices: no logical gate for PhysicalFour");
}

/// The propagator restricted to the logical computational subspace.
inline DynOperator logical_block(GateKind kind, const DynOperator& U) {
  const auto idx = logical_indices(kind);
  const auto n = static_cast<Eigen::Index>(idx.size());
  DynOperator g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = U(idx[r], idx[c]);
  return g;
}

/// First zero of J1, where J0 attains its global minimum.
inline constexpr double kJ1FirstZero = 3.8317059702075123156;

/// Smallest a >= 0 with pi [1 - J0(2a)] = gamma_target, by bisection.
inline double find_a_for_phase(double gamma_target) {
  const double j0_min = bessel_j0(kJ1FirstZero);
  const double gamma_max = kPi * (1.0 - j0_min);
  if (!(gamma_target >= 0.0 && gamma_target <= gamma_max)) {
    std::ostringstream msg;
    msg << "find_a_for_phase: target " << gamma_target << " outside reachable range [0, " << gamma_max << "]";
    throw std::domain_error(msg.str());
  }
  const double j0_target = 1.0 - gamma_target / kPi;
  double lo = 0.0, hi = kJ1FirstZero / 2.0;
  // J0(2a) decreases monotonically on [0, hi]
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j0(2.0 * mid) > j0_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return gamma_target == 0.0 ? 0.0 : 0.5 * (lo + hi);
}

}  // namespace hqc
