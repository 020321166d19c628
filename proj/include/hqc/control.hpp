#pragma once

// Control functions c(t) that rescale the Hamiltonian to [1 + c(t)] H(t):
// square pulse trains (positive or sign-alternating) and delta kicks,
// plus the accumulated integral C(t) = int_0^t [1 + c(s)] ds.

#include "hqc/qcore.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hqc {

enum class ControlKind { NoControl, PositiveSquare, ZeroEnergyAlternating, DeltaKickPositive, DeltaKickAlternating };

inline std::string_view to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::NoControl: return "none";
    case ControlKind::PositiveSquare: return "positive_square";
    case ControlKind::ZeroEnergyAlternating: return "zero_energy_alternating";
    case ControlKind::DeltaKickPositive: return "delta_kick_positive";
    case ControlKind::DeltaKickAlternating: return "delta_kick_alternating";
  }
  return "?";
}

inline ControlKind control_kind_from_string(std::string_view s) {
  for (auto k : {ControlKind::NoControl, ControlKind::PositiveSquare, ControlKind::ZeroEnergyAlternating,
                 ControlKind::DeltaKickPositive, ControlKind::DeltaKickAlternating}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown control kind '" + std::string(s) + "'");
}

inline bool is_kick_kind(ControlKind k) {
  return k == ControlKind::DeltaKickPositive || k == ControlKind::DeltaKickAlternating;
}

// Seeding. Every random stream is an mt19937_64 seeded through SplitMix64,
// and uniforms are built from the top 53 bits, so draws are identical on
// every standard library.

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64; seed = splitmix64 chain over (master_seed, grid_index, realization); "
    "uniform r = (draw >> 11) * 2^-53";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for realization k at grid point j.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t j, std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(master) ^ (j + 1)) ^ ((k + 1) * 0xD1B54A32D192ED03ULL));
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  /// Uniform double in [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct PulseTrain {
  ControlKind kind = ControlKind::NoControl;
  double J = 0.0;   // pulse amplitude
  double dt = 0.0;  // half-period / kick interval
  double p = 0.0;   // randomness in [0, 2]
  std::uint64_t seed = 0;

  void validate() const {
    if (!(J >= 0.0) || !std::isfinite(J)) throw std::invalid_argument("PulseTrain: J must be finite and >= 0");
    if (!(p >= 0.0 && p <= 2.0)) throw std::invalid_argument("PulseTrain: p must lie in [0, 2]");
    if (kind != ControlKind::NoControl && !(dt > 0.0 && std::isfinite(dt))) {
      throw std::invalid_argument("PulseTrain: dt must be positive");
    }
  }
};

/// c(t) = value on [t_start, t_end).
struct ControlSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  double value = 0.0;

  double length() const { return t_end - t_start; }
  bool operator==(const ControlSegment&) const = default;
};

struct KickSchedule {
  std::vector<double> times;  // strictly ascending, inside (0, T)
  std::vector<int> signs;     // +1 / -1
  double area = kPi;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

namespace detail {

inline double pulse_amplitude(double J, double p, UniformStream& rng) { return J * (1.0 - p * (0.5 - rng.next())); }

/// Number of pieces of length dt that cover [0, T]; the last may be short.
inline std::size_t piece_count(double T, double dt) {
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace detail

/// Piecewise-constant c(t) tiling [0, T]. Segment k spans [k dt, (k+1) dt];
/// when dt does not divide T the final segment is truncated at T.
/// Delta-kick kinds yield a single zero segment (kicks are separate events).
inline std::vector<ControlSegment> generate_segments(const PulseTrain& train, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("generate_segments: T must be positive");
  train.validate();
  if (train.kind == ControlKind::NoControl || is_kick_kind(train.kind)) return {{0.0, T, 0.0}};
  if (train.dt >= T) throw std::invalid_argument("generate_segments: dt must be smaller than T");

  const std::size_t n = detail::piece_count(T, train.dt);
  UniformStream rng(train.seed);
  std::vector<ControlSegment> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = static_cast<double>(k) * train.dt;
    const double t1 = k + 1 == n ? T : static_cast<double>(k + 1) * train.dt;
    double value = 0.0;
    if (train.kind == ControlKind::PositiveSquare) {
      if (k % 2 == 0) value = detail::pulse_amplitude(train.J, train.p, rng);
    } else {
      value = detail::pulse_amplitude(train.J, train.p, rng) * (k % 2 == 0 ? 1.0 : -1.0);
    }
    out.push_back({t0, t1, value});
  }
  return out;
}

/// Throws unless the segments tile [0, T] contiguously.
inline void check_tiling(const std::vector<ControlSegment>& segments, double T) {
  if (segments.empty()) throw std::invalid_argument("control segments are empty");
  if (segments.front().t_start != 0.0) throw std::invalid_argument("control segments must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.t_end > s.t_start)) throw std::invalid_argument("control segment with non-positive length");
    if (!std::isfinite(s.value)) throw std::invalid_argument("control segment value is not finite");
    if (i + 1 < segments.size() && segments[i + 1].t_start != s.t_end) {
      throw std::invalid_argument("control segments leave a gap or overlap");
    }
  }
  if (std::abs(segments.back().t_end - T) > 1e-12 * std::max(1.0, T)) {
    throw std::invalid_argument("control segments do not end at T");
  }
}

/// Kick instants on a grid of spacing `interval`, each displaced by
/// jitter * interval * (r - 1/2). jitter in [0, 1) keeps them ordered.
inline KickSchedule make_kicks(ControlKind kind, double T, double interval, std::uint64_t seed,
                               double jitter = 0.0) {
  if (!is_kick_kind(kind)) throw std::invalid_argument("make_kicks: kind must be a delta-kick kind");
  if (!(T > 0.0) || !(interval > 0.0) || interval >= T) {
    throw std::invalid_argument("make_kicks: need 0 < interval < T");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) throw std::invalid_argument("make_kicks: jitter must lie in [0, 1)");

  const std::size_t count = detail::piece_count(T, interval) - 1;
  UniformStream rng(seed);
  KickSchedule ks;
  for (std::size_t i = 1; i <= count; ++i) {
    double tau = static_cast<double>(i) * interval;
    if (jitter > 0.0) tau += jitter * interval * (rng.next() - 0.5);
    if (!(tau > 0.0 && tau < T)) continue;
    ks.times.push_back(tau);
    const int sign = kind == ControlKind::DeltaKickPositive || ks.signs.size() % 2 == 0 ? 1 : -1;
    ks.signs.push_back(sign);
  }
  return ks;
}

/// Kick schedule implied by a pulse train (empty for non-kick kinds).
/// For kick kinds, dt is the kick interval and p/2 the jitter fraction.
inline KickSchedule kicks_for(const PulseTrain& train, double T) {
  if (!is_kick_kind(train.kind)) return {};
  train.validate();
  return make_kicks(train.kind, T, train.dt, train.seed, train.p / 2.0);
}

/// C(t) = int_0^t [1 + c(s)] ds, exact for piecewise-constant c.
/// Kicks strictly before t contribute sign * area each.
inline double integral_C(const std::vector<ControlSegment>& segments, double t, const KickSchedule& kicks = {}) {
  double acc = t;
  for (const auto& s : segments) {
    if (t <= s.t_start) break;
    acc += s.value * (std::min(t, s.t_end) - s.t_start);
  }
  for (std::size_t i = 0; i < kicks.size() && kicks.times[i] < t; ++i) acc += kicks.signs[i] * kicks.area;
  return acc;
}

/// int c dt over the segments plus kick areas.
inline double net_area(const std::vector<ControlSegment>& segments, const KickSchedule& kicks = {}) {
  double acc = 0.0;
  for (const auto& s : segments) acc += s.value * s.length();
  for (int sign : kicks.signs) acc += sign * kicks.area;
  return acc;
}

/// Time average (1/T) int c dt over the tiled interval.
inline double mean_control(const std::vector<ControlSegment>& segments, const KickSchedule& kicks = {}) {
  if (segments.empty()) return 0.0;
  const double span = segments.back().t_end - segments.front().t_start;
  return net_area(segments, kicks) / span;
}

struct Resonance {
  bool is_resonant = false;
  long nearest_n = 0;
};

/// J dt = 2 pi n for a positive integer n, within tol.
inline Resonance resonance_condition(double J, double dt, double tol = 1e-6) {
  if (!(J > 0.0) || !(dt > 0.0)) throw std::invalid_argument("resonance_condition: J and dt must be positive");
  const double turns = J * dt / (2.0 * kPi);
  const long n = std::max(1L, std::lround(turns));
  return {std::abs(J * dt - 2.0 * kPi * static_cast<double>(n)) <= tol, n};
}

}  // namespace hqc
