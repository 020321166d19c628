#include "hqc/holonomy.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hqc;
using Catch::Approx;

namespace {

// Power series sum (-x^2/4)^k / (k!)^2; accurate for moderate |x|.
double j0_series(double x) {
  const double q = -x * x / 4.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("bessel_j0", "[holonomy]") {
  CHECK(bessel_j0(0.0) == Approx(1.0).margin(1e-15));
  CHECK(std::abs(bessel_j0(2.404825557695773)) <= 1e-12);
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double x = 0.1 * i;
    worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
    REQUIRE(bessel_j0(-x) == bessel_j0(x));
  }
  CHECK(worst <= 1e-12);
  for (double x : {0.3, 1.7, 4.4, 9.0}) CHECK(std::abs(bessel_j0(x) - j0_series(x)) <= 1e-11);
  REQUIRE_THROWS_AS(bessel_j0(50.5), std::domain_error);
  REQUIRE_THROWS_AS(bessel_j0(std::nan("")), std::domain_error);
}

TEST_CASE("berry_closed_form", "[holonomy]") {
  CHECK(std::abs(berry_closed_form(0.0)) <= 1e-14);
  CHECK(std::abs(berry_closed_form(1.2024) - kPi) <= 1e-3);
  CHECK(std::abs(berry_closed_form(0.7605) - kPi / 2) <= 1e-3);
  REQUIRE_THROWS_AS(berry_closed_form(-0.1), std::invalid_argument);
}

TEST_CASE("berry_numeric agrees with the closed form", "[holonomy]") {
  double worst = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double a = 0.1 * i;
    worst = std::max(worst, std::abs(berry_numeric(Schedule(a, 1.0), 2000) - berry_closed_form(a)));
  }
  CHECK(worst <= 1e-8);
  CHECK(berry_numeric(Schedule(0.9, 1.0), 2000) == Approx(berry_numeric(Schedule(0.9, 50.0), 2000)).epsilon(1e-13));
  REQUIRE_THROWS_AS(berry_numeric(Schedule(0.9, 1.0), 99), std::invalid_argument);
}

TEST_CASE("wrap_angle", "[holonomy]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == Approx(kPi));
  CHECK(wrap_angle(-kPi) == Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == Approx(-kPi / 2));
  CHECK(wrap_angle(7.0) == Approx(7.0 - 2 * kPi));
}

TEST_CASE("extract_phase", "[holonomy]") {
  const State4 d = State4::Unit(1);
  Operator4 u = Operator4::Identity();
  auto m = extract_phase(u, d);
  CHECK(m.gamma == 0.0);
  CHECK(m.overlap_abs == 1.0);

  u(1, 1) = std::polar(1.0, kPi / 2);
  m = extract_phase(u, d);
  CHECK(m.gamma == Approx(kPi / 2));
  CHECK(m.overlap_abs == Approx(1.0));

  u(1, 1) = 0.0;
  u(1, 2) = u(2, 1) = 1.0;
  u(2, 2) = 0.0;
  m = extract_phase(u, d);
  CHECK_FALSE(m.defined);
  CHECK(m.overlap_abs == 0.0);

  REQUIRE_THROWS_AS(extract_phase(Operator4::Identity(), State4(2.0 * d)), std::invalid_argument);
}

TEST_CASE("quality_factor", "[holonomy]") {
  CHECK(quality_factor(1.5, 1.5, 1.0) == 1.0);
  CHECK(quality_factor(kPi / 2, 0.0, 1.0) == Approx(0.5));
  CHECK(quality_factor(0.0, kPi, 1.0) == Approx(0.0).margin(1e-15));
  CHECK(quality_factor(0.3, 0.3, 0.25) == Approx(0.25));
  // differences across the branch cut wrap
  CHECK(quality_factor(kPi - 0.1, -kPi + 0.1, 1.0) == Approx(1.0 - 0.2 / kPi));
  REQUIRE_THROWS_AS(quality_factor(std::nan(""), 0.0, 1.0), std::invalid_argument);

  UniformStream rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double f = quality_factor(20 * rng.next() - 10, 20 * rng.next() - 10, rng.next());
    REQUIRE(f >= 0.0);
    REQUIRE(f <= 1.0);
  }
}

TEST_CASE("gate_matrix", "[holonomy]") {
  const DynOperator p = gate_matrix(GateKind::Phase, kPi / 2);
  CHECK(p(0, 0) == Complex(1.0, 0.0));
  CHECK(std::abs(p(1, 1) - kI) <= 1e-15);

  const DynOperator c = gate_matrix(GateKind::CPhase, kPi);
  CHECK(c.rows() == 4);
  CHECK(std::abs(c(3, 3) + 1.0) <= 1e-15);

  const DynOperator x = gate_matrix(GateKind::XGate, kPi);
  // e^{i pi/2} (-i sigma_x) = sigma_x
  CHECK(std::abs(x(0, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(x(0, 0)) <= 1e-15);
  for (double g : {0.0, 0.4, 2.9}) CHECK(unitarity_defect(gate_matrix(GateKind::XGate, g)) <= 1e-15);
  REQUIRE_THROWS_AS(gate_matrix(GateKind::PhysicalFour, 1.0), std::invalid_argument);
}

TEST_CASE("find_a_for_phase", "[holonomy]") {
  CHECK(find_a_for_phase(0.0) == 0.0);
  CHECK(find_a_for_phase(kPi / 2) == Approx(0.7605).margin(1e-3));
  CHECK(find_a_for_phase(kPi) == Approx(1.2024).margin(1e-3));
  for (double g : {0.2, 1.0, 2.5, 3.5}) CHECK(berry_closed_form(find_a_for_phase(g)) == Approx(g).margin(1e-10));
  REQUIRE_THROWS_AS(find_a_for_phase(-0.1), std::domain_error);
  REQUIRE_THROWS_WITH(find_a_for_phase(5.0), Catch::Matchers::ContainsSubstring("reachable range"));
}

TEST_CASE("evaluate on ideal propagators", "[holonomy]") {
  const GateSpec spec{GateKind::Phase, Schedule(0.7605, 10.0), {}};
  PropagationResult prop;
  const double gamma = berry_closed_form(0.7605);
  Operator4 u = Operator4::Identity();
  u(1, 1) = std::polar(1.0, gamma);
  prop.U = u;
  const auto r = evaluate(spec, prop);
  CHECK(std::abs(r.f - 1.0) <= 1e-6);
  CHECK(r.gamma_measured == Approx(gamma));

  prop.frame = Frame::Adiabatic;
  CHECK(std::abs(evaluate(spec, prop).f - 1.0) <= 1e-6);

  const DynOperator block = logical_block(GateKind::Phase, prop.U);
  CHECK(max_abs(block - gate_matrix(GateKind::Phase, gamma)) <= 1e-15);
}
