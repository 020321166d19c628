#include "hqc/qcore.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hqc;
using Catch::Approx;

TEST_CASE("matexp_hermitian closed forms", "[qcore]") {
  SECTION("zero generator gives identity") {
    for (double tau : {0.0, 1.0, -3.7, 1e6}) {
      REQUIRE(max_abs(matexp_hermitian(Operator4::Zero().eval(), tau) - Operator4::Identity()) == 0.0);
    }
  }
  SECTION("diag(1,-1) at tau = pi is -I") {
    Operator<2> h = pauli::z();
    REQUIRE(max_abs(matexp_hermitian(h, kPi) + Operator<2>::Identity()) < 1e-15);
  }
  SECTION("embedded Pauli X at tau = pi/2 matches cos/sin form and the Taylor oracle") {
    Operator4 h = Operator4::Zero();
    h(1, 2) = h(2, 1) = 1.0;
    const double tau = kPi / 2;
    const Operator4 u = matexp_hermitian(h, tau);
    Operator4 expected = Operator4::Identity();
    expected(1, 1) = expected(2, 2) = std::cos(tau);
    expected(1, 2) = expected(2, 1) = -kI * std::sin(tau);
    REQUIRE(max_abs(u - expected) < 1e-15);
    REQUIRE(max_abs(DynOperator(u) - testing::taylor_expm(h, tau)) < 1e-10);
  }
}

TEST_CASE("matexp_hermitian rejects non-Hermitian input", "[qcore]") {
  Operator4 h = Operator4::Zero();
  h(0, 1) = 1.0;
  REQUIRE_THROWS_WITH(matexp_hermitian(h, 1.0), Catch::Matchers::ContainsSubstring("not Hermitian"));
  REQUIRE_THROWS_AS(spectral_gap(h), std::invalid_argument);
}

TEST_CASE("matexp_hermitian properties over random generators", "[qcore][property]") {
  UniformStream rng(101);
  double worst_unitary = 0.0, worst_semigroup = 0.0, worst_oracle = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Operator4 h = testing::random_hermitian4(rng, 2.0);
    const double t1 = 4.0 * rng.next() - 2.0;
    const double t2 = 4.0 * rng.next() - 2.0;
    const Operator4 u1 = matexp_hermitian(h, t1);
    worst_unitary = std::max(worst_unitary, unitarity_defect(u1));
    worst_semigroup = std::max(worst_semigroup, max_abs(matexp_hermitian(h, t1 + t2) - u1 * matexp_hermitian(h, t2)));
    if (i % 10 == 0) worst_oracle = std::max(worst_oracle, max_abs(DynOperator(u1) - testing::taylor_expm(h, t1)));
  }
  CHECK(worst_unitary <= 1e-10);
  CHECK(worst_semigroup <= 1e-10);
  CHECK(worst_oracle <= 1e-10);
}

TEST_CASE("tensor_product", "[qcore]") {
  const Operator<2> id = pauli::identity();
  REQUIRE(tensor_product(id, id) == Operator4::Identity());

  const Operator4 zi = tensor_product(pauli::z(), id);
  Operator4 expected = Operator4::Zero();
  expected.diagonal() << 1, 1, -1, -1;
  REQUIRE(zi == expected);

  // (sx (x) sy)(0,3) = sx(0,1) * sy(0,1) = -i
  const Operator4 xy = tensor_product(pauli::x(), pauli::y());
  REQUIRE(xy(0, 3) == -kI);

  SECTION("associativity") {
    UniformStream rng(5);
    Operator<2> a, b, c;
    for (auto* m : {&a, &b, &c})
      for (int i = 0; i < 4; ++i) (*m)(i / 2, i % 2) = Complex(rng.next(), rng.next());
    const auto left = tensor_product(tensor_product(a, b), c);
    const auto right = tensor_product(a, tensor_product(b, c));
    REQUIRE(max_abs(left - right) <= 1e-15);
  }

  SECTION("dimension overflow is rejected") {
    const DynOperator big = DynOperator::Identity(17, 17);
    REQUIRE_THROWS_AS(tensor_product(big, big), std::invalid_argument);
    REQUIRE(tensor_product(DynOperator::Identity(16, 16), DynOperator::Identity(16, 16)).rows() == 256);
  }
}

TEST_CASE("dagger, inner, spectral_gap", "[qcore]") {
  State4 e0 = State4::Unit(0);
  REQUIRE(inner(e0, e0) == Complex(1.0, 0.0));

  State4 u = State4::Zero(), v = State4::Zero();
  u(1) = kI;
  v(1) = 1.0;
  // conjugate-linear in the first slot
  REQUIRE(inner(u, v) == -kI);
  REQUIRE_THROWS_AS(inner(DynState(DynState::Zero(4)), DynState(DynState::Zero(16))), std::invalid_argument);

  Operator<2> d = Operator<2>::Zero();
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const auto ev = spectral_gap(d);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == Approx(1.0));
  CHECK(ev[1] == Approx(3.0));

  Operator<2> y = pauli::y();
  REQUIRE(dagger(y) == y);
  REQUIRE(dagger(pauli::x() * kI) == -kI * pauli::x());
}
