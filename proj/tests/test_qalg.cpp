#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace pennyflip;
using pftest::diff;
using pftest::mat;

namespace {
const Complex I(0, 1);
}

TEST_CASE("pauli matrices") {
  REQUIRE(diff(pauli(1).mat(), mat(0, 1, 1, 0)) == 0.0);
  REQUIRE(diff(pauli(2).mat(), mat(0, -I, I, 0)) == 0.0);
  REQUIRE(diff(pauli(3).mat(), mat(1, 0, 0, -1)) == 0.0);
  REQUIRE(diff((pauli(2) * pauli(2)).mat(), Mat2::identity()) < 1e-15);
  REQUIRE(diff(identity_op().mat(), Mat2::identity()) == 0.0);
  REQUIRE_THROWS_AS(pauli(0), std::invalid_argument);
  REQUIRE_THROWS_AS(pauli(4), std::invalid_argument);
}

TEST_CASE("unitary constructor rejects bad matrices") {
  REQUIRE_THROWS_AS(UnitaryOp(mat(1, 0, 0, 2)), std::domain_error);
  REQUIRE_THROWS_AS(UnitaryOp(mat(1, 1, 0, 1)), std::domain_error);
  double nan = std::nan("");
  REQUIRE_THROWS_AS(UnitaryOp(mat(nan, 0, 0, 1)), std::domain_error);
}

TEST_CASE("from_axis_angle basics") {
  SECTION("zero rotation is the identity") {
    UnitaryOp u = from_axis_angle({0, 0, {0, 0, 1}});
    REQUIRE(diff(u.mat(), Mat2::identity()) < 1e-15);
  }
  SECTION("pi rotation about x gives i*sigma1") {
    UnitaryOp u = from_axis_angle({0, kPi, {1, 0, 0}});
    REQUIRE(diff(u.mat(), mat(0, I, I, 0)) < 1e-15);
  }
  SECTION("Hadamard from its axis-angle parameters") {
    double s = 1 / std::sqrt(2.0);
    UnitaryOp u = from_axis_angle({-kPi / 2, kPi, {s, 0, s}});
    REQUIRE(diff(u.mat(), hadamard().mat()) < 1e-12);
  }
  SECTION("non-unit axis is rejected") {
    REQUIRE_THROWS_AS(from_axis_angle({0, 1.0, {1, 1, 0}}), std::domain_error);
  }
}

TEST_CASE("to_axis_angle canonical values") {
  SECTION("identity") {
    AxisAngle p = to_axis_angle(identity_op());
    REQUIRE(p.delta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(p.theta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(p.axis.z == Catch::Approx(1.0));
  }
  SECTION("Hadamard") {
    AxisAngle p = to_axis_angle(hadamard());
    REQUIRE(p.delta == Catch::Approx(3 * kPi / 2).margin(1e-12));
    REQUIRE(p.theta == Catch::Approx(kPi).margin(1e-12));
    REQUIRE(p.axis.x == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-12));
    REQUIRE(p.axis.y == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(p.axis.z == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-12));
  }
}

TEST_CASE("axis-angle round-trip on random unitaries") {
  std::mt19937_64 rng(42);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    UnitaryOp u = random_unitary(rng);
    AxisAngle p = to_axis_angle(u);
    REQUIRE(p.theta >= 0.0);
    REQUIRE(p.theta < kTau);
    REQUIRE(p.delta >= 0.0);
    REQUIRE(p.delta < kTau);
    REQUIRE(std::abs(p.axis.norm() - 1.0) < kEpsUnit);
    worst = std::max(worst, diff(from_axis_angle(p).mat(), u.mat()));
  }
  REQUIRE(worst < kEpsUnit);
}

TEST_CASE("composition law equals the matrix product") {
  SECTION("x-pi squared is a pure phase") {
    AxisAngle x_pi{0, kPi, {1, 0, 0}};
    AxisAngle c = compose_axis_angle(x_pi, x_pi);
    REQUIRE(c.theta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(c.axis.z == Catch::Approx(1.0));
    REQUIRE(diff(from_axis_angle(c).mat(), Mat2::identity() * Complex(-1)) < 1e-12);
  }
  SECTION("Hadamard with itself returns to the identity up to phase") {
    AxisAngle h = to_axis_angle(hadamard());
    AxisAngle c = compose_axis_angle(h, h);
    REQUIRE(c.theta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(pftest::diff_up_to_phase(Mat2::identity(), from_axis_angle(c).mat()) < 1e-12);
  }
  SECTION("1000 random pairs against direct multiplication") {
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      AxisAngle a = random_axis_angle(rng), b = random_axis_angle(rng);
      Mat2 direct = from_axis_angle(a).mat() * from_axis_angle(b).mat();
      Mat2 composed = from_axis_angle(compose_axis_angle(a, b)).mat();
      worst = std::max(worst, diff(direct, composed));
    }
    REQUIRE(worst < 10 * kEpsUnit);
  }
}

TEST_CASE("commutator identities") {
  REQUIRE(diff(commutator(pauli(3), pauli(1)), 2.0 * I * pftest::sigma(2)) < 1e-15);

  SECTION("[F(a), F(a')] = 2 i sigma3 sin((a-a')/2)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 4 * kPi);
    for (int k = 0; k < 50; ++k) {
      double a = u(rng), ap = u(rng);
      Mat2 expect = (2.0 * I * std::sin((a - ap) / 2)) * pftest::sigma(3);
      REQUIRE(diff(commutator(flip_op(a), flip_op(ap)), expect) < 1e-12);
    }
  }
  SECTION("[A, A] = 0") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
      UnitaryOp a = random_unitary(rng);
      REQUIRE(commutator(a, a).max_abs() < 1e-15);
    }
  }
}

TEST_CASE("commutes predicate") {
  REQUIRE(commutes(pauli(1), identity_op()));
  REQUIRE_FALSE(commutes(pauli(1), pauli(3)));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 4 * kPi);
  for (int k = 0; k < 50; ++k) {
    double a = u(rng), ap = u(rng);
    // flip operators differing by a multiple of 2*pi share the rotation axis
    REQUIRE(commutes(flip_op(a), flip_op(a + kTau)));
    if (std::abs(std::sin((a - ap) / 2)) > 1e-6)
      REQUIRE_FALSE(commutes(flip_op(a), flip_op(ap)));
  }
}

TEST_CASE("simultaneous eigenvectors") {
  SECTION("{1, sigma1} admits |+x>") {
    auto vs = simultaneous_eigenvectors({identity_op(), pauli(1)});
    REQUIRE(vs.size() == 2);
    double s = 1 / std::sqrt(2.0);
    bool found = false;
    for (const auto& v : vs) {
      Complex ov = std::conj(v.a0) * s + std::conj(v.a1) * s;
      if (std::abs(std::abs(ov) - 1.0) < 1e-9) found = true;
    }
    REQUIRE(found);
  }
  SECTION("{sigma3} includes |0>") {
    auto vs = simultaneous_eigenvectors({pauli(3)});
    bool found = false;
    for (const auto& v : vs)
      if (std::abs(v.a0) > 1 - 1e-12 && std::abs(v.a1) < 1e-12) found = true;
    REQUIRE(found);
  }
  SECTION("commuting flip pair passes the residual check") {
    auto vs = simultaneous_eigenvectors({flip_op(1.3), flip_op(1.3 + kTau)});
    REQUIRE_FALSE(vs.empty());
    for (const auto& v : vs) {
      REQUIRE(std::abs(v.norm() - 1.0) < kEpsUnit);
      for (const auto& op : {flip_op(1.3), flip_op(1.3 + kTau)}) {
        const Mat2& m = op.mat();
        Complex w0 = m(0, 0) * v.a0 + m(0, 1) * v.a1;
        Complex w1 = m(1, 0) * v.a0 + m(1, 1) * v.a1;
        Complex lambda = std::conj(v.a0) * w0 + std::conj(v.a1) * w1;
        double resid =
            std::sqrt(std::norm(w0 - lambda * v.a0) + std::norm(w1 - lambda * v.a1));
        REQUIRE(resid < kEpsUnit);
        REQUIRE(std::abs(std::abs(lambda) - 1.0) < kEpsUnit);
      }
    }
  }
  SECTION("non-commuting input is rejected") {
    REQUIRE_THROWS_AS(simultaneous_eigenvectors({pauli(1), pauli(3)}), NonCommutingError);
  }
}

TEST_CASE("unitarity closure under products") {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    Mat2 p = random_unitary(rng).mat() * random_unitary(rng).mat();
    worst = std::max(worst, diff(p.adjoint() * p, Mat2::identity()));
  }
  REQUIRE(worst < kEpsUnit);
}

TEST_CASE("basis_from_state builds a unitary mapping |0> to v") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    UnitaryOp u = random_unitary(rng);
    StateVector v(u.mat()(0, 0), u.mat()(1, 0));
    UnitaryOp b = basis_from_state(v);
    REQUIRE(std::abs(b.mat()(0, 0) - v.a0) < 1e-12);
    REQUIRE(std::abs(b.mat()(1, 0) - v.a1) < 1e-12);
  }
}
