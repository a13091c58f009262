#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace pennyflip;
using pftest::diff;
using pftest::mat;

namespace {
const Complex I(0, 1);

StrategyPair eq3_pair() { return sigma13_family({kPi / 2, 0, 0, kPi / 2}); }

DensityMatrix heads() { return DensityMatrix::pure(ket0()); }
}  // namespace

TEST_CASE("density matrix invariants") {
  REQUIRE_THROWS_AS(DensityMatrix(mat(1, 0.5, 0, 0)), std::domain_error);      // not Hermitian
  REQUIRE_THROWS_AS(DensityMatrix(mat(0.8, 0, 0, 0.4)), std::domain_error);    // trace != 1
  REQUIRE_THROWS_AS(DensityMatrix(mat(1.5, 0, 0, -0.5)), std::domain_error);   // negative eigenvalue
  DensityMatrix mixed(mat(0.5, 0, 0, 0.5));
  REQUIRE(mixed.purity() == Catch::Approx(0.5));
  REQUIRE(heads().purity() == Catch::Approx(1.0));
}

TEST_CASE("bloch vectors of the named states") {
  double s = 1 / std::sqrt(2.0);
  Vec3 b0 = bloch_vector(heads());
  REQUIRE(b0.x == Catch::Approx(0).margin(1e-15));
  REQUIRE(b0.z == Catch::Approx(1));
  Vec3 bx = bloch_vector(DensityMatrix::pure({s, s}));
  REQUIRE(bx.x == Catch::Approx(1));
  REQUIRE(bx.z == Catch::Approx(0).margin(1e-15));
  Vec3 by = bloch_vector(DensityMatrix::pure({s, I * s}));
  REQUIRE(by.y == Catch::Approx(1));
}

TEST_CASE("evolve_branch") {
  SECTION("Meyer spec with the Hadamard pair restores heads on the flip branch") {
    DensityMatrix out = evolve_branch(pftest::meyer_spec(), meyer_hadamard(), 1);
    REQUIRE(diff(out.mat(), heads().mat()) < 1e-12);
  }
  SECTION("identity strategy leaves A rho0 A-dagger") {
    std::mt19937_64 rng(1);
    UnitaryOp a = random_unitary(rng);
    GameSpec spec = GameSpec::uniform(heads(), {a}, "one-op");
    DensityMatrix out = evolve_branch(spec, {identity_op(), identity_op()}, 0);
    REQUIRE(diff(out.mat(), a.mat() * heads().mat() * a.mat().adjoint()) < 1e-12);
  }
  SECTION("sigma13 spec with the published pair restores heads on the sigma3 branch") {
    StrategyPair s = eq3_pair();
    DensityMatrix out = evolve_branch(pftest::sigma13_spec(), s, 1);
    REQUIRE(diff(out.mat(), heads().mat()) < 1e-12);
    // the final pure state is i|0>
    Mat2 w = s.u2.mat() * pauli(3).mat() * s.u1.mat();
    REQUIRE(std::abs(w(0, 0) - I) < 1e-12);
    REQUIRE(std::abs(w(1, 0)) < 1e-12);
  }
  SECTION("bad branch index") {
    REQUIRE_THROWS_AS(evolve_branch(pftest::meyer_spec(), meyer_hadamard(), 2),
                      std::out_of_range);
  }
}

TEST_CASE("evolve_mixed") {
  SECTION("two identical branches equal either branch") {
    GameSpec spec = GameSpec::uniform(heads(), {pauli(1), pauli(1)}, "dup");
    StrategyPair s = meyer_hadamard();
    std::array<double, 2> w{0.3, 0.7};
    REQUIRE(diff(evolve_mixed(spec, s, w).mat(), evolve_branch(spec, s, 0).mat()) < 1e-12);
  }
  SECTION("Meyer spec with Hadamard pair is heads for any p") {
    for (double p : {0.0, 0.25, 0.8, 1.0}) {
      std::array<double, 2> w{p, 1 - p};
      REQUIRE(diff(evolve_mixed(pftest::meyer_spec(), meyer_hadamard(), w).mat(),
                   heads().mat()) < 1e-12);
    }
  }
  SECTION("random spec matches the hand-computed mixture") {
    std::mt19937_64 rng(2);
    UnitaryOp a = random_unitary(rng), b = random_unitary(rng);
    StrategyPair s{random_unitary(rng), random_unitary(rng)};
    GameSpec spec = GameSpec::uniform(heads(), {a, b}, "rand");
    std::array<double, 2> w{0.3, 0.7};
    Mat2 expect = 0.3 * evolve_branch(spec, s, 0).mat() + 0.7 * evolve_branch(spec, s, 1).mat();
    REQUIRE(diff(evolve_mixed(spec, s, w).mat(), expect) < 1e-12);
  }
  SECTION("weight mismatch is rejected") {
    std::array<double, 3> w{0.3, 0.3, 0.4};
    REQUIRE_THROWS_AS(evolve_mixed(pftest::meyer_spec(), meyer_hadamard(), w),
                      std::invalid_argument);
    std::array<double, 2> bad{0.3, 0.3};
    REQUIRE_THROWS_AS(evolve_mixed(pftest::meyer_spec(), meyer_hadamard(), bad),
                      std::invalid_argument);
  }
}

TEST_CASE("fidelity") {
  double s = 1 / std::sqrt(2.0);
  REQUIRE(fidelity(heads(), heads()) == Catch::Approx(1.0));
  REQUIRE(fidelity(DensityMatrix::pure(ket1()), heads()) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(fidelity(DensityMatrix::pure({s, s}), heads()) == Catch::Approx(0.5));
  DensityMatrix mixed(mat(0.5, 0, 0, 0.5));
  REQUIRE_THROWS_AS(fidelity(heads(), mixed), std::domain_error);
}

TEST_CASE("quantum payoff") {
  PayoffPair same = quantum_payoff(heads(), heads());
  REQUIRE(same.p == Catch::Approx(-1.0));
  REQUIRE(same.q == Catch::Approx(1.0));
  PayoffPair orth = quantum_payoff(DensityMatrix::pure(ket1()), heads());
  REQUIRE(orth.p == Catch::Approx(1.0));
  double s = 1 / std::sqrt(2.0);
  PayoffPair half = quantum_payoff(DensityMatrix::pure({s, s}), heads());
  REQUIRE(half.p == Catch::Approx(0.0).margin(1e-15));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    DensityMatrix rho = apply(random_unitary(rng), heads());
    PayoffPair pp = quantum_payoff(rho, heads());
    REQUIRE(pp.p + pp.q == 0.0);  // antisymmetry is exact by construction
  }
}

TEST_CASE("verify_strategy") {
  SECTION("Meyer spec with the Hadamard pair wins at fidelity 1") {
    VerificationReport rep = verify_strategy(pftest::meyer_spec(), meyer_hadamard());
    REQUIRE(rep.win);
    REQUIRE(rep.worst_fidelity == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(rep.branch_fidelities.size() == 2);
    REQUIRE(rep.probability_grid.size() == 11);
    REQUIRE(rep.payoff_q == Catch::Approx(1.0));
  }
  SECTION("doing nothing loses: the flip branch has fidelity 0") {
    VerificationReport rep =
        verify_strategy(pftest::meyer_spec(), {identity_op(), identity_op()});
    REQUIRE_FALSE(rep.win);
    REQUIRE(rep.branch_fidelities[1] == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("sigma13 spec with the published pair wins") {
    VerificationReport rep = verify_strategy(pftest::sigma13_spec(), eq3_pair());
    REQUIRE(rep.win);
    // intermediate state is |+y>: Bloch (0, 1, 0) after the first move
    for (const BlochTrace& tr : rep.bloch_traces) {
      REQUIRE(tr[1].x == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(tr[1].y == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(tr[1].z == Catch::Approx(0.0).margin(1e-12));
    }
  }
  SECTION("verdict matches the worst-fidelity threshold") {
    VerificationReport rep =
        verify_strategy(pftest::meyer_spec(), {hadamard(), identity_op()});
    REQUIRE(rep.win == (rep.worst_fidelity >= 1.0 - rep.eps_win));
    REQUIRE_FALSE(rep.win);
  }
  SECTION("grid size below 2 is rejected") {
    REQUIRE_THROWS_AS(verify_strategy(pftest::meyer_spec(), meyer_hadamard(), 1),
                      std::invalid_argument);
  }
}

TEST_CASE("evolution properties on random inputs") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    UnitaryOp a = random_unitary(rng), b = random_unitary(rng);
    StrategyPair s{random_unitary(rng), random_unitary(rng)};
    GameSpec spec = GameSpec::uniform(heads(), {a, b}, "rand");
    std::uniform_real_distribution<double> u(0, 1);
    double p = u(rng);
    std::array<double, 2> w{p, 1 - p};

    DensityMatrix b0 = evolve_branch(spec, s, 0);
    DensityMatrix mix = evolve_mixed(spec, s, w);

    REQUIRE(std::abs(b0.mat().trace().real() - 1.0) < kEpsUnit);
    REQUIRE(std::abs(b0.purity() - 1.0) < kEpsUnit);  // unitary branch keeps purity
    REQUIRE(std::abs(mix.mat().trace().real() - 1.0) < kEpsUnit);

    Mat2 byhand = p * b0.mat() + (1 - p) * evolve_branch(spec, s, 1).mat();
    REQUIRE(diff(mix.mat(), byhand) < kEpsUnit);

    REQUIRE(bloch_vector(b0).norm() == Catch::Approx(1.0).margin(kEpsUnit));
    REQUIRE(bloch_vector(mix).norm() <= 1.0 + kEpsUnit);
  }
}

TEST_CASE("game spec validation") {
  REQUIRE_THROWS_AS(GameSpec(heads(), {}), std::invalid_argument);
  REQUIRE_THROWS_AS(GameSpec(heads(), {{identity_op(), 0.5}, {pauli(1), 0.4}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(GameSpec(heads(), {{identity_op(), -0.5}, {pauli(1), 1.5}}),
                    std::invalid_argument);
}
