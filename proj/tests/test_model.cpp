#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "heunspec/model.hpp"
#include "heunspec/types.hpp"

using namespace heunspec;

TEST_SUITE("model") {
    TEST_CASE("effective centrifugal index") {
        CHECK(gamma_of({0, +1}) == doctest::Approx(0.0));
        CHECK(gamma_of({1, +1}) == doctest::Approx(1.0));
        CHECK(gamma_of({0, -1}) == doctest::Approx(1.0));
        CHECK(gamma_of({3, -1}) == doctest::Approx(4.0));
        CHECK(gamma_of({-2, -1}) == doctest::Approx(-1.0));
        CHECK_THROWS_AS(gamma_of({0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(gamma_of({0, 2}), std::invalid_argument);
    }

    TEST_CASE("reduction to the dimensionless problem") {
        const PhysicalParams p{1.0, 1.0, 1.0, -1.0};
        const QuantumNumbers q{0, +1};
        const ReductionResult r = reduce(p, q);

        const double lambda = std::pow(2.0, 0.25);
        CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-14));
        CHECK(r.problem.gamma == doctest::Approx(0.0));
        // b = -2 m f / lambda, attractive (positive) for f < 0.
        CHECK(r.problem.b == doctest::Approx(2.0 / lambda).epsilon(1e-14));
        CHECK(r.energy_scale ==
              doctest::Approx(lambda * lambda / 2.0).epsilon(1e-14));
    }

    TEST_CASE("reduction is invariant under k -> -k") {
        const QuantumNumbers q{1, -1};
        const PhysicalParams plus{0.75, 1.5, 2.0, 0.5};
        PhysicalParams minus = plus;
        minus.k = -plus.k;

        const ReductionResult a = reduce(plus, q);
        const ReductionResult b = reduce(minus, q);
        CHECK(a.problem.gamma == doctest::Approx(b.problem.gamma));
        CHECK(a.problem.b == doctest::Approx(b.problem.b).epsilon(1e-14));
        CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-14));
        CHECK(a.energy_scale ==
              doctest::Approx(b.energy_scale).epsilon(1e-14));
    }

    TEST_CASE("reduction requires a harmonic term") {
        const QuantumNumbers q{0, +1};
        CHECK_THROWS_AS(reduce({1.0, 0.0, 1.0, -1.0}, q), ZeroHarmonicTerm);
        CHECK_THROWS_AS(reduce({1.0, 1.0, 0.0, -1.0}, q), ZeroHarmonicTerm);
        CHECK_THROWS_AS(reduce({-1.0, 1.0, 1.0, -1.0}, q),
                        std::invalid_argument);
    }

    TEST_CASE("energy map matches the affine form") {
        const PhysicalParams p{0.5, 1.0, 1.0, -1.0};
        const QuantumNumbers q{1, +1};
        const ReductionResult r = reduce(p, q);
        for (double W : {2.0, 5.0, 11.5}) {
            const double direct = energy_from_W(W, r, p, q);
            const double affine = r.energy_scale * W - r.energy_offset;
            CHECK(direct == doctest::Approx(affine).epsilon(1e-13));
        }
    }

    TEST_CASE("diagnosis never reports three-dimensional bound states") {
        for (double omega : {-1.0, 0.0, 1.0})
            for (double k : {-1.0, 0.0, 2.0})
                for (double f : {-1.0, 0.0, 1.0}) {
                    const Diagnosis d = diagnose({1.0, omega, k, f});
                    CHECK_FALSE(d.three_d_bound_states);
                    CHECK_FALSE(d.message.empty());
                    if (omega * k != 0.0)
                        CHECK(d.planar_bound_states ==
                              PlanarBoundStates::AllParameters);
                    else
                        CHECK(d.planar_bound_states ==
                              PlanarBoundStates::OnlyAttractiveF);
                }
    }

    TEST_CASE("Coulomb limit closed form") {
        const PhysicalParams p{1.0, 0.0, 0.0, -1.0};
        const QuantumNumbers q{0, +1};  // gamma = 0
        const auto E = coulomb_limit_spectrum(p, q, 2);
        REQUIRE(E.size() == 3);
        CHECK(E[0] == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(E[1] == doctest::Approx(-1.0 / 4.5).epsilon(1e-14));
        CHECK(E[2] == doctest::Approx(-0.08).epsilon(1e-14));
    }

    TEST_CASE("Coulomb limit rejects other regimes") {
        const QuantumNumbers q{0, +1};
        CHECK_THROWS_AS(coulomb_limit_spectrum({1.0, 0.0, 1.0, -1.0}, q, 1),
                        NotCoulombRegime);
        CHECK_THROWS_AS(coulomb_limit_spectrum({1.0, 0.0, 0.0, 1.0}, q, 1),
                        NotCoulombRegime);
        CHECK_THROWS_AS(coulomb_limit_spectrum({1.0, 0.0, 0.0, 0.0}, q, 1),
                        NotCoulombRegime);
    }
}
