#include <cmath>

#include "doctest.h"
#include "heunspec/model.hpp"
#include "heunspec/oracle.hpp"
#include "heunspec/variational.hpp"

using namespace heunspec;

TEST_SUITE("oracle") {
    TEST_CASE("node counts label the oscillator eigenvalues") {
        const DimensionlessProblem p{1.0, 0.0};
        // At an eigenvalue the matched solution is the eigenfunction, so the
        // node count equals the state index; between levels the count is
        // only monotone (the new node enters shortly below the next level).
        CHECK(integrate_radial(p, 4.0).nodes == 0);
        CHECK(integrate_radial(p, 8.0).nodes == 1);
        CHECK(integrate_radial(p, 12.0).nodes == 2);
        int prev = 0;
        for (double W : {3.0, 5.0, 7.0, 9.0, 11.0, 13.0}) {
            const int n = integrate_radial(p, W).nodes;
            CHECK(n >= prev);
            prev = n;
        }
        // The log-derivative mismatch vanishes at eigenvalues and is O(1)
        // away from them.
        CHECK(std::fabs(integrate_radial(p, 4.0).mismatch) < 1e-9);
        CHECK(std::fabs(integrate_radial(p, 8.0).mismatch) < 1e-8);
        CHECK(std::fabs(integrate_radial(p, 6.0).mismatch) > 1.0);
    }

    TEST_CASE("single eigenvalue of the oscillator") {
        const DimensionlessProblem p{1.0, 0.0};
        const EigenvalueEstimate e = oracle_eigenvalue(p, 0);
        CHECK(e.index == 0);
        CHECK(e.method == Method::Oracle);
        CHECK(e.W == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(e.error_gauge < 1e-8);
    }

    TEST_CASE("spectrum against the variational reference") {
        const DimensionlessProblem p{0.0, 0.5};
        const auto oracle = oracle_spectrum(p, 3);
        REQUIRE(oracle.size() == 3);
        const double refs[3] = {1.0165611586430667, 5.3153564257748539,
                                9.4232744076817459};
        for (int j = 0; j < 3; ++j) {
            CHECK(oracle[static_cast<size_t>(j)].index == j);
            CHECK(oracle[static_cast<size_t>(j)].W ==
                  doctest::Approx(refs[j]).epsilon(1e-8));
        }
    }

    TEST_CASE("physical shooting matches the reduction round trip") {
        const PhysicalParams p{1.0, 1.0, 1.0, -1.0};
        const QuantumNumbers q{0, +1};
        const ReductionResult r = reduce(p, q);

        const auto var = variational_spectrum(r.problem, 25, 50, 2);
        for (int j = 0; j < 2; ++j) {
            const double via_reduction = energy_from_W(
                to_double(var.values[static_cast<size_t>(j)]), r, p, q);
            const double direct = physical_oracle(p, q, j);
            CHECK(direct ==
                  doctest::Approx(via_reduction).epsilon(1e-9));
        }
    }

    TEST_CASE("physical shooting reproduces the Coulomb limit") {
        const PhysicalParams p{1.0, 0.0, 0.0, -1.0};
        const QuantumNumbers q{0, +1};
        const auto closed = coulomb_limit_spectrum(p, q, 1);
        for (int n = 0; n < 2; ++n) {
            const double direct = physical_oracle(p, q, n);
            CHECK(direct ==
                  doctest::Approx(closed[static_cast<size_t>(n)])
                      .epsilon(1e-8));
        }
    }

    TEST_CASE("unbound channels are rejected") {
        const QuantumNumbers q{0, +1};
        CHECK_THROWS_AS(physical_oracle({1.0, 0.0, 0.0, 1.0}, q, 0),
                        NoBoundState);
        CHECK_THROWS_AS(physical_oracle({1.0, 0.0, 0.0, 0.0}, q, 0),
                        NoBoundState);
    }

    TEST_CASE("invalid arguments") {
        const DimensionlessProblem p{1.0, 0.0};
        CHECK_THROWS_AS(oracle_eigenvalue(p, -1), std::invalid_argument);
        CHECK_THROWS_AS(oracle_spectrum(p, 0), std::invalid_argument);
        CHECK_THROWS_AS(
            oracle_spectrum(DimensionlessProblem{-1.0, 0.0}, 1),
            std::invalid_argument);
        CHECK_THROWS_AS(physical_oracle({-1.0, 1.0, 1.0, -1.0},
                                        QuantumNumbers{0, +1}, 0),
                        std::invalid_argument);
    }
}
