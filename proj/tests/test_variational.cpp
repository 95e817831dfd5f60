#include <cmath>
#include <vector>

#include "doctest.h"
#include "heunspec/oracle.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/variational.hpp"

using namespace heunspec;

TEST_SUITE("variational") {
    TEST_CASE("Gaussian moments against the closed form") {
        PrecisionGuard guard(30);
        // I(p) = Gamma((p+1)/2)/2.
        CHECK(abs(gaussian_moment(Real(1)) - Real(1) / 2) < pow10_neg(25));
        CHECK(abs(gaussian_moment(Real(3)) - Real(1) / 2) < pow10_neg(25));
        CHECK(abs(gaussian_moment(Real(5)) - Real(1)) < pow10_neg(25));
        const Real half_sqrt_pi = gaussian_moment(Real(0));
        CHECK(abs(half_sqrt_pi * half_sqrt_pi - Real(4) * atan(Real(1)) / 4) <
              pow10_neg(24));
    }

    TEST_CASE("moment quadrature cross-check") {
        PrecisionGuard guard(30);
        for (double p : {0.0, 1.0, 4.5, 6.2}) {
            const double closed = std::tgamma((p + 1.0) / 2.0) / 2.0;
            CHECK(quadrature_moment(p) ==
                  doctest::Approx(closed).epsilon(1e-12));
            CHECK(abs(gaussian_moment(Real(p)) - Real(closed)) < 1e-13);
        }
    }

    TEST_CASE("divergent moments are rejected") {
        PrecisionGuard guard(30);
        CHECK_THROWS_AS(gaussian_moment(Real(-1)), DivergentMoment);
        CHECK_THROWS_AS(gaussian_moment(Real(-2)), DivergentMoment);
        CHECK_THROWS_AS(quadrature_moment(-1.0), DivergentMoment);
        CHECK_THROWS_AS(quadrature_moment(-1.5), DivergentMoment);
    }

    TEST_CASE("Rayleigh-Ritz matrices are symmetric") {
        PrecisionGuard guard(40);
        const DimensionlessProblem p{0.5, -1.25};
        const MatrixPair hs = build_matrices(p, 8, 40);
        REQUIRE(hs.H.size() == 8);
        REQUIRE(hs.S.size() == 8);
        for (int i = 0; i < 8; ++i) {
            CHECK(hs.S.at(i, i) > 0);
            for (int j = 0; j < i; ++j) {
                CHECK(abs(hs.H.at(i, j) - hs.H.at(j, i)) < pow10_neg(35));
                CHECK(abs(hs.S.at(i, j) - hs.S.at(j, i)) < pow10_neg(35));
            }
        }
    }

    TEST_CASE("generalized solver on a diagonal pencil") {
        PrecisionGuard guard(30);
        MatrixPair hs;
        hs.H = Matrix(2);
        hs.S = Matrix(2);
        hs.H.at(0, 0) = 2;
        hs.H.at(1, 1) = 5;
        hs.S.at(0, 0) = 1;
        hs.S.at(1, 1) = 1;
        const auto ev = solve_generalized(hs, 30);
        REQUIRE(ev.size() == 2);
        CHECK(abs(ev[0] - 2) < pow10_neg(24));
        CHECK(abs(ev[1] - 5) < pow10_neg(24));
    }

    TEST_CASE("oscillator eigenvalues are reproduced exactly") {
        const DimensionlessProblem p{1.0, 0.0};
        const auto spec = variational_spectrum(p, 12, 50, 3);
        REQUIRE(spec.values.size() == 3);
        // W_n = 2 gamma + 2 + 4n lies in the basis span.
        CHECK(abs(spec.values[0] - 4) < pow10_neg(30));
        CHECK(abs(spec.values[1] - 8) < pow10_neg(30));
        CHECK(abs(spec.values[2] - 12) < pow10_neg(30));
        for (const auto& e : spec.estimates) {
            CHECK(e.method == Method::Variational);
            CHECK(e.order == 12);
            CHECK(e.error_gauge >= 0.0);
        }
    }

    TEST_CASE("polynomial eigenfunction is captured exactly") {
        // At gamma = 1, b = sqrt(6) the state W = 6 has a degree-1
        // polynomial factor, contained in the basis from N = 2 on.
        const DimensionlessProblem p{1.0, 2.449489742783178};
        const auto spec = variational_spectrum(p, 10, 50, 2);
        CHECK(abs(spec.values[1] - 6) < pow10_neg(14));
    }

    TEST_CASE("reference spectrum at gamma = 1, b = sqrt(6)") {
        const DimensionlessProblem p{1.0, 2.449489742783178};
        const auto spec = variational_spectrum(p, 25, 50, 3);
        const double refs[3] = {1.6003571542813619, 6.0, 10.210728100100846};
        for (int j = 0; j < 3; ++j)
            CHECK(to_double(spec.values[static_cast<size_t>(j)]) ==
                  doctest::Approx(refs[j]).epsilon(5e-9));
    }

    TEST_CASE("upper bounds decrease monotonically in the basis size") {
        const DimensionlessProblem p{0.0, 0.5};
        std::vector<std::vector<double>> table;
        for (int N = 6; N <= 16; ++N) {
            const auto spec = variational_spectrum(p, N, 40, 3);
            std::vector<double> row;
            for (const auto& v : spec.values) row.push_back(to_double(v));
            table.push_back(row);
        }
        for (size_t r = 1; r < table.size(); ++r)
            for (size_t j = 0; j < 3; ++j)
                CHECK(table[r][j] <= table[r - 1][j] + 1e-25);
    }

    TEST_CASE("error gauge reflects the drop from the previous basis") {
        const DimensionlessProblem p{0.0, 0.5};
        const auto small = variational_spectrum(p, 8, 40, 2);
        const auto big = variational_spectrum(p, 20, 40, 2);
        CHECK(big.estimates[0].error_gauge <= small.estimates[0].error_gauge);
    }

    TEST_CASE("ill-conditioned overlap is reported") {
        const DimensionlessProblem p{1.0, 0.5};
        CHECK_THROWS_AS(variational_spectrum(p, 20, 16, 3),
                        IllConditionedBasis);
    }

    TEST_CASE("invalid arguments") {
        const DimensionlessProblem p{1.0, 0.5};
        CHECK_THROWS_AS(variational_spectrum(p, 5, 50, 4),
                        std::invalid_argument);
        CHECK_THROWS_AS(variational_spectrum(p, 0, 50, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            variational_spectrum(DimensionlessProblem{-1.0, 0.0}, 10, 50, 2),
            std::invalid_argument);
    }
}
