#include <cmath>

#include "doctest.h"
#include "heunspec/frobenius.hpp"
#include "heunspec/precision.hpp"

using namespace heunspec;

namespace {
bool real_close(const Real& a, const Real& b, int decimals) {
    return abs(a - b) < pow10_neg(decimals);
}
}  // namespace

TEST_SUITE("frobenius") {
    TEST_CASE("series terminates at the exact truncation point") {
        PrecisionGuard guard(50);
        const Real gamma = 1;
        const Real b = sqrt(Real(6));
        const Real W = 6;  // g = W - 2 gamma - 2 = 2, so a_2 = a_3 = ... = 0
        const auto a = series_coefficients(gamma, b, W, 8);
        REQUIRE(a.size() == 9);
        CHECK(a[0] == 1);
        CHECK(real_close(a[1], -b / 3, 45));
        for (size_t m = 2; m < a.size(); ++m) CHECK(real_close(a[m], 0, 45));
    }

    TEST_CASE("series recurrence against direct evaluation") {
        PrecisionGuard guard(40);
        const Real gamma = Real(1) / 2, b = Real(13) / 10, W = Real(5) / 2;
        const Real alpha = 2 * gamma + 1;
        const Real g = W - 2 * gamma - 2;
        const auto a = series_coefficients(gamma, b, W, 12);
        REQUIRE(a.size() == 13);
        CHECK(a[0] == 1);
        CHECK(real_close(a[1], -b / alpha, 35));
        for (int m = 0; m + 2 < static_cast<int>(a.size()); ++m) {
            const Real expect =
                (-b * a[static_cast<size_t>(m) + 1] + (2 * m - g) *
                 a[static_cast<size_t>(m)]) /
                ((m + 2) * (m + alpha + 1));
            CHECK(real_close(a[static_cast<size_t>(m) + 2], expect, 35));
        }
    }

    TEST_CASE("truncation polynomial n=1, gamma=1") {
        // a_2 propto b^2/24 - 1/4: roots b^2 = 6.
        const BPolynomial poly = truncation_polynomial(1, Rational(1));
        REQUIRE(poly.degree == 2);
        REQUIRE(poly.rational_coefficients.size() == 3);
        const Rational lead = poly.rational_coefficients[2];
        REQUIRE(lead != 0);
        CHECK(poly.rational_coefficients[1] == 0);
        CHECK(poly.rational_coefficients[0] / lead == Rational(-6));
    }

    TEST_CASE("degree 0 truncation forces b = 0") {
        const auto sols = solve_truncation(0, Rational(1), 50);
        REQUIRE(sols.size() == 1);
        CHECK(sols[0].b_root == 0);
        CHECK(sols[0].b_squared_exact);
        CHECK(sols[0].b_squared == 0);
        CHECK(sols[0].W == Rational(4));
    }

    TEST_CASE("degree 1 truncation: b^2 = 6, W = 6") {
        PrecisionGuard guard(50);
        const auto sols = solve_truncation(1, Rational(1), 50);
        REQUIRE(sols.size() == 2);
        CHECK(sols[0].b_root < 0);
        CHECK(sols[1].b_root > 0);
        for (const auto& sol : sols) {
            CHECK(sol.W == Rational(6));
            CHECK(sol.b_squared_exact);
            CHECK(sol.b_squared == Rational(6));
            CHECK(real_close(sol.b_root * sol.b_root, Real(6), 40));
            CHECK(verify_polynomial_solution(sol, 50) < pow10_neg(40));
        }
    }

    TEST_CASE("degree 2 truncation: b = 0 and b^2 = 28, W = 8") {
        PrecisionGuard guard(50);
        const auto sols = solve_truncation(2, Rational(1), 50);
        REQUIRE(sols.size() == 3);
        CHECK(real_close(sols[0].b_root, -sqrt(Real(28)), 40));
        CHECK(sols[1].b_root == 0);
        CHECK(real_close(sols[2].b_root, sqrt(Real(28)), 40));
        for (const auto& sol : sols) {
            CHECK(sol.W == Rational(8));
            CHECK(sol.b_squared_exact);
            CHECK(verify_polynomial_solution(sol, 50) < pow10_neg(40));
        }
        CHECK(sols[0].b_squared == Rational(28));
        CHECK(sols[1].b_squared == Rational(0));
    }

    TEST_CASE("rational gamma: n=1 at gamma=1/2 gives b^2 = 4, W = 5") {
        PrecisionGuard guard(50);
        const auto sols = solve_truncation(1, Rational(1, 2), 50);
        REQUIRE(sols.size() == 2);
        for (const auto& sol : sols) {
            CHECK(sol.W == Rational(5));
            CHECK(sol.b_squared_exact);
            CHECK(sol.b_squared == Rational(4));
        }
        CHECK(real_close(sols[0].b_root, Real(-2), 40));
        CHECK(real_close(sols[1].b_root, Real(2), 40));
    }

    TEST_CASE("truncation eigenvalue spacing W = 2 gamma + 2n + 2") {
        for (int n : {0, 1, 2, 3}) {
            const auto sols = solve_truncation(n, Rational(3, 2), 40);
            for (const auto& sol : sols)
                CHECK(sol.W == Rational(3) + Rational(2 * n + 2));
        }
    }

    TEST_CASE("invalid arguments") {
        CHECK_THROWS_AS(solve_truncation(-1, Rational(1), 50),
                        std::invalid_argument);
        CHECK_THROWS_AS(solve_truncation(1, Rational(-1), 50),
                        std::invalid_argument);
        CHECK_THROWS_AS(truncation_polynomial(-2, Rational(1)),
                        std::invalid_argument);
    }
}
