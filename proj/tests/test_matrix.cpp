#include "doctest.h"
#include "heunspec/matrix.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/types.hpp"

using namespace heunspec;

namespace {
Matrix make(int n, std::initializer_list<double> vals) {
    Matrix m(n);
    auto it = vals.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = Real(*it++);
    return m;
}
}  // namespace

TEST_SUITE("matrix") {
    TEST_CASE("Cholesky factor of a small SPD matrix") {
        PrecisionGuard guard(30);
        const Matrix S = make(2, {4, 2, 2, 3});
        const Matrix L = cholesky_lower(S, pow10_neg(25));
        CHECK(abs(L.at(0, 0) - 2) < pow10_neg(25));
        CHECK(abs(L.at(1, 0) - 1) < pow10_neg(25));
        CHECK(abs(L.at(1, 1) - sqrt(Real(2))) < pow10_neg(25));
        CHECK(L.at(0, 1) == 0);

        // L L^T reproduces S.
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Real s = 0;
                for (int k = 0; k < 2; ++k)
                    s += L.at(i, k) * L.at(j, k);
                CHECK(abs(s - S.at(i, j)) < pow10_neg(25));
            }
    }

    TEST_CASE("Cholesky rejects a singular matrix") {
        PrecisionGuard guard(30);
        const Matrix S = make(2, {1, 1, 1, 1});
        CHECK_THROWS_AS(cholesky_lower(S, pow10_neg(25)),
                        IllConditionedBasis);
    }

    TEST_CASE("forward substitution solves L X = B") {
        PrecisionGuard guard(30);
        const Matrix L = make(2, {2, 0, 1, 1});
        const Matrix B = make(2, {2, 4, 3, 5});
        const Matrix X = forward_substitute(L, B);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Real s = 0;
                for (int k = 0; k < 2; ++k) s += L.at(i, k) * X.at(k, j);
                CHECK(abs(s - B.at(i, j)) < pow10_neg(25));
            }
    }

    TEST_CASE("transpose is an involution") {
        const Matrix A = make(2, {1, 2, 3, 4});
        const Matrix T = transpose(A);
        CHECK(T.at(0, 1) == 3);
        CHECK(T.at(1, 0) == 2);
        const Matrix TT = transpose(T);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(TT.at(i, j) == A.at(i, j));
    }

    TEST_CASE("Jacobi eigenvalues of symmetric matrices") {
        PrecisionGuard guard(30);
        const auto ev = jacobi_eigenvalues(make(2, {2, 1, 1, 2}),
                                           pow10_neg(28));
        REQUIRE(ev.size() == 2);
        CHECK(abs(ev[0] - 1) < pow10_neg(25));
        CHECK(abs(ev[1] - 3) < pow10_neg(25));

        // 3x3 with known spectrum {0, 1, 3}.
        const auto ev3 = jacobi_eigenvalues(
            make(3, {1, 1, 0, 1, 2, 1, 0, 1, 1}), pow10_neg(28));
        REQUIRE(ev3.size() == 3);
        CHECK(abs(ev3[0] - 0) < pow10_neg(24));
        CHECK(abs(ev3[1] - 1) < pow10_neg(24));
        CHECK(abs(ev3[2] - 3) < pow10_neg(24));
    }

    TEST_CASE("LU determinant with pivoting") {
        PrecisionGuard guard(30);
        CHECK(abs(lu_determinant(make(2, {0, 1, 1, 0})) + 1) <
              pow10_neg(25));
        CHECK(abs(lu_determinant(make(2, {2, 0, 0, 3})) - 6) <
              pow10_neg(25));
        // det = 1*(4*6-5*5) - 2*(2*6-5*3) + 3*(2*5-4*3) = -1+6-6 = -1.
        CHECK(abs(lu_determinant(make(3, {1, 2, 3, 2, 4, 5, 3, 5, 6})) + 1) <
              pow10_neg(24));
    }
}
