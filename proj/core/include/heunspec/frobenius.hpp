#pragma once

#include <vector>

#include "heunspec/precision.hpp"
#include "heunspec/types.hpp"

namespace heunspec {

// Coefficients a_0..a_count of the power-series factor p(zeta) in the ansatz
// R = zeta^gamma exp(-zeta^2/2) p(zeta), generated by
//
//   a_0 = 1,  a_1 = -b / alpha,
//   a_{m+2} = [-b a_{m+1} + (2m - g) a_m] / [(m + 2)(m + alpha + 1)],
//
// with alpha = 2 gamma + 1 and g = W - 2 gamma - 2.  Values are produced at
// the current working precision.
std::vector<Real> series_coefficients(const Real& gamma, const Real& b,
                                      const Real& W, int count);

// The coefficient a_{n+1} viewed as a polynomial in the coupling b at the
// truncation energy W = 2 gamma + 2n + 2 (g = 2n).  Coefficients are exact
// rationals in ascending powers of b; only powers of parity (n+1) mod 2
// occur.
struct BPolynomial {
    int degree = 0;                                // n + 1
    std::vector<Rational> rational_coefficients;   // size degree + 1
};

BPolynomial truncation_polynomial(int n, const Rational& gamma);

// One exact truncation point: a value of b at which the series terminates at
// degree n with eigenvalue W = 2 gamma + 2n + 2.
struct TruncationSolution {
    int n = 0;
    Rational gamma;
    Real b_root;                  // polished to at least 40 significant digits
    bool b_squared_exact = false; // true when b_root^2 is a known rational
    Rational b_squared;           // meaningful when b_squared_exact
    Rational W;                   // exact eigenvalue 2 gamma + 2n + 2
    std::vector<Real> coefficients;  // a_0..a_n evaluated at b_root
};

// All real roots b of the truncation polynomial, sorted ascending.  Roots are
// isolated exactly (Sturm sequences on the even part) and polished by Newton
// iteration to max(digits, 40) significant digits.
std::vector<TruncationSolution> solve_truncation(int n, const Rational& gamma,
                                                 int digits = 50);

// Independent check of a truncation solution: evaluates the full radial
// differential expression on R = zeta^gamma exp(-zeta^2/2) p(zeta) at the
// twelve points zeta = k/3, k = 1..12, and returns the largest magnitude.
Real verify_polynomial_solution(const TruncationSolution& sol, int digits = 50);

}  // namespace heunspec
