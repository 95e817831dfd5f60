#pragma once

#include <vector>

#include "heunspec/precision.hpp"
#include "heunspec/types.hpp"

namespace heunspec {

// Coefficients f_0..f_M of the regular part of the logarithmic derivative in
// the Riccati form of the radial equation:
//
//   f_0 = b / (2 gamma + 1),
//   (m + 2 gamma + 2) f_{m+1} = sum_{i=0}^{m} f_i f_{m-i}
//                               + W [m == 0] - [m == 2].
struct RiccatiSeries {
    Real gamma;
    Real b;
    Real W;
    std::vector<Real> coefficients;
};

RiccatiSeries riccati_coefficients(const Real& gamma, const Real& b,
                                   const Real& W, int M);

// D x D Hankel determinant of the series with entry (i, j) = f_{i+j+d+1}.
struct HankelSpec {
    int D = 2;
    int d = 0;
};

struct HankelDeterminant {
    Real raw;
    Real scaled;  // raw divided by the product of the row sup-norms
};

// Requires at least 2D + d coefficients (indices up to 2D + d - 1); throws
// SeriesTooShort otherwise.
HankelDeterminant hankel_determinant(const RiccatiSeries& series,
                                     const HankelSpec& spec);

// All roots in W of the scaled Hankel determinant at fixed (D, d) inside
// (w_lo, w_hi), located on a uniform grid of `grid` cells.  Sign crossings
// are bisected and polished by a Newton step with central differences of
// width 10^(-digits/3) down to 10^-(digits-10); local minima of |det| that
// dip far below their surroundings are treated as touching (even
// multiplicity) roots and refined by golden-section search.
std::vector<Real> rpm_roots(const Real& gamma, const Real& b,
                            const HankelSpec& spec, double w_lo, double w_hi,
                            int grid, int digits = 50);

// A root of the Hankel determinant sequence that persisted across orders.
struct RpmRoot {
    double W = 0.0;
    int D = 0;        // highest order at which the root was confirmed
    int offset = 0;   // determinant family d that produced it
    double drift = 0; // |change| between the last two confirming orders
    bool stable = true;
};

// Track determinant roots of the two families d and d+1 through orders
// D = 3..D_max and return the n_states lowest roots that stabilised, sorted
// ascending.  A root counts as stable once two successive confirmations at
// most two orders apart agree within stability_tol (the order gap of two
// admits families whose roots only appear at every other D, as happens at
// b = 0).  Roots found by both families are merged, keeping the
// better-converged one; roots that never stabilise are discarded as
// spurious.
//
// The scan window defaults to (lo, 4 n_states + 2 gamma + 6), where lo is
// the rigorous ground-state floor: 2 gamma + 1 for b <= 0 (repulsive
// Coulomb term, oscillator bound minus a margin) and the two-dimensional
// Coulomb lower bound -b^2/(4 (gamma+1/2)^2) - 1 for b > 0 (an attractive
// Coulomb term can pull the ground state below W = 0).  Seeds override the
// window with a margin of 1.5 around their extremes.  Throws
// InsufficientStableRoots when fewer than n_states roots stabilise.
std::vector<RpmRoot> rpm_spectrum(const DimensionlessProblem& problem,
                                  int D_max, int d, int n_states,
                                  const std::vector<double>& seeds = {},
                                  int digits = 50,
                                  double stability_tol = 1e-10);

}  // namespace heunspec
