#pragma once

#include <vector>

#include "heunspec/types.hpp"

namespace heunspec {

// Controls for the double-precision shooting integrator.  Lengths are quoted
// in units of the dimensionless radius; problems living on other scales are
// handled by scaling all three quantities together.
struct ShootingConfig {
    double zeta_max = 10.0;     // outer edge of the integration domain
    double step = 5e-4;         // RK4 step at unit radial scale
    double match_point = 1.5;   // where outward and inward solutions meet
};

struct ShotResult {
    double mismatch = 0.0;  // log-derivative difference at the match point
    int nodes = 0;          // radial nodes across the whole domain
};

// Integrate the dimensionless radial equation at trial eigenvalue W: a
// series-seeded outward sweep and an asymptotically seeded inward sweep,
// joined at the match point.
ShotResult integrate_radial(const DimensionlessProblem& problem, double W,
                            const ShootingConfig& cfg = {});

// Locate the eigenvalue whose eigenfunction has state_index radial nodes by
// bracketing sign changes of the matching Wronskian and bisecting.  The
// error gauge is the shift under halving the integration step (Richardson
// consistency check); `order` reports the refinement level used (2).
EigenvalueEstimate oracle_eigenvalue(const DimensionlessProblem& problem,
                                     int state_index,
                                     const ShootingConfig& cfg = {});

// The lowest n_states eigenvalues from a single window scan.
std::vector<EigenvalueEstimate> oracle_spectrum(
    const DimensionlessProblem& problem, int n_states,
    const ShootingConfig& cfg = {});

// Shooting applied directly to the physical radial equation (no reduction):
// returns the physical energy of the given state.  Works both with harmonic
// confinement (Omega k != 0) and in the pure Coulomb regime (k == 0, f < 0,
// throws NoBoundState otherwise).
double physical_oracle(const PhysicalParams& params, const QuantumNumbers& q,
                       int state_index, const ShootingConfig& cfg = {});

// Double-exponential (tanh-sinh) quadrature of the Gaussian moment
// integral_0^inf zeta^p exp(-zeta^2) dzeta, used to cross-check the
// closed-form moments.  Absolute accuracy about 1e-14; throws
// DivergentMoment for p <= -1.
double quadrature_moment(double p);

}  // namespace heunspec
