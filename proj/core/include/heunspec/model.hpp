#pragma once

#include <vector>

#include "heunspec/types.hpp"

namespace heunspec {

// Effective (signed) centrifugal index gamma_s = l + (1 - s)/2 produced by
// the spin-rotation coupling.  Throws std::invalid_argument unless
// q.spin is +1 or -1.
double gamma_of(const QuantumNumbers& q);

// Map the physical radial equation to the dimensionless problem.  Requires
// mass > 0 and Omega * k != 0 (otherwise ZeroHarmonicTerm): the radial scale
// is lambda = (2 m)^(1/4) sqrt(|Omega k|) and the solvers receive
// gamma = |gamma_s|.
ReductionResult reduce(const PhysicalParams& p, const QuantumNumbers& q);

// Physical energy corresponding to a dimensionless eigenvalue W:
//
//   E = [W lambda^2 - 2 Omega k gamma_s + (k + spin Omega/2)^2] / (2 m),
//
// equivalently energy_scale * W - energy_offset.
double energy_from_W(double W, const ReductionResult& r,
                     const PhysicalParams& p, const QuantumNumbers& q);

// Qualitative bound-state content of the physical problem; valid for every
// parameter combination, including Omega * k == 0.
Diagnosis diagnose(const PhysicalParams& p);

// Closed-form spectrum of the pure Coulomb limit (k == 0, f < 0):
//
//   E_n = -m f^2 / (2 (n + gamma + 1/2)^2) + Omega^2 / (8 m),  n = 0..n_max.
//
// Throws NotCoulombRegime when k != 0 or f >= 0.
std::vector<double> coulomb_limit_spectrum(const PhysicalParams& p,
                                           const QuantumNumbers& q, int n_max);

}  // namespace heunspec
