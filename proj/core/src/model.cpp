#include "heunspec/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace heunspec {

double gamma_of(const QuantumNumbers& q) {
    if (q.spin != 1 && q.spin != -1)
        throw std::invalid_argument("spin projection must be +1 or -1");
    return static_cast<double>(q.l) + (1.0 - q.spin) / 2.0;
}

ReductionResult reduce(const PhysicalParams& p, const QuantumNumbers& q) {
    if (!(p.mass > 0.0))
        throw std::invalid_argument("mass must be positive");
    const double gs = gamma_of(q);
    const double ok = p.omega * p.k;
    if (ok == 0.0)
        throw ZeroHarmonicTerm(
            "Omega * k == 0: the effective harmonic term vanishes and the "
            "dimensionless oscillator form does not exist");

    // zeta = lambda * rho turns the harmonic coefficient 2 m Omega^2 k^2
    // into 1; lambda^4 = 2 m Omega^2 k^2.
    const double lambda =
        std::pow(2.0 * p.mass, 0.25) * std::sqrt(std::abs(ok));

    ReductionResult r;
    r.lambda = lambda;
    // Matching the 1/zeta terms: lambda * b = -2 m f, so an attractive
    // physical coupling (f < 0) gives b > 0.
    r.problem.b = -2.0 * p.mass * p.f / lambda;
    r.problem.gamma = std::abs(gs);
    r.energy_scale = lambda * lambda / (2.0 * p.mass);
    // W = [2 m E + 2 Omega k gamma_s - (k + s Omega/2)^2] / lambda^2; the
    // offset below is the bracketed shift divided by 2m, so that
    // E = energy_scale * W - energy_offset.
    const double axial = p.k + q.spin * p.omega / 2.0;
    r.energy_offset = (2.0 * ok * gs - axial * axial) / (2.0 * p.mass);
    return r;
}

double energy_from_W(double W, const ReductionResult& r,
                     const PhysicalParams& p, const QuantumNumbers& q) {
    const double gs = gamma_of(q);
    const double axial = p.k + q.spin * p.omega / 2.0;
    return (W * r.lambda * r.lambda - 2.0 * p.omega * p.k * gs +
            axial * axial) /
           (2.0 * p.mass);
}

Diagnosis diagnose(const PhysicalParams& p) {
    Diagnosis d;
    d.three_d_bound_states = false;
    std::ostringstream msg;
    msg << "No three-dimensional bound states exist for any parameter "
           "choice: the axial motion is a free plane wave, so the full wave "
           "function is never square integrable along the dislocation axis. ";
    if (p.omega * p.k != 0.0) {
        d.planar_bound_states = PlanarBoundStates::AllParameters;
        msg << "The planar problem carries an effective harmonic confinement "
               "(Omega * k != 0), so its radial spectrum is discrete for "
               "every coupling f.";
    } else {
        d.planar_bound_states = PlanarBoundStates::OnlyAttractiveF;
        msg << "With Omega * k == 0 the planar confinement disappears; "
               "radial bound states survive only for an attractive Coulomb "
               "coupling f < 0.";
    }
    d.message = msg.str();
    return d;
}

std::vector<double> coulomb_limit_spectrum(const PhysicalParams& p,
                                           const QuantumNumbers& q,
                                           int n_max) {
    if (p.k != 0.0)
        throw NotCoulombRegime("Coulomb limit requires k == 0");
    if (!(p.f < 0.0))
        throw NotCoulombRegime("Coulomb limit requires attractive f < 0");
    if (!(p.mass > 0.0))
        throw std::invalid_argument("mass must be positive");
    if (n_max < 0)
        throw std::invalid_argument("n_max must be non-negative");
    const double gamma = std::abs(gamma_of(q));
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double denom = n + gamma + 0.5;
        out.push_back(-p.mass * p.f * p.f / (2.0 * denom * denom) +
                      p.omega * p.omega / (8.0 * p.mass));
    }
    return out;
}

}  // namespace heunspec
