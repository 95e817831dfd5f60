#pragma once

#include <stdexcept>
#include <string>

namespace heunspec {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Angular quantum numbers of the planar problem. `spin` is the two-valued
// spin projection s = +1 or s = -1.
struct QuantumNumbers {
    int l = 0;
    int spin = +1;
};

// Parameters of the physical planar Hamiltonian: mass m, rotation frequency
// Omega, dislocation (screw) parameter k, and Coulomb-type coupling f.
struct PhysicalParams {
    double mass = 1.0;
    double omega = 0.0;
    double k = 0.0;
    double f = 0.0;
};

// Dimensionless radial problem
//
//   R'' + R'/zeta - (gamma^2/zeta^2) R - zeta^2 R + (b/zeta) R + W R = 0
//
// on (0, inf) with norm  integral |R|^2 zeta dzeta.  The Coulomb-like term
// is attractive for b > 0.  gamma >= 0 is the effective centrifugal index.
struct DimensionlessProblem {
    double gamma = 0.0;
    double b = 0.0;
};

// Outcome of mapping physics to the dimensionless problem.  Eigenvalues W of
// the dimensionless equation map back to physical energies through
//
//   E = energy_scale * W - energy_offset.
struct ReductionResult {
    DimensionlessProblem problem;
    double lambda = 0.0;        // radial scale factor, zeta = lambda * rho
    double energy_scale = 0.0;  // lambda^2 / (2 m)
    double energy_offset = 0.0;
};

enum class Method { Truncation, Variational, RPM, Oracle };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Truncation: return "truncation";
        case Method::Variational: return "variational";
        case Method::RPM: return "rpm";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

// One eigenvalue estimate.  `order` is the resolution parameter of the method
// that produced it (basis size N, Hankel dimension D, truncation degree n, or
// oracle refinement level) and `error_gauge` is that method's own error
// indicator; both are method-specific and documented with each method.
struct EigenvalueEstimate {
    int index = 0;
    double W = 0.0;
    Method method = Method::Oracle;
    int order = 0;
    double error_gauge = 0.0;
};

// Qualitative classification of the bound-state content of the physical
// problem.
enum class PlanarBoundStates {
    AllParameters,      // harmonic confinement present: bound for every f
    OnlyAttractiveF,    // no confinement: bound states require f < 0
};

struct Diagnosis {
    bool three_d_bound_states = false;  // never true: free axial motion
    PlanarBoundStates planar_bound_states = PlanarBoundStates::AllParameters;
    std::string message;
};

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

// The harmonic term of the reduction vanishes (Omega * k == 0); the
// dimensionless form does not exist.
struct ZeroHarmonicTerm : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Coulomb-limit formulas were requested outside their regime (k != 0 or
// f >= 0).
struct NotCoulombRegime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A weighted Gaussian moment integral diverges (exponent <= -1).
struct DivergentMoment : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The overlap matrix lost positive definiteness at the working precision.
struct IllConditionedBasis : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Hankel determinant was requested from a series with too few coefficients.
struct SeriesTooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The sequence of Hankel determinant roots did not stabilise for the number
// of states requested.
struct InsufficientStableRoots : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A shooting scan failed to bracket the requested state.
struct BracketNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The physical parameters admit no bound state in the requested channel.
struct NoBoundState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical integration left the representable range.
struct OverflowGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace heunspec
