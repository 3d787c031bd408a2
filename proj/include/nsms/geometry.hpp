#ifndef NSMS_GEOMETRY_HPP
#define NSMS_GEOMETRY_HPP

#include <span>

#include "nsms/errors.hpp"
#include "nsms/hneg.hpp"
#include "nsms/phase.hpp"
#include "nsms/spectral.hpp"

namespace nsms {

// Cells with |grad chi_delta| below this fraction of the maximum carry no
// reliable normal and are treated as interface-free.
inline constexpr double kNormalFloor = 1e-3;
// Positive floor for the volume-constraint denominator.
inline constexpr double kLambdaDenomFloor = 1e-8;

struct GeometryReport {
    double perimeter = 0.0;
    ScalarField curvature;
    VectorField normal;
};

// Mollified total variation integral |grad(chi * G_delta)|. Computed by a
// real-space convolution with the (truncated) kernel plus a sorted reduction,
// which makes the value exactly invariant under cyclic shifts of chi; the
// truncation sits many standard deviations out, far below rounding.
double perimeter(const SpectralOps& ops, const BinaryPhase& chi, double delta);

// First variation of the mollified perimeter along eta:
// integral (div eta - n . (grad eta) n) |grad chi_delta|, with the mollified
// unit normal zeroed wherever |grad chi_delta| is below the floor.
double first_variation(const SpectralOps& ops, const BinaryPhase& chi, const VectorField& eta, double delta);

// The volume-constraint test field xi = grad psi with Laplace(psi) =
// chi_delta - mean(chi_delta).
VectorField step4_field(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi, double delta);

// lambda = (int chi div xi)^-1 [ kappa * dP(chi)(xi) - int chi div(xi mu0) ]
// using the step4 test field. Throws DegeneratePhaseError when the
// denominator is below its floor.
double lagrange_multiplier(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi,
                           const ScalarField& mu0, double delta, double kappa = 1.0);

// max over test fields of |dP(chi)(eta) - int chi div(mu eta)| / (1 + |eta|_C1).
// Empty test set gives 0.
double gibbs_thomson_residual(const SpectralOps& ops, const BinaryPhase& chi, const ScalarField& mu, double delta,
                              std::span<const VectorField> test_fields);

// -div of the normalized mollified gradient, masked to the interface band.
ScalarField curvature_field(const SpectralOps& ops, const BinaryPhase& chi, double delta);

GeometryReport geometry_report(const SpectralOps& ops, const BinaryPhase& chi, double delta);

}  // namespace nsms

#endif
