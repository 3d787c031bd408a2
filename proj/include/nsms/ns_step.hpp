#ifndef NSMS_NS_STEP_HPP
#define NSMS_NS_STEP_HPP

#include "nsms/errors.hpp"
#include "nsms/hneg.hpp"
#include "nsms/phase.hpp"
#include "nsms/spectral.hpp"

namespace nsms {

struct NsStepConfig {
    double h = 1e-3;
    double picard_tol = 1e-8;
    int picard_max = 50;
    double cg_tol = 1e-10;
    int cg_max = 400;
};

struct NsStepResult {
    VectorField v_new;
    int iterations = 0;
    double final_residual = 0.0;
    double kinetic_new = 0.0;
    double viscous_dissipation = 0.0;  // int nu |grad v|^2
    bool warning = false;              // cap reached, or residual rose along the way
};

// nu_minus + (nu_plus - nu_minus) * mollify(chi, delta), clamped to the
// closed interval spanned by the two viscosities.
ScalarField viscosity_field(const SpectralOps& ops, const BinaryPhase& chi, double nu_minus, double nu_plus,
                            double delta);

// One implicit step of the linearized momentum equation
//   (v - v~)/h + v~.grad v - div(nu grad v) + grad p = -chi grad mu,  div v = 0,
// Galerkin-projected onto the dealiased band. The convective term lags the
// advecting velocity v~ exactly as in the time-discrete system; the fixed
// point is reached by Picard iteration with an inner preconditioned CG solve
// of the symmetric part (constant-coefficient spectral preconditioner).
// Throws NoConvergenceError when picard_max is hit with residual above
// 10 * picard_tol. v_prev must be divergence-free and band-limited.
NsStepResult ns_step(const SpectralOps& ops, const VectorField& v_prev, const BinaryPhase& chi,
                     const ScalarField& mu, const ScalarField& nu, const NsStepConfig& cfg);

// Same implicit momentum step with an arbitrary forcing field in place of
// -chi grad mu (ns_step delegates here).
NsStepResult momentum_step(const SpectralOps& ops, const VectorField& v_prev, const VectorField& forcing,
                           const ScalarField& nu, const NsStepConfig& cfg);

// Project a velocity onto the divergence-free dealiased band (used to set up
// admissible initial data).
VectorField solenoidal_band_projection(const SpectralOps& ops, const VectorField& u);

// Discrete energy inequality of the step:
//   1/2 ||v||^2 + h int nu |grad v|^2 <= 1/2 ||v~||^2 - h int chi grad(mu).v + tol,
// with tol = 1e-8 (1 + |rhs|).
bool ns_energy_check(const SpectralOps& ops, const NsStepResult& result, const VectorField& v_prev,
                     const BinaryPhase& chi, const ScalarField& mu, const ScalarField& nu, double h);

}  // namespace nsms

#endif
