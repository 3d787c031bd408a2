#ifndef NSMS_MS_STEP_HPP
#define NSMS_MS_STEP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "nsms/errors.hpp"
#include "nsms/geometry.hpp"
#include "nsms/hneg.hpp"
#include "nsms/phase.hpp"
#include "nsms/spectral.hpp"

namespace nsms {

struct AnnealConfig {
    int sweeps = 40;
    double temp_init = 1e-3;
    double temp_decay = 0.85;
    std::uint64_t seed = 1;
    int no_improve_window = 8;
};

struct MsStepConfig {
    double h = 1e-3;
    double delta = 0.0;  // 0 means "2 dx"
    AnnealConfig anneal;
    // Surface tension and mobility; the time-discrete functional is
    // kappa * Per(sigma) + (1/(2 mobility h)) || sigma - chi~ + h v~.grad chi~ ||^2_{H^-1}.
    double kappa = 1.0;
    double mobility = 1.0;

    double resolved_delta(const Grid& g) const { return delta > 0.0 ? delta : 2.0 * g.dx(); }
};

struct MsStepResult {
    BinaryPhase chi_new;
    ScalarField mu0;
    double lambda = 0.0;
    double fh_initial = 0.0;
    double fh_final = 0.0;
    double perimeter_new = 0.0;
};

struct AnnealTraceRow {
    long iteration = 0;
    double fh = 0.0;
    bool accepted = false;
};

// Optional diagnostics from a minimize_fh run.
struct AnnealReport {
    bool collect_trace = false;
    std::vector<AnnealTraceRow> trace;
    // (incrementally maintained F, fresh spectral F) at every sweep boundary.
    std::vector<std::pair<double, double>> sweep_consistency;
    long proposals = 0;
    long accepted = 0;
    int sweeps_run = 0;
};

// v~.grad chi~ through the duality <v~.grad chi~, z> = -int chi~ v~ . grad z:
// returns -div(chi v) with the product dealiased. Mean-zero by construction.
// Caller guarantees div v = 0 (to 1e-10); not rechecked here.
ScalarField transport_term(const SpectralOps& ops, const BinaryPhase& chi, const VectorField& v);

// kappa * Per_delta(sigma) + (1/(2 mobility h)) || sigma - chi_prev + h T ||^2_{H^-1}.
// Throws MassMismatchError when the cell counts differ.
double fh_energy(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& sigma,
                 const BinaryPhase& chi_prev, const VectorField& v_prev, double h, double delta, double kappa = 1.0,
                 double mobility = 1.0);

// Simulated-annealing search over mass-preserving pair swaps of interface
// cells. The incumbent starts at chi_prev, so the result always satisfies
// F^h(result) <= F^h(chi_prev); bit-reproducible for a fixed seed.
BinaryPhase minimize_fh(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_prev,
                        const VectorField& v_prev, const MsStepConfig& cfg, AnnealReport* report = nullptr);

// mu0 = -(1/mobility) (-Laplace)^-1 ((chi_new - chi_prev)/h + v~.grad chi~),
// mean zero.
ScalarField chemical_potential(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_new,
                               const BinaryPhase& chi_prev, const VectorField& v_prev, double h,
                               double mobility = 1.0);

// One full Mullins-Sekerka minimizing movement: minimize F^h, then recover
// mu0 and the volume-constraint multiplier lambda.
MsStepResult ms_step(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_prev,
                     const VectorField& v_prev, const MsStepConfig& cfg, AnnealReport* report = nullptr);

}  // namespace nsms

#endif
