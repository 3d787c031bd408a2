#ifndef NSMS_MODEL_H_HPP
#define NSMS_MODEL_H_HPP

#include <functional>
#include <utility>

#include "nsms/hneg.hpp"
#include "nsms/ns_step.hpp"
#include "nsms/spectral.hpp"

namespace nsms {

// Double-well potential with first and second derivatives and a
// stabilization constant S >= max f'' over the iterate range.
class DoubleWell {
  public:
    DoubleWell(std::function<double(double)> f, std::function<double(double)> fp, std::function<double(double)> fpp,
               double stabilization)
        : f_(std::move(f)), fp_(std::move(fp)), fpp_(std::move(fpp)), s_(stabilization) {}

    double f(double c) const { return f_(c); }
    double fp(double c) const { return fp_(c); }
    double fpp(double c) const { return fpp_(c); }
    double stabilization() const { return s_; }

    // f(c) = c^2 (1-c)^2 with S = 2 max_{[-0.2, 1.2]} f''.
    static DoubleWell quartic();

  private:
    std::function<double(double)> f_, fp_, fpp_;
    double s_;
};

struct DiffuseState {
    ScalarField c;
    VectorField v;
    double eps = 0.0;    // interface width
    double m_eps = 1.0;  // mobility
    double t = 0.0;
};

// One stabilized semi-implicit Cahn-Hilliard step with transport by the
// current velocity:
//   (c+ - c)/dt + div(c v) = m Laplace mu^,
//   mu^ = f'(c)/eps + (S/eps)(c+ - c) - eps Laplace c+.
// The update is diagonal in frequency; the zero mode is copied verbatim so
// the mean is conserved bitwise. Returns (c_new, mu^).
std::pair<ScalarField, ScalarField> ch_step(const SpectralOps& ops, const DiffuseState& state, double dt,
                                            const DoubleWell& well);

// Full Model H step: Cahn-Hilliard first, then the momentum step with the
// capillary force in potential form mu grad c (equal to the tensor form up to
// a pressure gradient), lagged convection, Leray projection. Constant
// viscosity takes a direct spectral solve; a genuine viscosity contrast goes
// through the iterative momentum solver and can throw NoConvergenceError.
DiffuseState nsch_step(const SpectralOps& ops, const DiffuseState& state, double dt, const DoubleWell& well,
                       double nu_minus, double nu_plus, const NsStepConfig& momentum_cfg);

// E_eps(c) = (eps/2) int |grad c|^2 + (1/eps) int f(c).
double ginzburg_landau_energy(const SpectralOps& ops, const ScalarField& c, double eps, const DoubleWell& well);

// kappa = int_0^1 sqrt(2 f(s)) ds by adaptive quadrature (1e-10 absolute).
double modica_mortola_kappa(const DoubleWell& well);

// (eps/2)|grad c|^2 - f(c)/eps, pointwise.
ScalarField discrepancy(const SpectralOps& ops, const ScalarField& c, double eps, const DoubleWell& well);

// w = W(c) with W(c) = int_0^c sqrt(2 min(f, 1+s^2)), evaluated through a
// precomputed monotone cubic interpolant of the quadrature.
ScalarField w_transform(const ScalarField& c, const DoubleWell& well);

}  // namespace nsms

#endif
