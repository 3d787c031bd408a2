#include "nsms/ns_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsms {

ScalarField viscosity_field(const SpectralOps& ops, const BinaryPhase& chi, double nu_minus, double nu_plus,
                            double delta) {
    if (!(nu_minus > 0.0) || !(nu_plus > 0.0))
        throw std::invalid_argument("viscosity_field: viscosities must be positive");
    ScalarField nu = ops.mollify(chi.to_field(), delta);
    const double lo = std::min(nu_minus, nu_plus);
    const double hi = std::max(nu_minus, nu_plus);
    for (std::size_t i = 0; i < nu.size(); ++i)
        nu[i] = std::clamp(nu_minus + (nu_plus - nu_minus) * nu[i], lo, hi);
    return nu;
}

namespace {

// Applies Leray projection and the band cut to a velocity spectrum in place.
void project_solenoidal_band(const SpectralOps& ops, Spectrum& sx, Spectrum& sy) {
    const Grid& g = ops.grid();
    const int n = g.n;
    const std::vector<double>& inv = ops.inv_ksq();
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            if (!ops.mode_in_band(ix, iy)) {
                sx[id] = 0.0;
                sy[id] = 0.0;
                continue;
            }
            if (inv[id] == 0.0) continue;
            const double kx = ops.dk(ix);
            const double ky = ops.dk(iy);
            const std::complex<double> d = (kx * sx[id] + ky * sy[id]) * inv[id];
            sx[id] -= kx * d;
            sy[id] -= ky * d;
        }
    }
}

VectorField project_solenoidal_band(const SpectralOps& ops, const VectorField& u) {
    Spectrum sx = ops.forward(u.x);
    Spectrum sy = ops.forward(u.y);
    project_solenoidal_band(ops, sx, sy);
    return {ops.inverse(sx), ops.inverse(sy)};
}

// u/h - div(nu grad u), projected onto the solenoidal band.
VectorField momentum_apply(const SpectralOps& ops, const VectorField& u, const ScalarField& nu, double h) {
    const Grid& g = ops.grid();
    const int n = g.n;
    const auto jac = ops.jacobian(u);
    ScalarField fxx = hadamard(nu, jac[0]);
    ScalarField fxy = hadamard(nu, jac[1]);
    ScalarField fyx = hadamard(nu, jac[2]);
    ScalarField fyy = hadamard(nu, jac[3]);
    Spectrum sxx = ops.forward(fxx);
    Spectrum sxy = ops.forward(fxy);
    Spectrum syx = ops.forward(fyx);
    Spectrum syy = ops.forward(fyy);
    Spectrum ux = ops.forward(u.x);
    Spectrum uy = ops.forward(u.y);
    const double inv_h = 1.0 / h;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            const double kx = ops.dk(ix);
            const double ky = ops.dk(iy);
            const auto mul_ik = [](double k, std::complex<double> v) {
                return std::complex<double>(-k * v.imag(), k * v.real());
            };
            ux[id] = inv_h * ux[id] - (mul_ik(kx, sxx[id]) + mul_ik(ky, sxy[id]));
            uy[id] = inv_h * uy[id] - (mul_ik(kx, syx[id]) + mul_ik(ky, syy[id]));
        }
    }
    project_solenoidal_band(ops, ux, uy);
    return {ops.inverse(ux), ops.inverse(uy)};
}

// Spectral inverse of the constant-coefficient operator u/h - nu_bar Laplace u,
// restricted to the solenoidal band so the Krylov space never leaves it.
VectorField preconditioner_apply(const SpectralOps& ops, const VectorField& r, double nu_bar, double h) {
    const Grid& g = ops.grid();
    const int n = g.n;
    Spectrum sx = ops.forward(r.x);
    Spectrum sy = ops.forward(r.y);
    project_solenoidal_band(ops, sx, sy);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            const double w = 1.0 / (1.0 / h + nu_bar * ops.ksq(ix, iy));
            sx[id] *= w;
            sy[id] *= w;
        }
    }
    return {ops.inverse(sx), ops.inverse(sy)};
}

// v~ . grad u with the product pushed back into the solenoidal band.
VectorField convection(const SpectralOps& ops, const VectorField& v_adv, const VectorField& u) {
    const auto jac = ops.jacobian(u);
    ScalarField cx(u.grid()), cy(u.grid());
    for (std::size_t i = 0; i < cx.size(); ++i) {
        cx[i] = v_adv.x[i] * jac[0][i] + v_adv.y[i] * jac[1][i];
        cy[i] = v_adv.x[i] * jac[2][i] + v_adv.y[i] * jac[3][i];
    }
    return project_solenoidal_band(ops, {cx, cy});
}

// Inner PCG for (u/h - div(nu grad u)) u = b on the solenoidal band.
VectorField solve_stokes(const SpectralOps& ops, const VectorField& b, const VectorField& u0, const ScalarField& nu,
                         double nu_bar, double h, double tol, int max_iter) {
    VectorField u = u0;
    VectorField r = b - momentum_apply(ops, u, nu, h);
    const double b_norm = b.l2_norm();
    if (b_norm == 0.0) return VectorField(b.grid());
    double r_norm = r.l2_norm();
    if (r_norm <= tol * b_norm) return u;
    VectorField z = preconditioner_apply(ops, r, nu_bar, h);
    VectorField p = z;
    double rz = inner(r, z);
    for (int it = 0; it < max_iter; ++it) {
        const VectorField ap = momentum_apply(ops, p, nu, h);
        const double p_ap = inner(p, ap);
        if (p_ap <= 0.0) break;  // operator is SPD; this means stagnation at rounding level
        const double alpha = rz / p_ap;
        u = u + alpha * p;
        r = r - alpha * ap;
        r_norm = r.l2_norm();
        if (r_norm <= tol * b_norm) return u;
        z = preconditioner_apply(ops, r, nu_bar, h);
        const double rz_new = inner(r, z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw NoConvergenceError("stokes solve: PCG stalled at relative residual " + std::to_string(r_norm / b_norm));
}

}  // namespace

VectorField solenoidal_band_projection(const SpectralOps& ops, const VectorField& u) {
    return project_solenoidal_band(ops, u);
}

NsStepResult momentum_step(const SpectralOps& ops, const VectorField& v_prev, const VectorField& forcing_raw,
                           const ScalarField& nu, const NsStepConfig& cfg) {
    const Grid& g = ops.grid();
    const double h = cfg.h;
    // One projection for the whole right-hand side; keeps the solve strictly
    // inside the solenoidal band even if v_prev carries rounding residue.
    const VectorField base = project_solenoidal_band(ops, (1.0 / h) * v_prev + forcing_raw);
    const double b_scale = std::max(base.l2_norm(), 1e-300);
    const double nu_bar = nu.mean();

    NsStepResult res;
    VectorField v = project_solenoidal_band(ops, v_prev);
    double prev_residual = std::numeric_limits<double>::infinity();
    int it = 0;
    double residual = 0.0;
    for (it = 1; it <= cfg.picard_max; ++it) {
        const VectorField rhs = base - convection(ops, v_prev, v);
        v = solve_stokes(ops, rhs, v, nu, nu_bar, h, cfg.cg_tol, cfg.cg_max);
        const VectorField defect = momentum_apply(ops, v, nu, h) + convection(ops, v_prev, v) - base;
        residual = defect.l2_norm() / b_scale;
        if (residual > prev_residual * (1.0 + 1e-12)) res.warning = true;
        prev_residual = residual;
        if (residual <= cfg.picard_tol) break;
    }
    if (it > cfg.picard_max) {
        it = cfg.picard_max;
        res.warning = true;
        if (residual > 10.0 * cfg.picard_tol)
            throw NoConvergenceError("ns_step: Picard residual " + std::to_string(residual) + " after " +
                                     std::to_string(cfg.picard_max) + " iterations");
    }

    res.v_new = v;
    res.iterations = it;
    res.final_residual = residual;
    res.kinetic_new = 0.5 * v.l2_norm_sq();
    const auto jac = ops.jacobian(v);
    double diss = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i)
        diss += nu[i] * (jac[0][i] * jac[0][i] + jac[1][i] * jac[1][i] + jac[2][i] * jac[2][i] +
                         jac[3][i] * jac[3][i]);
    res.viscous_dissipation = diss * g.cell_area();
    return res;
}

NsStepResult ns_step(const SpectralOps& ops, const VectorField& v_prev, const BinaryPhase& chi,
                     const ScalarField& mu, const ScalarField& nu, const NsStepConfig& cfg) {
    const VectorField grad_mu = ops.gradient(mu);
    VectorField f(ops.grid());
    for (std::size_t i = 0; i < f.x.size(); ++i) {
        const double c = chi[i];
        f.x[i] = -c * grad_mu.x[i];
        f.y[i] = -c * grad_mu.y[i];
    }
    return momentum_step(ops, v_prev, f, nu, cfg);
}

bool ns_energy_check(const SpectralOps& ops, const NsStepResult& result, const VectorField& v_prev,
                     const BinaryPhase& chi, const ScalarField& mu, const ScalarField& nu, double h) {
    const VectorField& v = result.v_new;
    const auto jac = ops.jacobian(v);
    double diss = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i)
        diss += nu[i] * (jac[0][i] * jac[0][i] + jac[1][i] * jac[1][i] + jac[2][i] * jac[2][i] +
                         jac[3][i] * jac[3][i]);
    diss *= chi.grid().cell_area();

    const VectorField grad_mu = ops.gradient(mu);
    double work = 0.0;
    for (std::size_t i = 0; i < grad_mu.x.size(); ++i)
        work += chi[i] * (grad_mu.x[i] * v.x[i] + grad_mu.y[i] * v.y[i]);
    work *= chi.grid().cell_area();

    const double lhs = 0.5 * v.l2_norm_sq() + h * diss;
    const double rhs = 0.5 * v_prev.l2_norm_sq() - h * work;
    return lhs <= rhs + 1e-8 * (1.0 + std::abs(rhs));
}

}  // namespace nsms
