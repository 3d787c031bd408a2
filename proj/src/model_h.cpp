#include "nsms/model_h.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nsms {

DoubleWell DoubleWell::quartic() {
    auto f = [](double c) { return c * c * (1.0 - c) * (1.0 - c); };
    auto fp = [](double c) { return 2.0 * c * (1.0 - c) * (1.0 - 2.0 * c); };
    auto fpp = [](double c) { return 2.0 * (6.0 * c * c - 6.0 * c + 1.0); };
    // max f'' over [-0.2, 1.2] sits at the endpoints: 2*(6*0.04 + 1.2 + 1) = 4.88.
    return DoubleWell(f, fp, fpp, 2.0 * 4.88);
}

std::pair<ScalarField, ScalarField> ch_step(const SpectralOps& ops, const DiffuseState& state, double dt,
                                            const DoubleWell& well) {
    const Grid& g = state.c.grid();
    const int n = g.n;
    const double eps = state.eps;
    const double m = state.m_eps;
    const double s_stab = well.stabilization();

    // div(c v), dealiased.
    Spectrum tr(g.cells());
    {
        Spectrum px = ops.forward(hadamard(state.c, state.v.x));
        Spectrum py = ops.forward(hadamard(state.c, state.v.y));
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const std::size_t id = g.idx(ix, iy);
                if (!ops.mode_in_band(ix, iy)) {
                    tr[id] = 0.0;
                    continue;
                }
                const std::complex<double> a = px[id];
                const std::complex<double> b = py[id];
                tr[id] = std::complex<double>(-ops.dk(ix) * a.imag() - ops.dk(iy) * b.imag(),
                                              ops.dk(ix) * a.real() + ops.dk(iy) * b.real());
            }
        }
    }

    ScalarField fp_field(g);
    for (std::size_t i = 0; i < fp_field.size(); ++i) fp_field[i] = well.fp(state.c[i]);

    Spectrum c_hat = ops.forward(state.c);
    Spectrum fp_hat = ops.forward(fp_field);
    Spectrum c_new_hat(g.cells()), mu_hat(g.cells());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            const double k2 = ops.ksq(ix, iy);
            if (k2 == 0.0) {
                c_new_hat[id] = c_hat[id];  // conserved mode, copied verbatim
                mu_hat[id] = fp_hat[id] / eps;
                continue;
            }
            const double denom = 1.0 / dt + m * k2 * (s_stab / eps) + m * eps * k2 * k2;
            const std::complex<double> num =
                c_hat[id] / dt - tr[id] - (m * k2 / eps) * fp_hat[id] + (m * k2 * s_stab / eps) * c_hat[id];
            c_new_hat[id] = num / denom;
            mu_hat[id] = fp_hat[id] / eps + (s_stab / eps) * (c_new_hat[id] - c_hat[id]) + eps * k2 * c_new_hat[id];
        }
    }
    return {ops.inverse(c_new_hat), ops.inverse(mu_hat)};
}

DiffuseState nsch_step(const SpectralOps& ops, const DiffuseState& state, double dt, const DoubleWell& well,
                       double nu_minus, double nu_plus, const NsStepConfig& momentum_cfg) {
    const Grid& g = state.c.grid();
    auto [c_new, mu_eps] = ch_step(ops, state, dt, well);

    // Capillary force mu grad c with the c the transport saw.
    const VectorField grad_c = ops.gradient(state.c);
    VectorField force{hadamard(mu_eps, grad_c.x), hadamard(mu_eps, grad_c.y)};

    DiffuseState next;
    next.c = std::move(c_new);
    next.eps = state.eps;
    next.m_eps = state.m_eps;
    next.t = state.t + dt;

    const double nu_lo = std::min(nu_minus, nu_plus);
    const double nu_hi = std::max(nu_minus, nu_plus);
    if (nu_hi - nu_lo <= 1e-14 * nu_hi) {
        // Constant viscosity: the implicit operator is diagonal in frequency.
        const double nu = nu_minus;
        const int n = g.n;
        VectorField conv(g);
        {
            const auto jac = ops.jacobian(state.v);
            for (std::size_t i = 0; i < conv.x.size(); ++i) {
                conv.x[i] = state.v.x[i] * jac[0][i] + state.v.y[i] * jac[1][i];
                conv.y[i] = state.v.x[i] * jac[2][i] + state.v.y[i] * jac[3][i];
            }
        }
        VectorField rhs = (1.0 / dt) * state.v - conv + force;
        Spectrum sx = ops.forward(rhs.x);
        Spectrum sy = ops.forward(rhs.y);
        const std::vector<double>& inv = ops.inv_ksq();
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const std::size_t id = g.idx(ix, iy);
                if (!ops.mode_in_band(ix, iy)) {
                    sx[id] = 0.0;
                    sy[id] = 0.0;
                    continue;
                }
                if (inv[id] != 0.0) {
                    const double kx = ops.dk(ix);
                    const double ky = ops.dk(iy);
                    const std::complex<double> d = (kx * sx[id] + ky * sy[id]) * inv[id];
                    sx[id] -= kx * d;
                    sy[id] -= ky * d;
                }
                const double w = 1.0 / (1.0 / dt + nu * ops.ksq(ix, iy));
                sx[id] *= w;
                sy[id] *= w;
            }
        }
        next.v = VectorField{ops.inverse(sx), ops.inverse(sy)};
    } else {
        ScalarField nu_field(g);
        for (std::size_t i = 0; i < nu_field.size(); ++i)
            nu_field[i] = std::clamp(nu_minus + (nu_plus - nu_minus) * state.c[i], nu_lo, nu_hi);
        NsStepConfig cfg = momentum_cfg;
        cfg.h = dt;
        next.v = momentum_step(ops, state.v, force, nu_field, cfg).v_new;
    }
    return next;
}

double ginzburg_landau_energy(const SpectralOps& ops, const ScalarField& c, double eps, const DoubleWell& well) {
    const VectorField grad = ops.gradient(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        acc += 0.5 * eps * (grad.x[i] * grad.x[i] + grad.y[i] * grad.y[i]) + well.f(c[i]) / eps;
    }
    return acc * c.grid().cell_area();
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb, double fm,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

}  // namespace

double modica_mortola_kappa(const DoubleWell& well) {
    auto integrand = [&well](double s) { return std::sqrt(2.0 * std::max(well.f(s), 0.0)); };
    return integrate(integrand, 0.0, 1.0, 1e-11);
}

ScalarField discrepancy(const SpectralOps& ops, const ScalarField& c, double eps, const DoubleWell& well) {
    const VectorField grad = ops.gradient(c);
    ScalarField xi(c.grid());
    for (std::size_t i = 0; i < c.size(); ++i)
        xi[i] = 0.5 * eps * (grad.x[i] * grad.x[i] + grad.y[i] * grad.y[i]) - well.f(c[i]) / eps;
    return xi;
}

ScalarField w_transform(const ScalarField& c, const DoubleWell& well) {
    auto integrand = [&well](double s) {
        return std::sqrt(2.0 * std::max(std::min(well.f(s), 1.0 + s * s), 0.0));
    };
    // Node grid with spacing 1/2048, aligned so that 0 and 1 are nodes.
    const double step = 1.0 / 2048.0;
    const long lo_i = static_cast<long>(std::floor(std::min(0.0, c.min()) / step)) - 1;
    const long hi_i = static_cast<long>(std::ceil(std::max(1.0, c.max()) / step)) + 1;
    const std::size_t count = static_cast<std::size_t>(hi_i - lo_i + 1);
    std::vector<double> node_w(count, 0.0);
    // Cumulative quadrature from node 0 upward/downward so W(0) = 0 exactly.
    const long zero_off = -lo_i;
    for (long i = zero_off + 1; i < static_cast<long>(count); ++i) {
        const double a = (lo_i + i - 1) * step;
        const double b = (lo_i + i) * step;
        node_w[i] = node_w[i - 1] + integrate(integrand, a, b, 1e-13);
    }
    for (long i = zero_off - 1; i >= 0; --i) {
        const double a = (lo_i + i) * step;
        const double b = (lo_i + i + 1) * step;
        node_w[i] = node_w[i + 1] - integrate(integrand, a, b, 1e-13);
    }
    // Monotone cubic Hermite slopes (Fritsch-Carlson limiter).
    std::vector<double> slope(count, 0.0);
    std::vector<double> d(count - 1);
    for (std::size_t i = 0; i + 1 < count; ++i) d[i] = (node_w[i + 1] - node_w[i]) / step;
    slope[0] = d[0];
    slope[count - 1] = d[count - 2];
    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (d[i - 1] * d[i] <= 0.0)
            slope[i] = 0.0;
        else
            slope[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);  // harmonic mean keeps monotonicity
    }

    ScalarField w(c.grid());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double pos = (c[j] - lo_i * step) / step;
        std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(count - 2)));
        const double t = pos - static_cast<double>(i);
        if (t == 0.0) {
            w[j] = node_w[i];
            continue;
        }
        const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        const double h10 = t * (1.0 - t) * (1.0 - t);
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = t * t * (t - 1.0);
        w[j] = h00 * node_w[i] + h10 * step * slope[i] + h01 * node_w[i + 1] + h11 * step * slope[i + 1];
    }
    return w;
}

}  // namespace nsms
