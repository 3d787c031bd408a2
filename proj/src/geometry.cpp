#include "nsms/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "nsms/kernels.hpp"

namespace nsms {

namespace {

int perimeter_window_radius(const Grid& g, double delta) {
    const int by_delta = static_cast<int>(std::ceil(9.0 * delta / g.dx()));
    return std::min(by_delta, (g.n - 1) / 2);
}

struct InterfaceGeometry {
    ScalarField gx, gy;   // grad of mollified chi
    ScalarField weight;   // |grad chi_delta|
    ScalarField nx, ny;   // unit normal, zero below the floor
    double floor = 0.0;
};

InterfaceGeometry interface_geometry(const SpectralOps& ops, const BinaryPhase& chi, double delta) {
    InterfaceGeometry geo;
    VectorField grad = ops.gradient(ops.mollify(chi.to_field(), delta));
    geo.gx = grad.x;
    geo.gy = grad.y;
    geo.weight = ScalarField(chi.grid());
    geo.nx = ScalarField(chi.grid());
    geo.ny = ScalarField(chi.grid());
    double wmax = 0.0;
    for (std::size_t i = 0; i < geo.weight.size(); ++i) {
        geo.weight[i] = std::sqrt(geo.gx[i] * geo.gx[i] + geo.gy[i] * geo.gy[i]);
        wmax = std::max(wmax, geo.weight[i]);
    }
    geo.floor = kNormalFloor * wmax;
    for (std::size_t i = 0; i < geo.weight.size(); ++i) {
        if (geo.weight[i] > geo.floor) {
            geo.nx[i] = geo.gx[i] / geo.weight[i];
            geo.ny[i] = geo.gy[i] / geo.weight[i];
        }
    }
    return geo;
}

double first_variation_with(const SpectralOps& ops, const InterfaceGeometry& geo, const BinaryPhase& chi,
                            const VectorField& eta) {
    const ScalarField div_eta = ops.divergence(eta);
    const auto jac = ops.jacobian(eta);  // d(eta_x)/dx, d(eta_x)/dy, d(eta_y)/dx, d(eta_y)/dy
    double acc = 0.0;
    for (std::size_t i = 0; i < div_eta.size(); ++i) {
        const double nx = geo.nx[i];
        const double ny = geo.ny[i];
        const double ndn = nx * (jac[0][i] * nx + jac[1][i] * ny) + ny * (jac[2][i] * nx + jac[3][i] * ny);
        acc += (div_eta[i] - ndn) * geo.weight[i];
    }
    return acc * chi.grid().cell_area();
}

}  // namespace

double perimeter(const SpectralOps& ops, const BinaryPhase& chi, double delta) {
    const Grid& g = chi.grid();
    const int n = g.n;
    const int mask = n - 1;
    const int rad = perimeter_window_radius(g, delta);
    const int w = 2 * rad + 1;

    const GradMollifyKernel kern = build_grad_mollify_kernel(ops, delta);
    // Window copies so the hot loop indexes contiguously.
    std::vector<double> kwx(static_cast<std::size_t>(w) * w), kwy(kwx.size());
    for (int dy = -rad; dy <= rad; ++dy) {
        for (int dx = -rad; dx <= rad; ++dx) {
            const std::size_t src = g.idx((dx + n) & mask, (dy + n) & mask);
            const std::size_t dst = static_cast<std::size_t>(dy + rad) * w + (dx + rad);
            kwx[dst] = kern.kx[src];
            kwy[dst] = kern.ky[src];
        }
    }

    const std::vector<std::uint8_t>& c = chi.cells();
    std::vector<double> mag(g.cells());
    for (int yo = 0; yo < n; ++yo) {
        for (int xo = 0; xo < n; ++xo) {
            double gx = 0.0, gy = 0.0;
            std::size_t kid = 0;
            for (int dy = -rad; dy <= rad; ++dy) {
                const std::size_t row = static_cast<std::size_t>((yo - dy + n) & mask) * n;
                for (int dx = -rad; dx <= rad; ++dx, ++kid) {
                    if (c[row + ((xo - dx + n) & mask)]) {
                        gx += kwx[kid];
                        gy += kwy[kid];
                    }
                }
            }
            mag[g.idx(xo, yo)] = std::sqrt(gx * gx + gy * gy);
        }
    }
    // Shift-independent reduction: the magnitudes are a permutation under
    // cyclic shifts, so summing them in sorted order gives identical bits.
    std::sort(mag.begin(), mag.end());
    double acc = 0.0;
    for (double v : mag) acc += v;
    return acc * g.cell_area();
}

double first_variation(const SpectralOps& ops, const BinaryPhase& chi, const VectorField& eta, double delta) {
    const InterfaceGeometry geo = interface_geometry(ops, chi, delta);
    return first_variation_with(ops, geo, chi, eta);
}

VectorField step4_field(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi, double delta) {
    ScalarField chid = ops.mollify(chi.to_field(), delta);
    const double bar = chid.mean();
    ScalarField rhs(chi.grid());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -(chid[i] - bar);
    // psi solves Laplace(psi) = chi_delta - mean, i.e. -Laplace(psi) = -rhs.
    ScalarField psi = hneg.inv_neg_laplacian(rhs);
    return ops.gradient(psi);
}

double lagrange_multiplier(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi,
                           const ScalarField& mu0, double delta, double kappa) {
    const VectorField xi = step4_field(ops, hneg, chi, delta);
    const ScalarField chif = chi.to_field();
    const double denom = inner(chif, ops.divergence(xi));
    if (std::abs(denom) < kLambdaDenomFloor)
        throw DegeneratePhaseError("lagrange_multiplier: volume-constraint denominator " + std::to_string(denom) +
                                   " below floor");
    const VectorField xi_mu{hadamard(xi.x, mu0), hadamard(xi.y, mu0)};
    const double num = kappa * first_variation(ops, chi, xi, delta) - inner(chif, ops.divergence(xi_mu));
    return num / denom;
}

double gibbs_thomson_residual(const SpectralOps& ops, const BinaryPhase& chi, const ScalarField& mu, double delta,
                              std::span<const VectorField> test_fields) {
    if (test_fields.empty()) return 0.0;
    const InterfaceGeometry geo = interface_geometry(ops, chi, delta);
    const ScalarField chif = chi.to_field();
    double worst = 0.0;
    for (const VectorField& eta : test_fields) {
        const double fv = first_variation_with(ops, geo, chi, eta);
        const VectorField mu_eta{hadamard(eta.x, mu), hadamard(eta.y, mu)};
        const double rhs = inner(chif, ops.divergence(mu_eta));
        const auto jac = ops.jacobian(eta);
        double sup = 0.0, sup_grad = 0.0;
        for (std::size_t i = 0; i < eta.x.size(); ++i) {
            sup = std::max(sup, std::sqrt(eta.x[i] * eta.x[i] + eta.y[i] * eta.y[i]));
            sup_grad = std::max(sup_grad, std::sqrt(jac[0][i] * jac[0][i] + jac[1][i] * jac[1][i] +
                                                    jac[2][i] * jac[2][i] + jac[3][i] * jac[3][i]));
        }
        worst = std::max(worst, std::abs(fv - rhs) / (1.0 + sup + sup_grad));
    }
    return worst;
}

ScalarField curvature_field(const SpectralOps& ops, const BinaryPhase& chi, double delta) {
    const InterfaceGeometry geo = interface_geometry(ops, chi, delta);
    // div(g/|g|) expanded by the quotient rule so every derivative acts on the
    // smooth mollified gradient, not on a thresholded quotient.
    const auto jac = ops.jacobian(VectorField{geo.gx, geo.gy});  // dgx/dx, dgx/dy, dgy/dx, dgy/dy
    ScalarField h(chi.grid());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double w = geo.weight[i];
        if (w <= geo.floor || w == 0.0) continue;
        const double gx = geo.gx[i], gy = geo.gy[i];
        const double div_g = jac[0][i] + jac[3][i];
        const double radial = gx * gx * jac[0][i] + gx * gy * (jac[1][i] + jac[2][i]) + gy * gy * jac[3][i];
        h[i] = -(div_g / w - radial / (w * w * w));
    }
    return h;
}

GeometryReport geometry_report(const SpectralOps& ops, const BinaryPhase& chi, double delta) {
    GeometryReport rep;
    rep.perimeter = perimeter(ops, chi, delta);
    rep.curvature = curvature_field(ops, chi, delta);
    const InterfaceGeometry geo = interface_geometry(ops, chi, delta);
    rep.normal = VectorField{geo.nx, geo.ny};
    return rep;
}

}  // namespace nsms
