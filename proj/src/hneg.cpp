#include "nsms/hneg.hpp"

#include <cmath>

namespace nsms {

HNegWorkspace::HNegWorkspace(const SpectralOps& ops) : ops_(ops), inv_symbol_(ops.inv_ksq()) {}

void HNegWorkspace::check_mean_zero(const ScalarField& f) const {
    const double m = std::abs(f.mean());
    if (m > kCompatTol * f.max_abs())
        throw CompatibilityError("inverse Laplacian needs a mean-zero right-hand side, mean = " + std::to_string(m));
}

ScalarField HNegWorkspace::inv_neg_laplacian(const ScalarField& f) const {
    check_mean_zero(f);
    Spectrum s = ops_.forward(f);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= inv_symbol_[i];
    return ops_.inverse(s);
}

double HNegWorkspace::hneg_norm_sq(const ScalarField& f) const {
    check_mean_zero(f);
    Spectrum s = ops_.forward(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += inv_symbol_[i] * std::norm(s[i]);
    const Grid& g = ops_.grid();
    return acc * g.cell_area() / static_cast<double>(g.cells());
}

double HNegWorkspace::hneg_norm(const ScalarField& f) const { return std::sqrt(hneg_norm_sq(f)); }

double HNegWorkspace::duality_product(const ScalarField& f, const ScalarField& g) const {
    check_mean_zero(g);
    Spectrum sf = ops_.forward(f);
    Spectrum sg = ops_.forward(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < sf.size(); ++i) {
        const std::complex<double> p = sf[i] * std::conj(sg[i]);
        acc += inv_symbol_[i] * p.real();
    }
    const Grid& gr = ops_.grid();
    return acc * gr.cell_area() / static_cast<double>(gr.cells());
}

VectorField HNegWorkspace::leray_project(const VectorField& u) const {
    const int n = ops_.n();
    const Grid& g = ops_.grid();
    Spectrum sx = ops_.forward(u.x);
    Spectrum sy = ops_.forward(u.y);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            const double inv = inv_symbol_[id];
            if (inv == 0.0) continue;  // constant and corner modes are already divergence-free
            const double kx = ops_.dk(ix);
            const double ky = ops_.dk(iy);
            const std::complex<double> d = (kx * sx[id] + ky * sy[id]) * inv;
            sx[id] -= kx * d;
            sy[id] -= ky * d;
        }
    }
    return {ops_.inverse(sx), ops_.inverse(sy)};
}

}  // namespace nsms
