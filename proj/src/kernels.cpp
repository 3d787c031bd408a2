#include "nsms/kernels.hpp"

namespace nsms {

GradMollifyKernel build_grad_mollify_kernel(const SpectralOps& ops, double delta) {
    const Grid& g = ops.grid();
    const int n = g.n;
    const std::vector<double> gauss = ops.gaussian_factors(delta);
    Spectrum sx(g.cells()), sy(g.cells());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            const double w = gauss[ix] * gauss[iy];
            sx[id] = std::complex<double>(0.0, ops.dk(ix) * w);
            sy[id] = std::complex<double>(0.0, ops.dk(iy) * w);
        }
    }
    GradMollifyKernel k;
    ScalarField fx = ops.inverse(sx);
    ScalarField fy = ops.inverse(sy);
    k.kx.assign(fx.data(), fx.data() + g.cells());
    k.ky.assign(fy.data(), fy.data() + g.cells());
    return k;
}

std::vector<double> build_green_table(const SpectralOps& ops) {
    const Grid& g = ops.grid();
    Spectrum s(g.cells());
    const std::vector<double>& inv = ops.inv_ksq();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = inv[i];
    ScalarField c = ops.inverse(s);
    return std::vector<double>(c.data(), c.data() + g.cells());
}

}  // namespace nsms
