#include "nsms/spectral.hpp"

#include <array>
#include <cmath>

namespace nsms {

SpectralOps::SpectralOps(const Grid& g)
    : grid_(g), fft_(g.n), band_limit_(g.n / 3), dk_(g.n), inv_ksq_(g.cells()), in_band_(g.n) {
    const int n = g.n;
    const double two_pi_over_L = 2.0 * M_PI / g.L;
    for (int i = 0; i < n; ++i) {
        int k = (i <= n / 2) ? i : i - n;
        if (i == n / 2) k = 0;  // Nyquist derivative is ill-defined on real data
        dk_[i] = two_pi_over_L * k;
        int ks = (i <= n / 2) ? i : i - n;
        in_band_[i] = std::abs(ks) <= band_limit_ ? 1 : 0;
    }
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double k2 = ksq(ix, iy);
            inv_ksq_[g.idx(ix, iy)] = k2 > 0.0 ? 1.0 / k2 : 0.0;
        }
    }
}

Spectrum SpectralOps::forward(const ScalarField& f) const {
    Spectrum in(grid_.cells());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = f[i];
    Spectrum out(in.size());
    fft_.forward(in.data(), out.data());
    return out;
}

ScalarField SpectralOps::inverse(const Spectrum& s) const {
    Spectrum out(s.size());
    fft_.inverse(s.data(), out.data());
    ScalarField f(grid_);
    for (std::size_t i = 0; i < out.size(); ++i) f[i] = out[i].real();
    return f;
}

VectorField SpectralOps::gradient(const ScalarField& f) const {
    const int n = grid_.n;
    Spectrum s = forward(f);
    Spectrum gx(s.size()), gy(s.size());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = grid_.idx(ix, iy);
            const std::complex<double> v = s[id];
            gx[id] = std::complex<double>(-dk_[ix] * v.imag(), dk_[ix] * v.real());
            gy[id] = std::complex<double>(-dk_[iy] * v.imag(), dk_[iy] * v.real());
        }
    }
    return {inverse(gx), inverse(gy)};
}

ScalarField SpectralOps::divergence(const VectorField& u) const {
    const int n = grid_.n;
    Spectrum sx = forward(u.x);
    Spectrum sy = forward(u.y);
    Spectrum d(sx.size());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = grid_.idx(ix, iy);
            const std::complex<double> a = sx[id];
            const std::complex<double> b = sy[id];
            d[id] = std::complex<double>(-dk_[ix] * a.imag() - dk_[iy] * b.imag(),
                                         dk_[ix] * a.real() + dk_[iy] * b.real());
        }
    }
    return inverse(d);
}

ScalarField SpectralOps::laplacian(const ScalarField& f) const {
    const int n = grid_.n;
    Spectrum s = forward(f);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) s[grid_.idx(ix, iy)] *= -ksq(ix, iy);
    return inverse(s);
}

std::array<ScalarField, 4> SpectralOps::jacobian(const VectorField& u) const {
    const int n = grid_.n;
    Spectrum sx = forward(u.x);
    Spectrum sy = forward(u.y);
    Spectrum dxx(sx.size()), dxy(sx.size()), dyx(sx.size()), dyy(sx.size());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = grid_.idx(ix, iy);
            const auto mul_ik = [](double k, std::complex<double> v) {
                return std::complex<double>(-k * v.imag(), k * v.real());
            };
            dxx[id] = mul_ik(dk_[ix], sx[id]);
            dxy[id] = mul_ik(dk_[iy], sx[id]);
            dyx[id] = mul_ik(dk_[ix], sy[id]);
            dyy[id] = mul_ik(dk_[iy], sy[id]);
        }
    }
    return {inverse(dxx), inverse(dxy), inverse(dyx), inverse(dyy)};
}

std::vector<double> SpectralOps::gaussian_factors(double delta) const {
    const int n = grid_.n;
    const double two_pi_over_L = 2.0 * M_PI / grid_.L;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const int k = (i <= n / 2) ? i : i - n;  // true wavenumber, Nyquist kept
        const double kp = two_pi_over_L * k;
        g[i] = std::exp(-0.5 * delta * delta * kp * kp);
    }
    return g;
}

ScalarField SpectralOps::mollify(const ScalarField& f, double delta) const {
    const int n = grid_.n;
    const std::vector<double> g = gaussian_factors(delta);
    Spectrum s = forward(f);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) s[grid_.idx(ix, iy)] *= g[ix] * g[iy];
    return inverse(s);
}

void SpectralOps::project_band(Spectrum& s) const {
    const int n = grid_.n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (!mode_in_band(ix, iy)) s[grid_.idx(ix, iy)] = 0.0;
}

ScalarField SpectralOps::dealias(const ScalarField& f) const {
    Spectrum s = forward(f);
    project_band(s);
    return inverse(s);
}

VectorField SpectralOps::dealias(const VectorField& u) const { return {dealias(u.x), dealias(u.y)}; }

}  // namespace nsms
