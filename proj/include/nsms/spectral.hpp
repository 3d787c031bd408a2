#ifndef NSMS_SPECTRAL_HPP
#define NSMS_SPECTRAL_HPP

#include <array>
#include <complex>
#include <vector>

#include "nsms/fft.hpp"
#include "nsms/grid.hpp"

namespace nsms {

using Spectrum = std::vector<std::complex<double>>;

// Spectral calculus on the periodic grid. All derivative multipliers use the
// Nyquist-zeroed wavenumber table so that gradients of real fields stay real
// and the discrete integration-by-parts identities are exact; the Gaussian
// mollifier uses the true wavenumbers (its symbol is real and even, so
// realness is never at risk).
//
// Products of fields are formed pointwise; where aliasing matters the caller
// projects onto the 2/3 band with dealias()/project_band(). Velocity fields in
// the flow solvers live entirely inside that band.
class SpectralOps {
  public:
    explicit SpectralOps(const Grid& g);

    const Grid& grid() const { return grid_; }
    int n() const { return grid_.n; }
    int band_limit() const { return band_limit_; }

    // Derivative wavenumber (2*pi/L * k, Nyquist zeroed) for index i.
    double dk(int i) const { return dk_[i]; }
    // |k~|^2 at mode (ix, iy).
    double ksq(int ix, int iy) const { return dk_[ix] * dk_[ix] + dk_[iy] * dk_[iy]; }
    // 1 / |k~|^2 with the k~ = 0 modes set to zero.
    const std::vector<double>& inv_ksq() const { return inv_ksq_; }

    bool mode_in_band(int ix, int iy) const { return in_band_[ix] && in_band_[iy]; }

    Spectrum forward(const ScalarField& f) const;
    ScalarField inverse(const Spectrum& s) const;
    void forward_raw(const std::complex<double>* in, std::complex<double>* out) const { fft_.forward(in, out); }
    void inverse_raw(const std::complex<double>* in, std::complex<double>* out) const { fft_.inverse(in, out); }

    VectorField gradient(const ScalarField& f) const;
    ScalarField divergence(const VectorField& u) const;
    ScalarField laplacian(const ScalarField& f) const;
    // Jacobian entries (d f_x/dx, d f_x/dy, d f_y/dx, d f_y/dy).
    std::array<ScalarField, 4> jacobian(const VectorField& u) const;

    // Periodic convolution with a normalized Gaussian of standard deviation
    // delta, applied as a spectral multiplier. Preserves the mean exactly.
    ScalarField mollify(const ScalarField& f, double delta) const;

    // Zero every mode outside the 2/3 band (rule of thumb: keeps |k| <= n/3).
    ScalarField dealias(const ScalarField& f) const;
    VectorField dealias(const VectorField& u) const;
    void project_band(Spectrum& s) const;

    // exp(-delta^2 k^2 / 2) factors per index, separable in x and y.
    std::vector<double> gaussian_factors(double delta) const;

  private:
    Grid grid_;
    Fft2D fft_;
    int band_limit_;
    std::vector<double> dk_;
    std::vector<double> inv_ksq_;
    std::vector<char> in_band_;
};

}  // namespace nsms

#endif
