#include "nsms/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace nsms {

Fft2D::Fft2D(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Fft2D: n must be positive");
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // FFTW_UNALIGNED lets the plans run on any std::vector storage.
    plan_fwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("Fft2D: planning failed");
}

Fft2D::~Fft2D() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft2D::forward(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft2D::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / (static_cast<double>(n_) * n_);
    const std::size_t m = static_cast<std::size_t>(n_) * n_;
    for (std::size_t i = 0; i < m; ++i) out[i] *= scale;
}

}  // namespace nsms
