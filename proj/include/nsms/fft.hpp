#ifndef NSMS_FFT_HPP
#define NSMS_FFT_HPP

#include <complex>
#include <vector>

namespace nsms {

// Thin RAII wrapper over FFTW complex 2D transforms of size n x n.
// Convention: forward is the unnormalized DFT, inverse carries the 1/n^2.
// Plans are created with FFTW_ESTIMATE so planning is deterministic; execution
// goes through the new-array interface, so one plan serves many buffers.
class Fft2D {
  public:
    explicit Fft2D(int n);
    ~Fft2D();

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int n() const { return n_; }

    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

  private:
    int n_;
    void* plan_fwd_;
    void* plan_bwd_;
};

}  // namespace nsms

#endif
