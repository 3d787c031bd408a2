#ifndef NSMS_KERNELS_HPP
#define NSMS_KERNELS_HPP

#include <vector>

#include "nsms/spectral.hpp"

namespace nsms {

// Real-space image of the gradient-of-mollifier multiplier: adding a unit
// cell at z shifts the mollified gradient by (kx, ky)(. - z). Tables are the
// exact inverse DFT of the spectral symbols, so updates through them agree
// with the transform path to rounding.
struct GradMollifyKernel {
    std::vector<double> kx;
    std::vector<double> ky;
};

GradMollifyKernel build_grad_mollify_kernel(const SpectralOps& ops, double delta);

// Column of (-Laplace)^-1 applied to a unit cell at the origin (zero mode
// dropped). Even under negation.
std::vector<double> build_green_table(const SpectralOps& ops);

}  // namespace nsms

#endif
