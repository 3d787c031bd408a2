#ifndef NSMS_HNEG_HPP
#define NSMS_HNEG_HPP

#include "nsms/errors.hpp"
#include "nsms/grid.hpp"
#include "nsms/spectral.hpp"

namespace nsms {

// Inverse negative Laplacian on mean-zero fields, the H^-1 norm that goes
// with it, and the Leray projection. On the torus the Neumann Laplacian of
// the continuum formulation becomes the periodic Laplacian restricted to the
// mean-zero subspace, so the inversion is exact mode by mode.
class HNegWorkspace {
  public:
    explicit HNegWorkspace(const SpectralOps& ops);

    const SpectralOps& ops() const { return ops_; }

    // Relative mean-zero tolerance for compatibility checks.
    static constexpr double kCompatTol = 1e-10;

    // u with -Laplace(u) = f and mean(u) = 0. Throws CompatibilityError when
    // |mean(f)| > kCompatTol * max|f|.
    ScalarField inv_neg_laplacian(const ScalarField& f) const;

    // || f ||_{H^-1} = || grad (-Laplace)^-1 f ||_{L^2}, evaluated through the
    // symbol table (identical to the gradient route in exact arithmetic).
    double hneg_norm(const ScalarField& f) const;
    double hneg_norm_sq(const ScalarField& f) const;

    // <f, (-Laplace)^-1 g> under the cell quadrature.
    double duality_product(const ScalarField& f, const ScalarField& g) const;

    // Remove the gradient part: u - grad (-Laplace)^-1 (-div u).
    VectorField leray_project(const VectorField& u) const;

  private:
    void check_mean_zero(const ScalarField& f) const;

    const SpectralOps& ops_;
    // 1/|k~|^2 with zero at the k~ = 0 modes; owned copy, immutable after
    // construction.
    std::vector<double> inv_symbol_;
};

}  // namespace nsms

#endif
