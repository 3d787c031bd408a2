#include <doctest.h>

#include <cmath>

#include "nsms/hneg.hpp"
#include "nsms/prng.hpp"
#include "oracles.hpp"

using namespace nsms;

namespace {

ScalarField mean_zero_random(const Grid& g, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * rng.next_double() - 1.0;
    const double m = f.mean();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;
    return f;
}

ScalarField cos_x(const Grid& g) {
    ScalarField f(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) f.at(ix, iy) = std::cos(2.0 * M_PI * g.x(ix) / g.L);
    return f;
}

}  // namespace

TEST_CASE("inverse negative Laplacian on the analytic eigenmode") {
    Grid g(32, 1.0);
    SpectralOps ops(g);
    HNegWorkspace hneg(ops);
    ScalarField u = hneg.inv_neg_laplacian(cos_x(g));
    double worst = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            worst = std::max(worst, std::abs(u.at(ix, iy) - std::cos(2.0 * M_PI * g.x(ix)) / (4.0 * M_PI * M_PI)));
    CHECK(worst <= 1e-12);

    CHECK(hneg.inv_neg_laplacian(ScalarField(g)).max_abs() == 0.0);
    CHECK_THROWS_AS(hneg.inv_neg_laplacian(ScalarField(g, 0.5)), CompatibilityError);
}

TEST_CASE("hneg_norm analytic value, homogeneity, and zero") {
    for (int n : {32, 64}) {
        Grid g(n, 1.0);
        SpectralOps ops(g);
        HNegWorkspace hneg(ops);
        const double expected = 1.0 / (2.0 * M_PI * std::sqrt(2.0));
        CHECK(hneg.hneg_norm(cos_x(g)) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(hneg.hneg_norm(ScalarField(g)) == 0.0);

        ScalarField f = mean_zero_random(g, 5);
        ScalarField af = 3.25 * f;
        CHECK(hneg.hneg_norm(af) == doctest::Approx(3.25 * hneg.hneg_norm(f)).epsilon(1e-12));
    }
}

TEST_CASE("duality identity and Parseval consistency") {
    Grid g(32, 1.0);
    SpectralOps ops(g);
    HNegWorkspace hneg(ops);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ScalarField f = mean_zero_random(g, 100 + seed);
        const double n2 = hneg.hneg_norm_sq(f);
        CHECK(inner(f, hneg.inv_neg_laplacian(f)) == doctest::Approx(n2).epsilon(1e-10));
        // Gradient-route value.
        const VectorField grad = ops.gradient(hneg.inv_neg_laplacian(f));
        CHECK(grad.l2_norm_sq() == doctest::Approx(n2).epsilon(1e-12));
    }
}

TEST_CASE("hneg matches the dense spectral-sum oracle") {
    Grid g(16, 1.5);
    SpectralOps ops(g);
    HNegWorkspace hneg(ops);
    ScalarField f = mean_zero_random(g, 31);
    CHECK(hneg.hneg_norm_sq(f) == doctest::Approx(oracle::dense_hneg_norm_sq(g, f)).epsilon(1e-11));
    const ScalarField u = hneg.inv_neg_laplacian(f);
    const ScalarField u_ref = oracle::dense_inv_neg_laplacian(g, f);
    CHECK((u - u_ref).max_abs() <= 1e-11 * std::max(1.0, u_ref.max_abs()));
}

TEST_CASE("Leray projection annihilates gradients and keeps shears") {
    Grid g(32, 1.0);
    SpectralOps ops(g);
    HNegWorkspace hneg(ops);

    const VectorField grad = ops.gradient(mean_zero_random(g, 7));
    const VectorField killed = hneg.leray_project(grad);
    CHECK(killed.max_abs() <= 1e-12 * std::max(1.0, grad.max_abs()));

    VectorField shear(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) shear.x.at(ix, iy) = std::sin(2.0 * M_PI * g.y(iy));
    const VectorField same = hneg.leray_project(shear);
    CHECK((same - shear).max_abs() <= 1e-12);
}

TEST_CASE("Leray projection is a self-adjoint idempotent") {
    Grid g(32, 1.0);
    SpectralOps ops(g);
    HNegWorkspace hneg(ops);
    SplitMix64 rng(123);
    VectorField u(g), w(g);
    for (std::size_t i = 0; i < u.x.size(); ++i) {
        u.x[i] = 2.0 * rng.next_double() - 1.0;
        u.y[i] = 2.0 * rng.next_double() - 1.0;
        w.x[i] = 2.0 * rng.next_double() - 1.0;
        w.y[i] = 2.0 * rng.next_double() - 1.0;
    }
    const VectorField pu = hneg.leray_project(u);
    const VectorField ppu = hneg.leray_project(pu);
    CHECK((ppu - pu).max_abs() <= 1e-12);
    CHECK(inner(pu, w) == doctest::Approx(inner(u, hneg.leray_project(w))).epsilon(1e-11));
    // Projected fields are spectrally divergence-free.
    CHECK(ops.divergence(pu).max_abs() <= 1e-11);
}
