#ifndef NSMS_GRID_HPP
#define NSMS_GRID_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace nsms {

// Uniform periodic lattice on the square torus [0,L)^2.
// n is a power of two so the transforms stay radix-2.
struct Grid {
    int n = 0;
    double L = 0.0;

    Grid() = default;
    Grid(int n_, double L_);

    double dx() const { return L / n; }
    double cell_area() const { return dx() * dx(); }
    std::size_t cells() const { return static_cast<std::size_t>(n) * n; }

    // Row-major, x fastest.
    std::size_t idx(int ix, int iy) const { return static_cast<std::size_t>(iy) * n + ix; }
    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }
    double x(int ix) const { return ix * dx(); }
    double y(int iy) const { return iy * dx(); }

    bool operator==(const Grid& o) const { return n == o.n && L == o.L; }
};

// Real cell values on a Grid. Value semantics throughout; operations on
// fields return new fields and never mutate their inputs.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid_(g), v_(g.cells(), fill) {}

    const Grid& grid() const { return grid_; }
    int n() const { return grid_.n; }
    std::size_t size() const { return v_.size(); }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    double& at(int ix, int iy) { return v_[grid_.idx(ix, iy)]; }
    double at(int ix, int iy) const { return v_[grid_.idx(ix, iy)]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    double mean() const;
    double max_abs() const;
    double min() const;
    double max() const;
    // Quadrature of the field: dx^2 * sum of values.
    double integral() const;
    // L2 norm under the cell quadrature.
    double l2_norm() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

  private:
    Grid grid_;
    std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);
// Pointwise product on grid values.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);
// Quadrature inner product dx^2 * sum(a*b).
double inner(const ScalarField& a, const ScalarField& b);

struct VectorField {
    ScalarField x;
    ScalarField y;

    VectorField() = default;
    explicit VectorField(const Grid& g) : x(g), y(g) {}
    VectorField(ScalarField fx, ScalarField fy);

    const Grid& grid() const { return x.grid(); }
    double l2_norm_sq() const;
    double l2_norm() const;
    double max_abs() const;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double a, const VectorField& f);
double inner(const VectorField& a, const VectorField& b);

}  // namespace nsms

#endif
