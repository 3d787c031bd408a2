#include "nsms/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsms {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

Grid::Grid(int n_, double L_) : n(n_), L(L_) {
    if (n < 8 || !power_of_two(n)) throw std::invalid_argument("Grid: n must be a power of two >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("Grid: L must be positive");
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s / static_cast<double>(v_.size());
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

double ScalarField::min() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
}

double ScalarField::max() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
}

double ScalarField::integral() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s * grid_.cell_area();
}

double ScalarField::l2_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s * grid_.cell_area());
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    assert(grid_ == o.grid_);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (double& x : v_) x *= a;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    assert(a.grid() == b.grid());
    ScalarField r(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

double inner(const ScalarField& a, const ScalarField& b) {
    assert(a.grid() == b.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid().cell_area();
}

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {
    assert(x.grid() == y.grid());
}

double VectorField::l2_norm_sq() const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * x[i] + y[i] * y[i];
    return s * grid().cell_area();
}

double VectorField::l2_norm() const { return std::sqrt(l2_norm_sq()); }

double VectorField::max_abs() const { return std::max(x.max_abs(), y.max_abs()); }

VectorField operator+(const VectorField& a, const VectorField& b) { return {a.x + b.x, a.y + b.y}; }
VectorField operator-(const VectorField& a, const VectorField& b) { return {a.x - b.x, a.y - b.y}; }
VectorField operator*(double a, const VectorField& f) { return {a * f.x, a * f.y}; }

double inner(const VectorField& a, const VectorField& b) { return inner(a.x, b.x) + inner(a.y, b.y); }

}  // namespace nsms
