#include "nsms/phase.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace nsms {

BinaryPhase::BinaryPhase(const Grid& g, std::vector<std::uint8_t> chi) : grid_(g), chi_(std::move(chi)) {
    if (chi_.size() != g.cells()) throw std::invalid_argument("BinaryPhase: size mismatch");
    mass_ = 0;
    for (auto& c : chi_) {
        if (c > 1) throw std::invalid_argument("BinaryPhase: values must be 0 or 1");
        mass_ += c;
    }
}

void BinaryPhase::swap_pair(std::size_t from_one, std::size_t to_one) {
    assert(chi_[from_one] == 1 && chi_[to_one] == 0);
    chi_[from_one] = 0;
    chi_[to_one] = 1;
}

ScalarField BinaryPhase::to_field() const {
    ScalarField f(grid_);
    for (std::size_t i = 0; i < chi_.size(); ++i) f[i] = chi_[i];
    return f;
}

BinaryPhase BinaryPhase::shifted(int sx, int sy) const {
    std::vector<std::uint8_t> out(chi_.size());
    const int n = grid_.n;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out[grid_.idx(ix, iy)] = chi_[grid_.idx(grid_.wrap(ix - sx), grid_.wrap(iy - sy))];
    return BinaryPhase(grid_, std::move(out));
}

BinaryPhase make_stripe(const Grid& g, double fraction) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("make_stripe: fraction out of [0,1]");
    const int rows = static_cast<int>(std::lround(fraction * g.n));
    std::vector<std::uint8_t> chi(g.cells(), 0);
    for (int iy = 0; iy < rows; ++iy)
        for (int ix = 0; ix < g.n; ++ix) chi[g.idx(ix, iy)] = 1;
    return BinaryPhase(g, std::move(chi));
}

double periodic_delta(double a, double b, double L) {
    double d = a - b;
    d -= L * std::round(d / L);
    return d;
}

BinaryPhase make_disk(const Grid& g, double cx, double cy, double r) {
    std::vector<std::uint8_t> chi(g.cells(), 0);
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            const double dx = periodic_delta(g.x(ix), cx, g.L);
            const double dy = periodic_delta(g.y(iy), cy, g.L);
            chi[g.idx(ix, iy)] = (dx * dx + dy * dy <= r * r) ? 1 : 0;
        }
    }
    return BinaryPhase(g, std::move(chi));
}

BinaryPhase threshold_field(const ScalarField& f, double level) {
    std::vector<std::uint8_t> chi(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) chi[i] = f[i] > level ? 1 : 0;
    return BinaryPhase(f.grid(), std::move(chi));
}

}  // namespace nsms
