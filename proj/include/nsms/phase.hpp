#ifndef NSMS_PHASE_HPP
#define NSMS_PHASE_HPP

#include <cstdint>
#include <vector>

#include "nsms/grid.hpp"

namespace nsms {

// Indicator field chi in {0,1} per cell with exact integer mass accounting.
// The physical phase volume is mass() * dx^2.
class BinaryPhase {
  public:
    BinaryPhase() = default;
    BinaryPhase(const Grid& g, std::vector<std::uint8_t> chi);

    const Grid& grid() const { return grid_; }
    int n() const { return grid_.n; }
    long long mass() const { return mass_; }
    double physical_mass() const { return static_cast<double>(mass_) * grid_.cell_area(); }

    std::uint8_t operator[](std::size_t i) const { return chi_[i]; }
    std::uint8_t at(int ix, int iy) const { return chi_[grid_.idx(ix, iy)]; }
    const std::vector<std::uint8_t>& cells() const { return chi_; }

    bool degenerate() const { return mass_ == 0 || mass_ == static_cast<long long>(grid_.cells()); }

    // Flip a 1-cell to 0 and a 0-cell to 1 (mass preserving by construction).
    void swap_pair(std::size_t from_one, std::size_t to_one);

    ScalarField to_field() const;
    BinaryPhase shifted(int sx, int sy) const;

    bool operator==(const BinaryPhase& o) const { return grid_ == o.grid_ && chi_ == o.chi_; }

  private:
    Grid grid_;
    std::vector<std::uint8_t> chi_;
    long long mass_ = 0;
};

// A band of rows 0 <= y < fraction*L; two flat interfaces of length L each.
BinaryPhase make_stripe(const Grid& g, double fraction);
// Periodic disk of radius r centered at (cx, cy) in physical units.
BinaryPhase make_disk(const Grid& g, double cx, double cy, double r);
// Threshold a real field at `level` (cells with f > level become 1).
BinaryPhase threshold_field(const ScalarField& f, double level);

// Shortest periodic displacement from b to a on one axis, in physical units.
double periodic_delta(double a, double b, double L);

}  // namespace nsms

#endif
