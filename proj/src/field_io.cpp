#include "nsms/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nsms {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

void dump_field(const std::string& path, const ScalarField& f, char kind) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("dump_field: cannot open " + path);
    char header[17];
    std::snprintf(header, sizeof(header), "NSMS%04d%06d%c\n", kFieldFormatVersion, f.n(), kind);
    out.write(header, 16);
    out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!out) throw std::runtime_error("dump_field: write failed for " + path);
}

LoadedField load_field(const std::string& path, double L) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    char header[16];
    in.read(header, 16);
    if (!in || std::memcmp(header, "NSMS", 4) != 0) throw std::runtime_error("load_field: bad magic in " + path);
    const int version = std::stoi(std::string(header + 4, 4));
    if (version != kFieldFormatVersion) throw std::runtime_error("load_field: unsupported version in " + path);
    const int n = std::stoi(std::string(header + 8, 6));
    LoadedField lf;
    lf.kind = header[14];
    lf.field = ScalarField(Grid(n, L));
    in.read(reinterpret_cast<char*>(lf.field.data()), static_cast<std::streamsize>(lf.field.size() * sizeof(double)));
    if (!in) throw std::runtime_error("load_field: truncated data in " + path);
    return lf;
}

void write_pgm(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    const int n = f.n();
    out << "P5\n" << n << " " << n << "\n255\n";
    const double lo = f.min();
    const double hi = f.max();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::vector<unsigned char> row(n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double v = (f.at(ix, iy) - lo) * scale;
            row[ix] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
        }
        out.write(reinterpret_cast<const char*>(row.data()), n);
    }
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

}  // namespace nsms
