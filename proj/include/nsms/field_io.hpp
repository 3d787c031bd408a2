#ifndef NSMS_FIELD_IO_HPP
#define NSMS_FIELD_IO_HPP

#include <string>

#include "nsms/grid.hpp"

namespace nsms {

// Field dump layout: a 16-byte ASCII header
//   bytes  0-3   "NSMS"
//   bytes  4-7   version, 4 decimal digits ("0001")
//   bytes  8-13  n, 6 decimal digits
//   byte   14    kind ('s' scalar, 'c' phase indicator, 'u'/'v' velocity)
//   byte   15    '\n'
// followed by n*n little-endian float64 values, row-major with x fastest.
inline constexpr int kFieldFormatVersion = 1;

void dump_field(const std::string& path, const ScalarField& f, char kind);

struct LoadedField {
    ScalarField field;
    char kind = 's';
};

// The header carries no physical length; the caller supplies L.
LoadedField load_field(const std::string& path, double L);

// 8-bit PGM preview scaled to [min, max] (flat fields map to black).
void write_pgm(const std::string& path, const ScalarField& f);

}  // namespace nsms

#endif
