#pragma once

#include <stdexcept>
#include <string>

#include "capssc/grid.hpp"

namespace capssc {

struct checkpoint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct checkpoint_data {
    quarter_grid grid{16, 2.0, axis_parity::odd, axis_parity::odd};
    double time = 0.0;
};

// Binary field snapshot: 32-byte header (8-byte magic "CAPSSC01", u32
// version, u32 side, f64 time, f64 spacing), row-major little-endian f64
// values, CRC32 trailer. Writes go to a temp file renamed into place.
void checkpoint_write(const quarter_grid& g, double time, const std::string& path);
checkpoint_data checkpoint_read(const std::string& path);

}  // namespace capssc
