#include "capssc/checkpoint.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace capssc {

namespace {

constexpr char magic[8] = {'C', 'A', 'P', 'S', 'S', 'C', '0', '1'};
constexpr std::uint32_t format_version = 1;

std::uint32_t crc_of(const std::vector<char>& bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

template <typename T>
void append_raw(std::vector<char>& out, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

}  // namespace

void checkpoint_write(const quarter_grid& g, double time, const std::string& path) {
    std::vector<char> bytes;
    bytes.reserve(32 + g.values.size() * sizeof(double) + 4);
    bytes.insert(bytes.end(), magic, magic + 8);
    append_raw(bytes, format_version);
    append_raw(bytes, static_cast<std::uint32_t>(g.n));
    append_raw(bytes, time);
    append_raw(bytes, g.spacing);
    const char* vals = reinterpret_cast<const char*>(g.values.data());
    bytes.insert(bytes.end(), vals, vals + g.values.size() * sizeof(double));
    const std::uint32_t crc = crc_of(bytes);
    append_raw(bytes, crc);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw checkpoint_error("cannot open checkpoint file for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw checkpoint_error("short write to checkpoint file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw checkpoint_error("cannot move checkpoint into place: " + path);
}

checkpoint_data checkpoint_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw checkpoint_error("cannot open checkpoint file: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 36) throw checkpoint_error("checkpoint file truncated: " + path);

    if (std::memcmp(bytes.data(), magic, 8) != 0)
        throw checkpoint_error("not a field checkpoint (bad magic): " + path);
    std::uint32_t version = 0, side = 0;
    double time = 0.0, spacing = 0.0;
    std::memcpy(&version, bytes.data() + 8, 4);
    std::memcpy(&side, bytes.data() + 12, 4);
    std::memcpy(&time, bytes.data() + 16, 8);
    std::memcpy(&spacing, bytes.data() + 24, 8);
    if (version != format_version)
        throw checkpoint_error("incompatible checkpoint version " + std::to_string(version) + " (expected " +
                               std::to_string(format_version) + "): " + path);
    if (side == 0 || side > (1u << 16)) throw checkpoint_error("implausible grid side in checkpoint: " + path);

    const std::size_t payload = static_cast<std::size_t>(side) * side * sizeof(double);
    if (bytes.size() != 32 + payload + 4) throw checkpoint_error("checkpoint file truncated: " + path);

    std::uint32_t stored_crc = 0;
    std::memcpy(&stored_crc, bytes.data() + 32 + payload, 4);
    std::vector<char> body(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(32 + payload));
    if (crc_of(body) != stored_crc) throw checkpoint_error("checkpoint CRC mismatch: " + path);

    checkpoint_data data;
    data.time = time;
    const int n = static_cast<int>(side);
    data.grid = quarter_grid(n, spacing * (n - 1), axis_parity::odd, axis_parity::odd);
    std::memcpy(data.grid.values.data(), bytes.data() + 32, payload);
    return data;
}

}  // namespace capssc
