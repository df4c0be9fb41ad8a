#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "fightdet/errors.hpp"

// Little-endian binary primitives shared by the FVS1 and FMD1 formats.
namespace fightdet::binio {

inline void write_u16(std::ostream& out, std::uint16_t v) {
    const char b[2] = {char(v & 0xFF), char((v >> 8) & 0xFF)};
    out.write(b, 2);
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF),
                       char((v >> 24) & 0xFF)};
    out.write(b, 4);
}

inline void write_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

inline void read_exact(std::istream& in, char* buf, std::size_t n, const std::string& what) {
    in.read(buf, std::streamsize(n));
    if (std::size_t(in.gcount()) != n)
        throw FormatError(what + ": truncated file");
}

inline std::uint16_t read_u16(std::istream& in, const std::string& what) {
    unsigned char b[2];
    read_exact(in, reinterpret_cast<char*>(b), 2, what);
    return std::uint16_t(b[0] | (b[1] << 8));
}

inline std::uint32_t read_u32(std::istream& in, const std::string& what) {
    unsigned char b[4];
    read_exact(in, reinterpret_cast<char*>(b), 4, what);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

inline float read_f32(std::istream& in, const std::string& what) {
    const std::uint32_t bits = read_u32(in, what);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

} // namespace fightdet::binio
