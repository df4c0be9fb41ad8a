#pragma once

#include <cmath>
#include <fstream>

#include "fightdet/backbone.hpp"
#include "fightdet/binio.hpp"

namespace fightdet {

// FVS1 feature file, little-endian:
//   bytes 0-3  magic "FVS1"
//   bytes 4-5  version u16 = 1
//   bytes 6-7  reserved u16 = 0
//   bytes 8-11 k u32, bytes 12-15 d u32
//   then k*d IEEE-754 f32, row-major
// File size is always 16 + k*d*4 bytes.

inline void write_features(const FeatureSequence& seq, const std::string& path) {
    if (seq.matrix.rows < 1 || seq.matrix.cols < 1)
        throw ParamError("write_features: empty feature matrix");
    if (!all_finite(seq.matrix))
        throw NumericError("write_features: non-finite feature values");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out.write("FVS1", 4);
    binio::write_u16(out, 1);
    binio::write_u16(out, 0);
    binio::write_u32(out, std::uint32_t(seq.matrix.rows));
    binio::write_u32(out, std::uint32_t(seq.matrix.cols));
    for (float v : seq.matrix.v) binio::write_f32(out, v);
    if (!out)
        throw FormatError("short write to '" + path + "'");
}

inline FeatureSequence read_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    char magic[4];
    binio::read_exact(in, magic, 4, path);
    if (std::string(magic, 4) != "FVS1")
        throw FormatError("'" + path + "': bad magic, not an FVS1 file");
    const std::uint16_t version = binio::read_u16(in, path);
    if (version != 1)
        throw FormatError("'" + path + "': unsupported FVS1 version " + std::to_string(version));
    binio::read_u16(in, path); // reserved
    const std::uint32_t k = binio::read_u32(in, path);
    const std::uint32_t d = binio::read_u32(in, path);
    if (k == 0 || d == 0 || std::uint64_t(k) * d > (1ull << 31))
        throw FormatError("'" + path + "': implausible shape " + std::to_string(k) + "x" +
                          std::to_string(d));
    FeatureSequence seq;
    seq.matrix = Tensor2(int(k), int(d));
    seq.source_id = path;
    for (auto& v : seq.matrix.v) {
        v = binio::read_f32(in, path);
        if (!std::isfinite(v))
            throw NumericError("'" + path + "': non-finite value in payload");
    }
    char extra;
    if (in.read(&extra, 1) && in.gcount() == 1)
        throw FormatError("'" + path + "': trailing bytes after payload");
    return seq;
}

} // namespace fightdet
