#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "fightdet/binio.hpp"
#include "fightdet/model.hpp"

namespace fightdet {

// FMD1 model checkpoint, little-endian:
//   magic "FMD1", version u16 = 1,
//   u32 length-prefixed UTF-8 config record (key=value lines),
//   then per ParamStore entry, in insertion order:
//     u16 name length, name bytes, u32 rows, u32 cols, row-major f32 values.

namespace detail {

inline std::string encode_config(const ModelConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "variant=%s\ninput_dim=%d\nhidden_size=%d\nframes=%d\n"
                  "dropout_rate=%.17g\nseed=%" PRIu64 "\n",
                  variant_name(cfg.variant), cfg.input_dim, cfg.hidden_size, cfg.frames,
                  cfg.dropout_rate, cfg.seed);
    return buf;
}

inline ModelConfig decode_config(const std::string& text, const std::string& path) {
    ModelConfig cfg;
    bool seen[6] = {};
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("'" + path + "': bad config line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "variant") {
            cfg.variant = parse_variant(val);
            seen[0] = true;
        } else if (key == "input_dim") {
            cfg.input_dim = std::stoi(val);
            seen[1] = true;
        } else if (key == "hidden_size") {
            cfg.hidden_size = std::stoi(val);
            seen[2] = true;
        } else if (key == "frames") {
            cfg.frames = std::stoi(val);
            seen[3] = true;
        } else if (key == "dropout_rate") {
            cfg.dropout_rate = std::stod(val);
            seen[4] = true;
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
            seen[5] = true;
        } else {
            throw FormatError("'" + path + "': unknown config key '" + key + "'");
        }
    }
    for (bool s : seen)
        if (!s) throw FormatError("'" + path + "': incomplete config record");
    return cfg;
}

} // namespace detail

inline void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                            const ParamStore& params) {
    validate_params(cfg, params);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out.write("FMD1", 4);
    binio::write_u16(out, 1);
    const std::string rec = detail::encode_config(cfg);
    binio::write_u32(out, std::uint32_t(rec.size()));
    out.write(rec.data(), std::streamsize(rec.size()));
    for (const auto& e : params.entries()) {
        binio::write_u16(out, std::uint16_t(e.name.size()));
        out.write(e.name.data(), std::streamsize(e.name.size()));
        binio::write_u32(out, std::uint32_t(e.value.rows));
        binio::write_u32(out, std::uint32_t(e.value.cols));
        for (float v : e.value.v) binio::write_f32(out, v);
    }
    if (!out)
        throw FormatError("short write to '" + path + "'");
}

struct Checkpoint {
    ModelConfig config;
    ParamStore params;
};

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    char magic[4];
    binio::read_exact(in, magic, 4, path);
    if (std::string(magic, 4) != "FMD1")
        throw FormatError("'" + path + "': bad magic, not an FMD1 file");
    const std::uint16_t version = binio::read_u16(in, path);
    if (version != 1)
        throw FormatError("'" + path + "': unsupported FMD1 version " + std::to_string(version));
    const std::uint32_t rec_len = binio::read_u32(in, path);
    if (rec_len > (1u << 20))
        throw FormatError("'" + path + "': implausible config record length");
    std::string rec(rec_len, '\0');
    binio::read_exact(in, rec.data(), rec_len, path);

    Checkpoint ckpt;
    ckpt.config = detail::decode_config(rec, path);
    while (true) {
        char peek;
        if (!in.read(&peek, 1)) break; // clean end of file
        in.putback(peek);
        const std::uint16_t name_len = binio::read_u16(in, path);
        std::string name(name_len, '\0');
        binio::read_exact(in, name.data(), name_len, path);
        const std::uint32_t rows = binio::read_u32(in, path);
        const std::uint32_t cols = binio::read_u32(in, path);
        if (rows == 0 || cols == 0 || std::uint64_t(rows) * cols > (1ull << 31))
            throw FormatError("'" + path + "': implausible tensor shape in entry '" + name + "'");
        Tensor2 value{int(rows), int(cols)};
        for (auto& v : value.v) {
            v = binio::read_f32(in, path);
            if (!std::isfinite(v))
                throw NumericError("'" + path + "': non-finite value in entry '" + name + "'");
        }
        ckpt.params.insert(name, std::move(value));
    }
    validate_params(ckpt.config, ckpt.params);
    return ckpt;
}

} // namespace fightdet
