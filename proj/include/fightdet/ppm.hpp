#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fightdet/frame.hpp"

namespace fightdet {

namespace detail {

// Reads one whitespace/comment-delimited PPM header token.
inline std::string ppm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') { // comment runs to end of line
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(c));
    }
    return tok;
}

} // namespace detail

// Binary P6, maxval 255 only.
inline Frame read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    std::string magic = detail::ppm_token(in);
    if (magic != "P6")
        throw FormatError("'" + path + "': not a binary P6 PPM (magic '" + magic + "')");
    auto parse_int = [&](const char* what) {
        std::string tok = detail::ppm_token(in);
        if (tok.empty() || tok.size() > 9 ||
            tok.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("'" + path + "': bad " + std::string(what) + " field");
        return std::stoi(tok);
    };
    const int w = parse_int("width");
    const int h = parse_int("height");
    const int maxval = parse_int("maxval");
    if (w < 1 || h < 1)
        throw FormatError("'" + path + "': zero-sized image");
    if (maxval != 255)
        throw FormatError("'" + path + "': unsupported maxval " + std::to_string(maxval));
    Frame f(w, h, 3);
    in.read(reinterpret_cast<char*>(f.pixels.data()), std::streamsize(f.pixels.size()));
    if (std::size_t(in.gcount()) != f.pixels.size())
        throw FormatError("'" + path + "': truncated pixel data");
    return f;
}

inline void write_ppm(const Frame& frame, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
    if (frame.channels == 3) {
        out.write(reinterpret_cast<const char*>(frame.pixels.data()),
                  std::streamsize(frame.pixels.size()));
    } else { // grayscale replicated into RGB
        for (std::uint8_t p : frame.pixels) {
            char rgb[3] = {char(p), char(p), char(p)};
            out.write(rgb, 3);
        }
    }
    if (!out)
        throw FormatError("short write to '" + path + "'");
}

// Loads every *.ppm in the directory in filename order and validates that
// frame dimensions agree.
inline FrameSequence load_frame_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw DataError("'" + dir + "' is not a directory");
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            names.push_back(entry.path().filename().string());
    if (names.empty())
        throw DataError("'" + dir + "': empty input, no .ppm frames found");
    std::sort(names.begin(), names.end());

    FrameSequence seq;
    seq.source_id = fs::path(dir).filename().string();
    seq.frames.reserve(names.size());
    for (const std::string& name : names)
        seq.frames.push_back(read_ppm((fs::path(dir) / name).string()));
    require_uniform_dims(seq);
    return seq;
}

} // namespace fightdet
