#pragma once

#include "fightdet/backbone.hpp"
#include "fightdet/frame.hpp"

namespace fightdet {

// Deterministic stand-in for the CNN backbones. Per frame: grayscale
// (0.299R + 0.587G + 0.114B), average-pool onto an 8x8 grid, flatten to 64
// values in [0,1], then multiply by a seeded random 64xd projection. The
// projection depends only on (d, seed), so the same seed maps frames to
// features identically everywhere.

inline constexpr std::uint64_t kToyDefaultSeed = 0;

namespace detail {

inline std::vector<float> pool_gray_8x8(const Frame& f) {
    std::vector<float> cells(64, 0.0f);
    for (int gy = 0; gy < 8; ++gy) {
        int y0 = gy * f.height / 8;
        int y1 = (gy + 1) * f.height / 8;
        if (y1 <= y0) y1 = std::min(y0 + 1, f.height);
        if (y0 >= f.height) y0 = f.height - 1;
        for (int gx = 0; gx < 8; ++gx) {
            int x0 = gx * f.width / 8;
            int x1 = (gx + 1) * f.width / 8;
            if (x1 <= x0) x1 = std::min(x0 + 1, f.width);
            if (x0 >= f.width) x0 = f.width - 1;
            double acc = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) {
                    double gray;
                    if (f.channels == 3)
                        gray = 0.299 * f.at(x, y, 0) + 0.587 * f.at(x, y, 1) + 0.114 * f.at(x, y, 2);
                    else
                        gray = double(f.at(x, y, 0));
                    acc += gray;
                }
            const double count = double(y1 - y0) * double(x1 - x0);
            cells[std::size_t(gy * 8 + gx)] = float(acc / count / 255.0);
        }
    }
    return cells;
}

} // namespace detail

inline Tensor2 toy_projection(int d, std::uint64_t seed) {
    SeededRng rng(seed);
    return glorot_init<float>(64, d, rng);
}

inline FeatureSequence toy_extract(const SampledClip& clip, int d,
                                   std::uint64_t seed = kToyDefaultSeed) {
    if (d < 1)
        throw ParamError("toy_extract: feature dim must be >= 1");
    if (clip.frames.empty())
        throw DataError("toy_extract: clip '" + clip.source_id + "' has no frames");
    const Tensor2 proj = toy_projection(d, seed);
    Tensor2 pooled(int(clip.frames.size()), 64);
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        const std::vector<float> cells = detail::pool_gray_8x8(clip.frames[i]);
        std::copy(cells.begin(), cells.end(), pooled.row(int(i)));
    }
    FeatureSequence seq;
    seq.matrix = matmul(pooled, proj);
    seq.backbone = "toy-8x8";
    seq.source_id = clip.source_id;
    return seq;
}

} // namespace fightdet
