#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fightdet/errors.hpp"

namespace fightdet {

// Raster frame, 8-bit, row-major, channel-interleaved. channels is 3 (RGB)
// or 1 (grayscale).
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels; // width * height * channels

    Frame() = default;
    Frame(int w, int h, int ch)
        : width(w), height(h), channels(ch),
          pixels(std::size_t(w) * std::size_t(h) * std::size_t(ch), 0) {}

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(std::size_t(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(std::size_t(y) * width + x) * channels + c];
    }
};

// Ordered frames of one clip; all frames share dimensions.
struct FrameSequence {
    std::vector<Frame> frames;
    std::string source_id;
    std::optional<double> fps;
};

// Exactly k frames picked from a longer sequence, with the original indices.
struct SampledClip {
    std::vector<Frame> frames;
    std::vector<int> indices; // nondecreasing, within [0, N-1]
    std::string source_id;
};

// index_j = floor(j * N / k) for j = 0..k-1. Evenly spaced for N > k,
// identity for N == k, repeats indices for N < k.
inline std::vector<int> uniform_sample_indices(int total_frames, int k) {
    if (total_frames < 1)
        throw DataError("uniform_sample_indices: empty input (no frames)");
    if (k < 1)
        throw ParamError("uniform_sample_indices: k must be >= 1");
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < k; ++j)
        idx[std::size_t(j)] = int((std::int64_t(j) * total_frames) / k);
    return idx;
}

inline SampledClip sample_clip(const FrameSequence& seq, int k) {
    SampledClip clip;
    clip.indices = uniform_sample_indices(int(seq.frames.size()), k);
    clip.frames.reserve(clip.indices.size());
    for (int i : clip.indices) clip.frames.push_back(seq.frames[std::size_t(i)]);
    clip.source_id = seq.source_id;
    return clip;
}

// Frames with timestamps in [start, start + duration); frame t sits at t/fps.
inline FrameSequence cut_clip(const FrameSequence& seq, double start_seconds,
                              double duration_seconds = 2.0) {
    if (!seq.fps)
        throw MissingMetadataError("cut_clip: source fps is unknown");
    if (start_seconds < 0.0 || duration_seconds <= 0.0)
        throw ParamError("cut_clip: start must be >= 0 and duration > 0");
    const double fps = *seq.fps;
    const double span = double(seq.frames.size()) / fps;
    if (start_seconds >= span || start_seconds + duration_seconds > span + 1e-9)
        throw RangeError("cut_clip: [" + std::to_string(start_seconds) + ", " +
                         std::to_string(start_seconds + duration_seconds) +
                         ") outside source span of " + std::to_string(span) + " s");
    FrameSequence out;
    out.source_id = seq.source_id;
    out.fps = seq.fps;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const double t = double(i) / fps;
        if (t >= start_seconds && t < start_seconds + duration_seconds)
            out.frames.push_back(seq.frames[i]);
    }
    return out;
}

inline void require_uniform_dims(const FrameSequence& seq) {
    if (seq.frames.empty())
        throw DataError("frame sequence '" + seq.source_id + "' is empty");
    const Frame& f0 = seq.frames.front();
    for (const Frame& f : seq.frames)
        if (f.width != f0.width || f.height != f0.height || f.channels != f0.channels)
            throw DataError("frame sequence '" + seq.source_id + "' mixes frame dimensions");
}

} // namespace fightdet
