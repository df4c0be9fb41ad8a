#pragma once

#include <cmath>
#include <vector>

#include "fightdet/frame.hpp"

namespace fightdet {

namespace detail {

// Catmull-Rom family cubic kernel, a = -0.5.
inline double cubic_weight(double t) {
    constexpr double a = -0.5;
    t = std::fabs(t);
    if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    return 0.0;
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

} // namespace detail

// Separable bicubic resampling with pixel-center alignment and clamp-to-edge
// borders; output rounded half-up into [0,255]. Resizing to the source size
// reproduces the input exactly.
inline Frame bicubic_resize(const Frame& src, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1)
        throw ParamError("bicubic_resize: target must be >= 1x1");
    Frame dst(target_w, target_h, src.channels);
    const double sx = double(src.width) / double(target_w);
    const double sy = double(src.height) / double(target_h);

    std::vector<double> col_acc(std::size_t(src.channels));
    for (int yd = 0; yd < target_h; ++yd) {
        const double fy = (double(yd) + 0.5) * sy - 0.5;
        const int y0 = int(std::floor(fy));
        double wy[4];
        for (int i = 0; i < 4; ++i) wy[i] = detail::cubic_weight(fy - double(y0 - 1 + i));
        for (int xd = 0; xd < target_w; ++xd) {
            const double fx = (double(xd) + 0.5) * sx - 0.5;
            const int x0 = int(std::floor(fx));
            double wx[4];
            for (int i = 0; i < 4; ++i) wx[i] = detail::cubic_weight(fx - double(x0 - 1 + i));
            for (int c = 0; c < src.channels; ++c) col_acc[std::size_t(c)] = 0.0;
            for (int i = 0; i < 4; ++i) {
                const int ys = detail::clamp_index(y0 - 1 + i, src.height);
                for (int j = 0; j < 4; ++j) {
                    const int xs = detail::clamp_index(x0 - 1 + j, src.width);
                    const double w = wy[i] * wx[j];
                    for (int c = 0; c < src.channels; ++c)
                        col_acc[std::size_t(c)] += w * double(src.at(xs, ys, c));
                }
            }
            for (int c = 0; c < src.channels; ++c) {
                double v = std::floor(col_acc[std::size_t(c)] + 0.5);
                if (v < 0.0) v = 0.0;
                if (v > 255.0) v = 255.0;
                dst.at(xd, yd, c) = std::uint8_t(v);
            }
        }
    }
    return dst;
}

} // namespace fightdet
