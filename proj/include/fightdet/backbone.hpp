#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fightdet/mat.hpp"

namespace fightdet {

// Where per-frame features come from. The CNN backbones are external
// feature providers; only their tap-point metadata lives here. toy-8x8 is
// the built-in extractor used for self-contained runs.
struct BackboneSpec {
    std::string name;
    int input_size = 0;  // square input resolution; 0 = any
    int feature_dim = 0;
    std::string tap_description;
};

inline std::vector<BackboneSpec> builtin_backbones(int fight_cnn_dim = 1024, int toy_dim = 64) {
    return {
        {"vgg16-fc2", 224, 4096, "second fully connected layer"},
        {"xception-gap", 299, 2048, "last global average pooling layer"},
        {"fight-cnn-fc1", 299, fight_cnn_dim, "first fully connected layer"},
        {"toy-8x8", 0, toy_dim, "8x8 grayscale pooling with seeded projection"},
    };
}

inline BackboneSpec find_backbone(const std::string& name, int fight_cnn_dim = 1024,
                                  int toy_dim = 64) {
    for (const auto& b : builtin_backbones(fight_cnn_dim, toy_dim))
        if (b.name == name) return b;
    throw ConfigError("unknown backbone '" + name + "'");
}

// k x d matrix of per-frame feature vectors.
struct FeatureSequence {
    Tensor2 matrix;
    std::string backbone;
    std::string source_id;
};

enum class NormalizeMode { none, l2_per_frame };

inline NormalizeMode parse_normalize_mode(const std::string& s) {
    if (s == "none") return NormalizeMode::none;
    if (s == "l2" || s == "l2-per-frame") return NormalizeMode::l2_per_frame;
    throw ParamError("unknown normalize mode '" + s + "'");
}

// l2 mode scales each row to unit Euclidean norm; zero rows stay zero.
inline FeatureSequence feature_normalize(const FeatureSequence& seq, NormalizeMode mode) {
    if (mode == NormalizeMode::none) return seq;
    FeatureSequence out = seq;
    for (int i = 0; i < out.matrix.rows; ++i) {
        double norm2 = 0.0;
        for (int j = 0; j < out.matrix.cols; ++j)
            norm2 += double(out.matrix(i, j)) * double(out.matrix(i, j));
        if (norm2 == 0.0) continue;
        const float inv = float(1.0 / std::sqrt(norm2));
        for (int j = 0; j < out.matrix.cols; ++j) out.matrix(i, j) *= inv;
    }
    return out;
}

} // namespace fightdet
